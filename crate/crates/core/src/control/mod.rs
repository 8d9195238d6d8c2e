//! Controlled finite dynamical systems and the hexagonal two-strain virus
//! model over GF(4).
//!
//! Colours are Green `0`, White `a`, Yellow `a^2` and Red `1`. White cells
//! are uninfected; the controller may inoculate White cells with Green to
//! keep Red and Yellow away from the outer ring.

mod grid;
mod virus;

use std::collections::BTreeSet;

use serde::Serialize;

pub use grid::{color_rgb, HexGrid};
pub use virus::{
    admissible_indicator, apply_control, check_varieties, constraint_cells, constraint_indicator,
    derived_rules, format_grid_state, format_trajectory, parse_grid_state, rule_table,
    virus_polynomial, virus_step, Color, GridState, VarietyCheck, CELL_271, CENTER_RINGS,
    NUM_CELLS,
};

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::Polynomial;

/// `F: k^n x k^m -> k^n` with varieties of admissible inputs `Q`, initial
/// states `P` and final states `U`, each given by polynomials whose common
/// zeros form the variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlledFDS {
    field: Field,
    n: usize,
    m: usize,
    transition: Vec<Polynomial>,
    input_constraints: Vec<Polynomial>,
    initial_constraints: Vec<Polynomial>,
    final_constraints: Vec<Polynomial>,
}

impl ControlledFDS {
    /// `transition` and `input_constraints` live in `n + m` variables
    /// (state first, then controls); the other constraints in `n`.
    pub fn new(
        field: Field,
        n: usize,
        m: usize,
        transition: Vec<Polynomial>,
        input_constraints: Vec<Polynomial>,
        initial_constraints: Vec<Polynomial>,
        final_constraints: Vec<Polynomial>,
    ) -> Result<ControlledFDS> {
        if transition.len() != n {
            return Err(Error::ArityError {
                expected: n,
                found: transition.len(),
            });
        }
        let groups = [
            (&transition, n + m),
            (&input_constraints, n + m),
            (&initial_constraints, n),
            (&final_constraints, n),
        ];
        for (polys, nvars) in groups {
            for p in polys.iter() {
                if p.field() != field {
                    return Err(Error::FieldMismatch {
                        left: p.field().to_string(),
                        right: field.to_string(),
                    });
                }
                if p.nvars() != nvars {
                    return Err(Error::ArityError {
                        expected: nvars,
                        found: p.nvars(),
                    });
                }
            }
        }
        Ok(ControlledFDS {
            field,
            n,
            m,
            transition,
            input_constraints,
            initial_constraints,
            final_constraints,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn state_dim(&self) -> usize {
        self.n
    }

    pub fn control_dim(&self) -> usize {
        self.m
    }

    fn check(&self, v: &[Elem], len: usize) -> Result<()> {
        if v.len() != len {
            return Err(Error::ArityError {
                expected: len,
                found: v.len(),
            });
        }
        if let Some(&bad) = v.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::Invalid(format!("{bad} is not an element of {}", self.field)));
        }
        Ok(())
    }

    fn joined(x: &[Elem], u: &[Elem]) -> Vec<Elem> {
        x.iter().chain(u).copied().collect()
    }

    pub fn is_admissible_input(&self, x: &[Elem], u: &[Elem]) -> Result<bool> {
        self.check(x, self.n)?;
        self.check(u, self.m)?;
        let xu = Self::joined(x, u);
        Ok(self.input_constraints.iter().all(|q| q.eval(&xu) == 0))
    }

    pub fn is_admissible_initial(&self, x: &[Elem]) -> Result<bool> {
        self.check(x, self.n)?;
        Ok(self.initial_constraints.iter().all(|p| p.eval(x) == 0))
    }

    pub fn is_final(&self, x: &[Elem]) -> Result<bool> {
        self.check(x, self.n)?;
        Ok(self.final_constraints.iter().all(|p| p.eval(x) == 0))
    }

    /// `F(x, u)`; the input must lie in the admissible-input variety.
    pub fn step(&self, x: &[Elem], u: &[Elem]) -> Result<State> {
        if !self.is_admissible_input(x, u)? {
            return Err(Error::Invalid(format!(
                "control {:?} is not admissible at state {:?}",
                u, x
            )));
        }
        let xu = Self::joined(x, u);
        Ok(self.transition.iter().map(|f| f.eval(&xu)).collect())
    }

    /// Apply a control sequence from an admissible initial state; returns
    /// every visited state, the initial one first.
    pub fn simulate(&self, x0: &[Elem], controls: &[Vec<Elem>]) -> Result<Vec<State>> {
        if !self.is_admissible_initial(x0)? {
            return Err(Error::InadmissibleStart(format!("{x0:?}")));
        }
        let mut out = vec![x0.to_vec()];
        for u in controls {
            let next = self.step(out.last().expect("nonempty"), u)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Unit cost `c` per inoculated cell and overhead `d` per nonempty intervention.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CostParams {
    pub c: f64,
    pub d: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams { c: 1.0, d: 0.0 }
    }
}

/// Inoculated cells per step (0-based indices).
pub type ControlSchedule = Vec<Vec<usize>>;

/// `sum_i (c * c_i + [c_i != 0] * d)` with `c_i` the number of cells in step `i`.
pub fn cost(schedule: &[Vec<usize>], params: &CostParams) -> f64 {
    schedule
        .iter()
        .filter(|u| !u.is_empty())
        .map(|u| params.c * u.len() as f64 + params.d)
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControllerParams {
    pub cost: CostParams,
    /// Maximum number of simulated steps.
    pub horizon: usize,
    /// Only threats in rings at or beyond this one trigger inoculation.
    pub barrier_ring: usize,
    /// Maximum cells inoculated per step; `None` is unlimited.
    pub budget: Option<usize>,
    /// Treat cell 271 as part of the outer ring.
    pub include_271: bool,
}

impl Default for ControllerParams {
    fn default() -> Self {
        ControllerParams {
            cost: CostParams::default(),
            horizon: 100,
            barrier_ring: 0,
            budget: None,
            include_271: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    FixedPoint,
    Horizon,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ControllerOutcome {
    /// Cells inoculated before each simulated step.
    pub schedule: ControlSchedule,
    /// Initial state followed by the state after each step.
    pub trajectory: Vec<GridState>,
    pub termination: Termination,
    pub goal_reached: bool,
    pub total_cost: f64,
}

fn threatens(x: Elem) -> bool {
    matches!(Color::from_value(x), Color::Red | Color::Yellow)
}

/// White cells at or beyond `barrier` that would turn Red or Yellow next step.
fn threatened(grid: &HexGrid, s: &[Elem], barrier: usize) -> BTreeSet<usize> {
    (0..s.len())
        .filter(|&c| {
            s[c] == Color::White.value()
                && grid.ring(c) >= barrier
                && threatens(virus::next_value(grid, s, c))
        })
        .collect()
}

/// Greedy containment: before every step, inoculate White cells one at a
/// time, each time picking the cell that removes the most pending Red/Yellow
/// infections (lowest index on ties), until none remain or the per-step
/// budget is spent. Stops at a fixed point or after `horizon` steps.
pub fn greedy_controller(
    grid: &HexGrid,
    initial: &[Elem],
    params: &ControllerParams,
) -> Result<ControllerOutcome> {
    let chk = check_varieties(grid, initial, params.include_271)?;
    if !chk.admissible_init {
        return Err(Error::InadmissibleStart(
            "every cell outside the centre must be White".into(),
        ));
    }
    let white = Color::White.value();
    let mut state = initial.to_vec();
    let mut trajectory = vec![state.clone()];
    let mut schedule = Vec::new();
    let mut termination = Termination::Horizon;
    let mut constraint_held = chk.constraint_ok;
    for _ in 0..params.horizon {
        if virus::step_unchecked(grid, &state) == state {
            termination = Termination::FixedPoint;
            break;
        }
        let mut step_controls = Vec::new();
        let mut pending = threatened(grid, &state, params.barrier_ring);
        while !pending.is_empty() && params.budget.is_none_or(|b| step_controls.len() < b) {
            let mut candidates: BTreeSet<usize> = pending.clone();
            for &c in &pending {
                candidates.extend(grid.neighbors(c).filter(|&n| state[n] == white));
            }
            let mut best: Option<(i64, usize)> = None;
            for &c in &candidates {
                // Only c and its neighbours can change their pending status.
                let mut affected: Vec<usize> = grid.neighbors(c).collect();
                affected.push(c);
                let before = affected.iter().filter(|a| pending.contains(a)).count() as i64;
                state[c] = 0;
                let after = affected
                    .iter()
                    .filter(|&&a| {
                        state[a] == white
                            && grid.ring(a) >= params.barrier_ring
                            && threatens(virus::next_value(grid, &state, a))
                    })
                    .count() as i64;
                state[c] = white;
                let gain = before - after;
                if best.is_none_or(|(g, _)| gain > g) {
                    best = Some((gain, c));
                }
            }
            let (_, c) = best.expect("pending cells are candidates");
            state[c] = 0;
            step_controls.push(c);
            pending = threatened(grid, &state, params.barrier_ring);
        }
        step_controls.sort_unstable();
        state = virus::step_unchecked(grid, &state);
        constraint_held &= check_varieties(grid, &state, params.include_271)?.constraint_ok;
        schedule.push(step_controls);
        trajectory.push(state.clone());
    }
    let total_cost = cost(&schedule, &params.cost);
    Ok(ControllerOutcome {
        schedule,
        trajectory,
        termination,
        goal_reached: constraint_held,
        total_cost,
    })
}

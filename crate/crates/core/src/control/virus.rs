use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::grid::HexGrid;
use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::{elementary_symmetric, Polynomial};

/// Number of cells in the standard board of radius 10.
pub const NUM_CELLS: usize = 331;
/// Rings forming the inoculation centre (19 cells).
pub const CENTER_RINGS: usize = 2;
/// 0-based index of the paper's `x_271`, the last cell of ring 9.
pub const CELL_271: usize = 270;

const A: Elem = 1;
const A2: Elem = 2;

/// Cell colours and their GF(4) values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Color {
    Green,
    White,
    Yellow,
    Red,
}

impl Color {
    pub const ALL: [Color; 4] = [Color::Green, Color::White, Color::Yellow, Color::Red];

    pub fn value(self) -> Elem {
        match self {
            Color::Green => 0,
            Color::White => A,
            Color::Yellow => A2,
            Color::Red => Field::gf4().one(),
        }
    }

    pub fn from_value(x: Elem) -> Color {
        match x {
            0 => Color::Green,
            A => Color::White,
            A2 => Color::Yellow,
            _ => Color::Red,
        }
    }

    pub fn is_infected(self) -> bool {
        self != Color::White
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Green => "Green",
            Color::White => "White",
            Color::Yellow => "Yellow",
            Color::Red => "Red",
        })
    }
}

/// A board state: one GF(4) value per cell, ring-major.
pub type GridState = Vec<Elem>;

/// The update rule `f = g2^2 + g2 g1^3 + a^2 g1^3 + a^2 g1^2 + a^2 g1` in the
/// six neighbour values, with `g1`, `g2` the elementary symmetric
/// polynomials of degree 1 and 2.
pub fn virus_polynomial() -> Polynomial {
    let k = Field::gf4();
    let vars: Vec<usize> = (0..6).collect();
    let g1 = elementary_symmetric(k, 6, 1, &vars).expect("valid degree");
    let g2 = elementary_symmetric(k, 6, 2, &vars).expect("valid degree");
    let g1_2 = g1.mul(&g1);
    let g1_3 = g1_2.mul(&g1);
    g2.mul(&g2)
        .add(&g2.mul(&g1_3))
        .add(&g1_3.scale(A2))
        .add(&g1_2.scale(A2))
        .add(&g1.scale(A2))
}

/// `f` tabulated over all 4^6 neighbour configurations, `y1` most significant.
pub fn rule_table() -> &'static [Elem] {
    static TABLE: OnceLock<Vec<Elem>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let f = virus_polynomial();
        (0..4096usize)
            .map(|v| {
                let y: Vec<Elem> = (0..6).map(|i| (v >> (2 * (5 - i)) & 3) as Elem).collect();
                f.eval(&y)
            })
            .collect()
    })
}

fn rule(ys: [Elem; 6]) -> Elem {
    rule_table()[ys.iter().fold(0usize, |acc, &y| acc * 4 + y as usize)]
}

/// Outcome of `f` for every neighbourhood with exactly `infected` non-White
/// neighbours, listed as sorted colour multisets.
pub fn derived_rules(infected: usize) -> Vec<(Vec<Color>, Color)> {
    fn multisets(k: usize, from: usize, cur: &mut Vec<Color>, out: &mut Vec<Vec<Color>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let infected = [Color::Green, Color::Yellow, Color::Red];
        for i in from..3 {
            cur.push(infected[i]);
            multisets(k, i, cur, out);
            cur.pop();
        }
    }
    let mut sets = Vec::new();
    multisets(infected.min(6), 0, &mut Vec::new(), &mut sets);
    sets.into_iter()
        .map(|cs| {
            let mut ys = [A; 6];
            for (slot, c) in ys.iter_mut().zip(&cs) {
                *slot = c.value();
            }
            let out = Color::from_value(rule(ys));
            (cs, out)
        })
        .collect()
}

fn check_state(grid: &HexGrid, state: &[Elem]) -> Result<()> {
    if state.len() != grid.num_cells() {
        return Err(Error::ArityError {
            expected: grid.num_cells(),
            found: state.len(),
        });
    }
    if let Some(&bad) = state.iter().find(|&&x| x > 3) {
        return Err(Error::Invalid(format!("{bad} is not an element of GF(4)")));
    }
    Ok(())
}

/// Value `f` would give `cell`, neighbours outside the board read as White.
pub(crate) fn next_value(grid: &HexGrid, state: &[Elem], cell: usize) -> Elem {
    rule(grid.neighbor_slots(cell).map(|n| n.map_or(A, |j| state[j])))
}

/// One synchronous step: White cells take `f` of their neighbours, infected
/// cells keep their colour.
pub fn virus_step(grid: &HexGrid, state: &[Elem]) -> Result<GridState> {
    check_state(grid, state)?;
    Ok(step_unchecked(grid, state))
}

pub(crate) fn step_unchecked(grid: &HexGrid, state: &[Elem]) -> GridState {
    (0..state.len())
        .map(|c| {
            if state[c] == A {
                next_value(grid, state, c)
            } else {
                state[c]
            }
        })
        .collect()
}

/// Cells whose membership is tested by the constraint and goal varieties.
pub fn constraint_cells(grid: &HexGrid, include_271: bool) -> Vec<usize> {
    let mut cells: Vec<usize> = grid.outer_ring().collect();
    if include_271 && grid.num_cells() == NUM_CELLS {
        cells.insert(0, CELL_271);
    }
    cells
}

fn gf4_univariate(f: impl Fn(&Polynomial) -> Polynomial) -> Polynomial {
    f(&Polynomial::var(Field::gf4(), 1, 0))
}

/// `1 - prod (1 - (x_i - a)^3)` over the cells outside the centre; zero
/// exactly on admissible initial states.
pub fn admissible_indicator(grid: &HexGrid, state: &[Elem]) -> Elem {
    let k = Field::gf4();
    let factor = gf4_univariate(|x| {
        let shifted = x.sub(&Polynomial::constant(k, 1, A));
        Polynomial::one(k, 1).sub(&shifted.pow(3))
    });
    let prod = (grid.disc(CENTER_RINGS).end..grid.num_cells())
        .fold(k.one(), |acc, c| k.mul(acc, factor.eval(&[state[c]])));
    k.sub(k.one(), prod)
}

/// `1 - prod (1 - (x_i^2 - a x_i)^3)` over the constraint cells; zero
/// exactly when each of them is Green or White.
pub fn constraint_indicator(grid: &HexGrid, state: &[Elem], include_271: bool) -> Elem {
    let k = Field::gf4();
    let factor = gf4_univariate(|x| {
        let inner = x.mul(x).sub(&x.scale(A));
        Polynomial::one(k, 1).sub(&inner.pow(3))
    });
    let prod = constraint_cells(grid, include_271)
        .into_iter()
        .fold(k.one(), |acc, c| k.mul(acc, factor.eval(&[state[c]])));
    k.sub(k.one(), prod)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyCheck {
    /// Every cell outside the centre is White.
    pub admissible_init: bool,
    /// Every constraint cell is Green or White.
    pub constraint_ok: bool,
    /// The state is a fixed point of the dynamics and satisfies the constraint.
    pub goal: bool,
}

/// Direct membership tests, cross-checked against the indicator polynomials.
pub fn check_varieties(grid: &HexGrid, state: &[Elem], include_271: bool) -> Result<VarietyCheck> {
    check_state(grid, state)?;
    let admissible_init = (grid.disc(CENTER_RINGS).end..grid.num_cells()).all(|c| state[c] == A);
    let constraint_ok = constraint_cells(grid, include_271)
        .into_iter()
        .all(|c| state[c] == 0 || state[c] == A);
    assert_eq!(admissible_init, admissible_indicator(grid, state) == 0);
    assert_eq!(constraint_ok, constraint_indicator(grid, state, include_271) == 0);
    let goal = constraint_ok && step_unchecked(grid, state) == state;
    Ok(VarietyCheck {
        admissible_init,
        constraint_ok,
        goal,
    })
}

/// Inoculate `cells` with Green; each must currently be White.
pub fn apply_control(state: &[Elem], cells: &[usize]) -> Result<GridState> {
    let mut next = state.to_vec();
    for &c in cells {
        match next.get(c) {
            Some(&A) => next[c] = 0,
            Some(_) => return Err(Error::IllegalControl { cell: c + 1 }),
            None => {
                return Err(Error::Invalid(format!(
                    "cell {} is outside the board of {} cells",
                    c + 1,
                    state.len()
                )))
            }
        }
    }
    Ok(next)
}

/// Parse whitespace-separated GF(4) literals in ring-major order; `#` starts
/// a comment.
pub fn parse_grid_state(text: &str, cells: usize) -> Result<GridState> {
    let k = Field::gf4();
    let mut out = Vec::with_capacity(cells);
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("");
        let mut col = 0;
        for token in content.split_whitespace() {
            let start = col + content[col..].find(token).expect("token is in line");
            col = start + token.len();
            let v = k
                .parse_literal(token)
                .map_err(|e| Error::parse(lineno + 1, start + 1, e.to_string()))?;
            out.push(v);
        }
    }
    if out.len() != cells {
        return Err(Error::ArityError {
            expected: cells,
            found: out.len(),
        });
    }
    Ok(out)
}

/// One line of literals per ring.
pub fn format_grid_state(grid: &HexGrid, state: &[Elem]) -> String {
    let k = Field::gf4();
    let mut s = String::new();
    for r in 0..=grid.radius() {
        let start = if r == 0 { 0 } else { grid.disc(r - 1).end };
        let row: Vec<String> = (start..grid.disc(r).end).map(|c| k.format(state[c])).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Trajectory dump, one state per line.
pub fn format_trajectory(states: &[GridState]) -> String {
    let k = Field::gf4();
    states
        .iter()
        .map(|s| {
            let row: Vec<String> = s.iter().map(|&x| k.format(x)).collect();
            row.join(" ") + "\n"
        })
        .collect()
}

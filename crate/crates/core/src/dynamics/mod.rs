//! Finite dynamical systems `f = (f1, ..., fn): k^n -> k^n` and their
//! structure: phase space, periodic points, dependency graph, the monomial
//! fixed-point criterion and the cycle structure of linear systems.

mod depgraph;
mod linear;
mod monomial;
mod phase;

use std::fmt;

use rayon::prelude::*;

pub use depgraph::{dependency_graph, DependencyGraph, StrongComponent};
pub use linear::{
    invariant_factors, linear_cycle_structure, CycleCount, LinearSystemAnalysis, Matrix, UniPoly,
};
pub use monomial::{monomial_fixed_point_test, MonomialVerdict};
pub use phase::{phase_space, Component, PhaseSpace};

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::Polynomial;

/// Default cap on the number of states enumerated exhaustively.
pub const DEFAULT_BOUND: u64 = 1_000_000;

/// A state of `k^n`.
pub type State = Vec<Elem>;

/// `n` reduced coordinate polynomials over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDynamicalSystem {
    field: Field,
    nvars: usize,
    coords: Vec<Polynomial>,
}

impl FiniteDynamicalSystem {
    pub fn new(coords: Vec<Polynomial>) -> Result<FiniteDynamicalSystem> {
        let Some(first) = coords.first() else {
            return Err(Error::Invalid("a system needs at least one coordinate".into()));
        };
        let field = first.field();
        let nvars = coords.len();
        for c in &coords {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: c.field().to_string(),
                    right: field.to_string(),
                });
            }
            if c.nvars() != nvars {
                return Err(Error::ArityError {
                    expected: nvars,
                    found: c.nvars(),
                });
            }
        }
        Ok(FiniteDynamicalSystem {
            field,
            nvars,
            coords,
        })
    }

    pub fn identity(field: Field, n: usize) -> FiniteDynamicalSystem {
        FiniteDynamicalSystem {
            field,
            nvars: n,
            coords: (0..n).map(|i| Polynomial::var(field, n, i)).collect(),
        }
    }

    /// The linear system `x -> A x`.
    pub fn from_matrix(a: &Matrix) -> Result<FiniteDynamicalSystem> {
        if a.rows() != a.cols() {
            return Err(Error::ShapeError {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let k = a.field();
        let n = a.rows();
        let coords = (0..n)
            .map(|i| {
                (0..n).fold(Polynomial::zero(k, n), |acc, j| {
                    acc.add(&Polynomial::var(k, n, j).scale(a.get(i, j)))
                })
            })
            .collect();
        FiniteDynamicalSystem::new(coords)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn coordinates(&self) -> &[Polynomial] {
        &self.coords
    }

    /// `q^n`, or `None` if it does not fit in a `u64`.
    pub fn num_states(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.nvars as u32)
    }

    pub(crate) fn check_bound(&self, bound: u64) -> Result<u64> {
        match self.num_states() {
            Some(n) if n <= bound => Ok(n),
            other => Err(Error::TooLarge {
                states: other
                    .map(u128::from)
                    .unwrap_or_else(|| (self.field.order() as u128).saturating_pow(self.nvars as u32)),
                bound,
            }),
        }
    }

    /// Mixed-radix index of a state, `x1` most significant.
    pub fn encode(&self, state: &[Elem]) -> u64 {
        let q = self.field.order() as u64;
        state.iter().fold(0, |acc, &x| acc * q + x as u64)
    }

    pub fn decode(&self, mut index: u64) -> State {
        let q = self.field.order() as u64;
        let mut s = vec![0; self.nvars];
        for x in s.iter_mut().rev() {
            *x = (index % q) as Elem;
            index /= q;
        }
        s
    }

    pub fn step(&self, state: &[Elem]) -> Result<State> {
        if state.len() != self.nvars {
            return Err(Error::ArityError {
                expected: self.nvars,
                found: state.len(),
            });
        }
        if let Some(&bad) = state.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::Invalid(format!("{bad} is not an element of {}", self.field)));
        }
        Ok(self.step_unchecked(state))
    }

    pub(crate) fn step_unchecked(&self, state: &[Elem]) -> State {
        self.coords.iter().map(|f| f.eval(state)).collect()
    }

    /// `succ[i]` is the index of `f(decode(i))`.
    pub fn successor_table(&self, bound: u64) -> Result<Vec<u64>> {
        let total = self.check_bound(bound)?;
        Ok((0..total)
            .into_par_iter()
            .map(|i| self.encode(&self.step_unchecked(&self.decode(i))))
            .collect())
    }

    /// All states with `f^m(v) = v`; with `exact`, only those of least period `m`.
    /// Results are in increasing state index.
    pub fn periodic_points(&self, m: u64, exact: bool, bound: u64) -> Result<Vec<State>> {
        if m == 0 {
            return Err(Error::Invalid("period must be positive".into()));
        }
        let succ = self.successor_table(bound)?;
        let iter_m = compose_power(&succ, m);
        let mut out = Vec::new();
        for (v, &w) in iter_m.iter().enumerate() {
            if w != v as u64 {
                continue;
            }
            if exact {
                let mut period = 1;
                let mut u = succ[v];
                while u != v as u64 {
                    u = succ[u as usize];
                    period += 1;
                }
                if period != m {
                    continue;
                }
            }
            out.push(self.decode(v as u64));
        }
        Ok(out)
    }

    pub fn format_state(&self, state: &[Elem]) -> String {
        format_state(self.field, state)
    }
}

impl fmt::Display for FiniteDynamicalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            writeln!(f, "f{} = {}", i + 1, c)?;
        }
        Ok(())
    }
}

/// Comma-joined field literals.
pub fn format_state(field: Field, state: &[Elem]) -> String {
    let parts: Vec<String> = state.iter().map(|&x| field.format(x)).collect();
    parts.join(",")
}

/// The `m`-fold iterate of a functional graph given as a successor table.
fn compose_power(succ: &[u64], mut m: u64) -> Vec<u64> {
    let mut acc: Vec<u64> = (0..succ.len() as u64).collect();
    let mut base = succ.to_vec();
    while m > 0 {
        if m & 1 == 1 {
            acc = acc.iter().map(|&i| base[i as usize]).collect();
        }
        m >>= 1;
        if m > 0 {
            base = base.iter().map(|&i| base[i as usize]).collect();
        }
    }
    acc
}

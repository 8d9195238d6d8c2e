//! Exact analysis, inference and control of polynomial dynamical systems
//! over finite fields.

pub mod cli;
pub mod control;
pub mod dynamics;
pub mod error;
pub mod ff;
pub mod groebner;
pub mod inference;
pub mod io;
pub mod ncf;
pub mod poly;

pub use error::{Error, Result};
pub use ff::{Elem, Field, FieldElement};
pub use poly::{Monomial, OrderKind, Polynomial, TermOrder};

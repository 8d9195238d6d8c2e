use super::Polynomial;
use crate::error::{Error, Result};
use crate::ff::Field;

/// Boolean formula over variables `x1 .. xn` (0-based indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoolExpr {
    Const(bool),
    Var(usize),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(i: usize) -> BoolExpr {
        BoolExpr::Var(i)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: BoolExpr) -> BoolExpr {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        BoolExpr::Or(Box::new(a), Box::new(b))
    }

    pub fn eval(&self, input: &[bool]) -> bool {
        match self {
            BoolExpr::Const(c) => *c,
            BoolExpr::Var(i) => input[*i],
            BoolExpr::Not(e) => !e.eval(input),
            BoolExpr::And(a, b) => a.eval(input) && b.eval(input),
            BoolExpr::Or(a, b) => a.eval(input) || b.eval(input),
        }
    }

    pub fn max_var(&self) -> Option<usize> {
        match self {
            BoolExpr::Const(_) => None,
            BoolExpr::Var(i) => Some(*i),
            BoolExpr::Not(e) => e.max_var(),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

/// Translate with `x AND y = xy`, `x OR y = x + y + xy`, `NOT x = x + 1`.
pub fn boolean_to_polynomial(expr: &BoolExpr, field: Field, nvars: usize) -> Result<Polynomial> {
    if field.order() != 2 {
        return Err(Error::FieldMismatch {
            left: field.to_string(),
            right: "F_2".to_string(),
        });
    }
    if let Some(v) = expr.max_var().filter(|&v| v >= nvars) {
        return Err(Error::Invalid(format!("variable x{} out of range", v + 1)));
    }
    Ok(translate(expr, field, nvars))
}

fn translate(expr: &BoolExpr, k: Field, n: usize) -> Polynomial {
    match expr {
        BoolExpr::Const(c) => Polynomial::constant(k, n, *c as u32),
        BoolExpr::Var(i) => Polynomial::var(k, n, *i),
        BoolExpr::Not(e) => translate(e, k, n).add(&Polynomial::one(k, n)),
        BoolExpr::And(a, b) => translate(a, k, n).mul(&translate(b, k, n)),
        BoolExpr::Or(a, b) => {
            let (x, y) = (translate(a, k, n), translate(b, k, n));
            x.add(&y).add(&x.mul(&y))
        }
    }
}

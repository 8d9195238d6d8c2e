//! Sparse multivariate polynomials over a finite field.
//!
//! A [`Polynomial`] is always stored in canonical reduced form: every
//! exponent is below `q` and no zero coefficient is kept. Over a finite field
//! this form is unique for the function it induces on `k^n`, so structural
//! equality is functional equality.

mod boolean;
mod order;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

pub use boolean::{boolean_to_polynomial, BoolExpr};
pub use order::{OrderKind, TermOrder};
pub use parse::parse_polynomial;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

/// Exponent vector of a monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub(crate) Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Monomial {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Monomial {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Product without exponent reduction.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// Apply `x^e = x^(((e-1) mod (q-1)) + 1)` to every exponent.
    pub fn reduced(&self, q: u32) -> Monomial {
        Monomial(self.0.iter().map(|&e| reduce_exponent(e, q)).collect())
    }

    pub fn is_reduced(&self, q: u32) -> bool {
        self.0.iter().all(|&e| e < q)
    }

    pub fn evaluate(&self, field: &Field, point: &[Elem]) -> Elem {
        let mut acc = field.one();
        for (&x, &e) in point.iter().zip(&self.0) {
            if e > 0 {
                acc = field.mul(acc, field.pow(x, e as u64));
                if acc == 0 {
                    break;
                }
            }
        }
        acc
    }

    pub(crate) fn write(&self, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f)
    }
}

#[inline]
pub(crate) fn reduce_exponent(e: u32, q: u32) -> u32 {
    if e == 0 {
        0
    } else {
        (e - 1) % (q - 1) + 1
    }
}

/// A polynomial in `k[x1, ..., xn]` in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Elem>,
}

impl Polynomial {
    pub fn zero(field: Field, nvars: usize) -> Polynomial {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: Field, nvars: usize, c: Elem) -> Polynomial {
        Polynomial::term(field, Monomial::one(nvars), c)
    }

    pub fn one(field: Field, nvars: usize) -> Polynomial {
        Polynomial::constant(field, nvars, field.one())
    }

    /// The coordinate function `x_{i+1}` (0-based `i`).
    pub fn var(field: Field, nvars: usize, i: usize) -> Polynomial {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        Polynomial::term(field, Monomial::var(nvars, i), field.one())
    }

    /// A single term `c * m`, reduced.
    pub fn term(field: Field, m: Monomial, c: Elem) -> Polynomial {
        let nvars = m.nvars();
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(m.reduced(field.order()), c);
        p
    }

    /// Build the canonical reduced form of a raw polynomial whose exponents may
    /// be arbitrary and whose monomials may repeat.
    pub fn reduce_canonical<I>(field: Field, nvars: usize, raw_terms: I) -> Result<Polynomial>
    where
        I: IntoIterator<Item = (Vec<u32>, Elem)>,
    {
        let q = field.order();
        let mut p = Polynomial::zero(field, nvars);
        for (exps, c) in raw_terms {
            if exps.len() != nvars {
                return Err(Error::ArityError {
                    expected: nvars,
                    found: exps.len(),
                });
            }
            if !field.contains(c) {
                return Err(Error::Invalid(format!("coefficient {c} outside {field}")));
            }
            p.add_term(Monomial(exps).reduced(q), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Elem) {
        if c == 0 {
            return;
        }
        let k = self.field;
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = k.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, Elem)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn coefficient(&self, m: &Monomial) -> Elem {
        self.terms.get(m).copied().unwrap_or(0)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Elem> {
        match self.terms.len() {
            0 => Some(0),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, &c)| c),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Is this a single term with coefficient one?
    pub fn is_monic_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|&c| c == self.field.one())
    }

    /// Variables occurring syntactically, in increasing index order.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    pub fn depends_on(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    /// Leading monomial and coefficient under `order`.
    pub fn leading_term(&self, order: &TermOrder) -> Option<(&Monomial, Elem)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, &c)| (m, c))
    }

    /// Terms sorted in descending `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&Monomial, Elem)> {
        let mut t: Vec<_> = self.terms().collect();
        t.sort_by(|a, b| order.cmp(b.0, a.0));
        t
    }

    pub fn evaluate(&self, point: &[Elem]) -> Result<Elem> {
        if point.len() != self.nvars {
            return Err(Error::ArityError {
                expected: self.nvars,
                found: point.len(),
            });
        }
        if let Some(&bad) = point.iter().find(|&&x| !self.field.contains(x)) {
            return Err(Error::Invalid(format!("{bad} is not an element of {}", self.field)));
        }
        Ok(self.eval(point))
    }

    /// Evaluation without argument checks.
    pub fn eval(&self, point: &[Elem]) -> Elem {
        let k = &self.field;
        self.terms.iter().fold(0, |acc, (m, &c)| {
            k.add(acc, k.mul(c, m.evaluate(k, point)))
        })
    }

    fn check_compatible(&self, other: &Polynomial) {
        assert!(
            self.field == other.field && self.nvars == other.nvars,
            "polynomials over {} in {} vars and {} in {} vars cannot be combined",
            self.field,
            self.nvars,
            other.field,
            other.nvars
        );
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let k = self.field;
        Polynomial {
            field: k,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &c)| (m.clone(), k.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Elem) -> Polynomial {
        let k = self.field;
        if c == 0 {
            return Polynomial::zero(k, self.nvars);
        }
        Polynomial {
            field: k,
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &d)| (m.clone(), k.mul(c, d))).collect(),
        }
    }

    /// Product, reduced after every monomial multiplication.
    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_compatible(other);
        let k = self.field;
        let q = k.order();
        let mut out = Polynomial::zero(k, self.nvars);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                out.add_term(a.mul(b).reduced(q), k.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Polynomial {
        let mut acc = Polynomial::one(self.field, self.nvars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Reinterpret in `nvars` variables; `map[i]` is the new index of `x_i`.
    pub fn rename(&self, nvars: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.nvars);
        let mut out = Polynomial::zero(self.field, nvars);
        for (m, &c) in &self.terms {
            let mut e = vec![0; nvars];
            for (i, &x) in m.0.iter().enumerate() {
                e[map[i]] += x;
            }
            out.add_term(Monomial(e).reduced(self.field.order()), c);
        }
        out
    }

    /// Render with a fixed order (degrevlex, identity ranking when `None`).
    pub fn to_string_with(&self, order: Option<&TermOrder>) -> String {
        let default = TermOrder::degrevlex();
        let order = order.unwrap_or(&default);
        if self.is_zero() {
            return "0".to_string();
        }
        let k = self.field;
        let mut s = String::new();
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            if i > 0 {
                s.push_str(" + ");
            }
            if m.is_one() {
                s.push_str(&k.format(c));
            } else {
                if c != k.one() {
                    s.push_str(&k.format(c));
                    s.push('*');
                }
                m.write(&mut s).expect("writing to a String");
            }
        }
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(None))
    }
}

/// Elementary symmetric polynomial of degree 1 or 2 in the listed variables.
pub fn elementary_symmetric(
    field: Field,
    nvars: usize,
    degree: usize,
    vars: &[usize],
) -> Result<Polynomial> {
    if !(1..=2).contains(&degree) || degree > vars.len() {
        return Err(Error::Invalid(format!(
            "elementary symmetric polynomial of degree {degree} in {} variables",
            vars.len()
        )));
    }
    if let Some(&v) = vars.iter().find(|&&v| v >= nvars) {
        return Err(Error::Invalid(format!("variable x{} out of range", v + 1)));
    }
    let mut out = Polynomial::zero(field, nvars);
    if degree == 1 {
        for &v in vars {
            out = out.add(&Polynomial::var(field, nvars, v));
        }
    } else {
        for (i, &u) in vars.iter().enumerate() {
            for &v in &vars[i + 1..] {
                out = out.add(&Polynomial::var(field, nvars, u).mul(&Polynomial::var(field, nvars, v)));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn reduction_examples() {
        let f3 = f(3);
        let x_cubed = Polynomial::reduce_canonical(f3, 1, [(vec![3], 1)]).unwrap();
        assert_eq!(x_cubed, Polynomial::var(f3, 1, 0));

        let f2 = f(2);
        let p = Polynomial::reduce_canonical(f2, 1, [(vec![2], 1), (vec![1], 1)]).unwrap();
        assert!(p.is_zero());

        let k = f(4);
        let x5 = Polynomial::reduce_canonical(k, 1, [(vec![5], k.one())]).unwrap();
        let x2 = Polynomial::reduce_canonical(k, 1, [(vec![2], k.one())]).unwrap();
        assert_eq!(x5, x2);
        for v in k.elements() {
            assert_eq!(k.pow(v, 5), x2.eval(&[v]));
        }
    }

    #[test]
    fn evaluate_examples() {
        let f3 = f(3);
        let g = parse_polynomial("1 - x1*x2", f3, 2).unwrap();
        assert_eq!(g.evaluate(&[1, 1]).unwrap(), 0);
        let h = parse_polynomial("1 + 2*x2", f3, 2).unwrap();
        assert_eq!(h.evaluate(&[1, 1]).unwrap(), 0);
        let or = parse_polynomial("x1 + x2 + x1*x2", f(2), 2).unwrap();
        assert_eq!(or.evaluate(&[1, 0]).unwrap(), 1);
        assert!(matches!(
            or.evaluate(&[1]),
            Err(Error::ArityError { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn symmetric_polynomials() {
        let k = f(4);
        let vars: Vec<usize> = (0..6).collect();
        let g1 = elementary_symmetric(k, 6, 1, &vars).unwrap();
        assert_eq!(g1.to_string(), "x1 + x2 + x3 + x4 + x5 + x6");
        let g2 = elementary_symmetric(k, 6, 2, &vars).unwrap();
        assert_eq!(g2.num_terms(), 15);
        let pair = elementary_symmetric(k, 2, 2, &[0, 1]).unwrap();
        assert_eq!(pair.to_string(), "x1*x2");
        assert!(elementary_symmetric(k, 2, 2, &[0]).is_err());
    }

    #[test]
    fn occurrence_matches_dependence() {
        // Exhaustive over a few reduced polynomials in 2 variables over F_3.
        let k = f(3);
        for text in ["x1^2*x2 + x2", "2*x1 + x1^2", "x2^2 + 1", "x1*x2 + 2*x1*x2^2"] {
            let p = parse_polynomial(text, k, 2).unwrap();
            for i in 0..2 {
                let mut depends = false;
                for a in 0..3 {
                    for b in 0..3 {
                        let mut pt = [a, b];
                        let v = p.eval(&pt);
                        for c in 0..3 {
                            pt[i] = c;
                            depends |= p.eval(&pt) != v;
                        }
                    }
                }
                assert_eq!(depends, p.depends_on(i), "{text} x{}", i + 1);
            }
        }
    }

    #[test]
    fn display_is_descending_degrevlex() {
        let k = f(3);
        let p = parse_polynomial("1 + x2 + 2*x1^2 + x1*x2", k, 2).unwrap();
        assert_eq!(p.to_string(), "2*x1^2 + x1*x2 + x2 + 1");
        let g = f(4);
        let p = parse_polynomial("a^2*x1 + a", g, 1).unwrap();
        assert_eq!(p.to_string(), "a^2*x1 + a");
    }
}

//! Vanishing ideals of finite point sets via the Buchberger-Möller
//! procedure, interpolation on standard monomials, and normal forms.
//!
//! Monomials are enumerated in increasing term order. Each one's evaluation
//! vector over the points is reduced against the vectors already kept; a
//! dependent vector yields a Gröbner basis element, an independent one a new
//! standard monomial. Basis elements live in `k[x]` proper, so a leading
//! monomial may carry the exponent `q` (e.g. `x^q - x` when every value of `x`
//! occurs); their reduced images are available separately.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};
use crate::poly::{Monomial, Polynomial, TermOrder};

/// Distinct points of `k^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    field: Field,
    nvars: usize,
    points: Vec<Vec<Elem>>,
}

impl PointSet {
    pub fn new(field: Field, nvars: usize, points: Vec<Vec<Elem>>) -> Result<PointSet> {
        let mut seen = HashSet::new();
        for p in &points {
            check_point(field, nvars, p)?;
            if !seen.insert(p.as_slice()) {
                return Err(Error::DuplicatePoint(format_point(field, p)));
            }
        }
        Ok(PointSet {
            field,
            nvars,
            points,
        })
    }

    /// Like [`PointSet::new`] but silently drops repeated points.
    pub fn dedup(field: Field, nvars: usize, points: Vec<Vec<Elem>>) -> Result<PointSet> {
        let mut seen = HashSet::new();
        let mut kept = Vec::new();
        for p in points {
            check_point(field, nvars, &p)?;
            if seen.insert(p.clone()) {
                kept.push(p);
            }
        }
        Ok(PointSet {
            field,
            nvars,
            points: kept,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn check_point(field: Field, nvars: usize, p: &[Elem]) -> Result<()> {
    if p.len() != nvars {
        return Err(Error::ArityError {
            expected: nvars,
            found: p.len(),
        });
    }
    if let Some(&x) = p.iter().find(|&&x| !field.contains(x)) {
        return Err(Error::Invalid(format!("{x} is not an element of {field}")));
    }
    Ok(())
}

pub(crate) fn format_point(field: Field, p: &[Elem]) -> String {
    let parts: Vec<String> = p.iter().map(|&x| field.format(x)).collect();
    format!("({})", parts.join(","))
}

/// A monic Gröbner basis element `leading + tail`, with the tail supported on
/// standard monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    leading: Monomial,
    tail: Vec<(Monomial, Elem)>,
}

impl BasisElement {
    pub fn leading(&self) -> &Monomial {
        &self.leading
    }

    pub fn tail(&self) -> &[(Monomial, Elem)] {
        &self.tail
    }

    fn raw_terms(&self, field: Field) -> impl Iterator<Item = (Monomial, Elem)> + '_ {
        std::iter::once((self.leading.clone(), field.one()))
            .chain(self.tail.iter().cloned())
    }

    /// Image in the reduced ring; may be zero (e.g. for `x^q - x`).
    pub fn to_reduced(&self, field: Field) -> Polynomial {
        Polynomial::reduce_canonical(
            field,
            self.leading.nvars(),
            self.raw_terms(field).map(|(m, c)| (m.0, c)),
        )
        .expect("basis terms are well formed")
    }

    pub fn evaluate(&self, field: Field, point: &[Elem]) -> Elem {
        self.raw_terms(field)
            .fold(0, |acc, (m, c)| field.add(acc, field.mul(c, m.evaluate(&field, point))))
    }

    pub fn display(&self, field: Field) -> String {
        let mut s = self.leading.to_string();
        for (m, c) in &self.tail {
            s.push_str(" + ");
            if m.is_one() {
                s.push_str(&field.format(*c));
            } else {
                if *c != field.one() {
                    s.push_str(&field.format(*c));
                    s.push('*');
                }
                s.push_str(&m.to_string());
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vector: Vec<Elem>,
    // Coefficients over the standard monomials of a polynomial whose
    // evaluation vector is `vector`.
    combo: Vec<Elem>,
}

/// Reduced Gröbner basis and standard monomials of the vanishing ideal of a
/// point set.
#[derive(Clone, Debug)]
pub struct IdealOfPoints {
    field: Field,
    nvars: usize,
    order: TermOrder,
    points: Vec<Vec<Elem>>,
    basis: Vec<BasisElement>,
    standard: Vec<Monomial>,
    rows: Vec<EchelonRow>,
}

impl IdealOfPoints {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn points(&self) -> &[Vec<Elem>] {
        &self.points
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Standard monomials in increasing term order.
    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard
    }

    /// Basis elements mapped to the reduced ring, zeros dropped.
    pub fn reduced_basis(&self) -> Vec<Polynomial> {
        self.basis
            .iter()
            .map(|g| g.to_reduced(self.field))
            .filter(|p| !p.is_zero())
            .collect()
    }

    /// The unique polynomial supported on standard monomials taking `values`
    /// at the points (in point order).
    pub fn interpolate(&self, values: &[Elem]) -> Result<Polynomial> {
        if values.len() != self.points.len() {
            return Err(Error::ArityError {
                expected: self.points.len(),
                found: values.len(),
            });
        }
        let k = self.field;
        let mut residual = values.to_vec();
        let mut coeffs = vec![0; self.standard.len()];
        for row in &self.rows {
            let c = residual[row.pivot];
            if c == 0 {
                continue;
            }
            axpy(k, &mut residual, k.neg(c), &row.vector);
            axpy(k, &mut coeffs, c, &row.combo);
        }
        debug_assert!(residual.iter().all(|&v| v == 0));
        Ok(self.standard_coeffs_to_poly(&coeffs))
    }

    fn standard_coeffs_to_poly(&self, coeffs: &[Elem]) -> Polynomial {
        Polynomial::reduce_canonical(
            self.field,
            self.nvars,
            self.standard
                .iter()
                .zip(coeffs)
                .map(|(m, &c)| (m.0.clone(), c)),
        )
        .expect("standard monomials are well formed")
    }

    /// Remainder of multivariate division of `f` by the Gröbner basis.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(f)?;
        let k = self.field;
        let order = &self.order;
        let mut work: BTreeMap<Monomial, Elem> =
            f.terms().map(|(m, c)| (m.clone(), c)).collect();
        let mut remainder: Vec<(Vec<u32>, Elem)> = Vec::new();
        while let Some(lead) = work.keys().max_by(|a, b| order.cmp(a, b)).cloned() {
            let c = work.remove(&lead).expect("present");
            match self.basis.iter().find(|g| g.leading.divides(&lead)) {
                Some(g) => {
                    let shift = g.leading.quotient_of(&lead);
                    // lead - c * shift * g removes the leading term.
                    for (m, d) in &g.tail {
                        let t = shift.mul(m);
                        let delta = k.neg(k.mul(c, *d));
                        let e = work.entry(t.clone()).or_insert(0);
                        *e = k.add(*e, delta);
                        if *e == 0 {
                            work.remove(&t);
                        }
                    }
                }
                None => remainder.push((lead.0, c)),
            }
        }
        Polynomial::reduce_canonical(k, self.nvars, remainder)
    }

    /// Does `f` vanish on every point?
    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    fn check_compatible(&self, f: &Polynomial) -> Result<()> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch {
                left: f.field().to_string(),
                right: self.field.to_string(),
            });
        }
        if f.nvars() != self.nvars {
            return Err(Error::ArityError {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for IdealOfPoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.basis.iter().map(|g| g.display(self.field)).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

fn axpy(k: Field, y: &mut [Elem], a: Elem, x: &[Elem]) {
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = k.add(*yi, k.mul(a, xi));
        }
    }
}

/// Buchberger-Möller: reduced Gröbner basis of the ideal of `ps` under `order`.
pub fn ideal_of_points(ps: &PointSet, order: &TermOrder) -> Result<IdealOfPoints> {
    if ps.is_empty() {
        return Err(Error::EmptyData);
    }
    order.check_arity(ps.nvars)?;
    let k = ps.field;
    let n = ps.nvars;
    let npts = ps.len();

    let mut basis: Vec<BasisElement> = Vec::new();
    let mut standard: Vec<Monomial> = Vec::new();
    let mut rows: Vec<EchelonRow> = Vec::new();

    let mut candidates = vec![Monomial::one(n)];
    let mut seen: HashSet<Monomial> = candidates.iter().cloned().collect();

    while !candidates.is_empty() {
        let idx = (0..candidates.len())
            .min_by(|&a, &b| order.cmp(&candidates[a], &candidates[b]))
            .expect("nonempty");
        let t = candidates.swap_remove(idx);
        if basis.iter().any(|g| g.leading.divides(&t)) {
            continue;
        }

        let mut v: Vec<Elem> = ps.points.iter().map(|p| t.evaluate(&k, p)).collect();
        let mut combo = vec![0; standard.len() + 1];
        for row in &rows {
            let c = v[row.pivot];
            if c == 0 {
                continue;
            }
            let minus_c = k.neg(c);
            axpy(k, &mut v, minus_c, &row.vector);
            axpy(k, &mut combo, minus_c, &row.combo);
        }

        match v.iter().position(|&x| x != 0) {
            None => {
                // t + sum(combo_j * s_j) vanishes on every point.
                let tail = standard
                    .iter()
                    .zip(&combo)
                    .filter(|(_, &c)| c != 0)
                    .map(|(m, &c)| (m.clone(), c))
                    .rev()
                    .collect();
                basis.push(BasisElement { leading: t, tail });
            }
            Some(pivot) => {
                let s = standard.len();
                combo[s] = k.one();
                let scale = k.inv(v[pivot]).expect("nonzero pivot");
                for x in v.iter_mut().chain(combo.iter_mut()) {
                    *x = k.mul(*x, scale);
                }
                for row in rows.iter_mut() {
                    row.combo.push(0);
                }
                rows.push(EchelonRow {
                    pivot,
                    vector: v,
                    combo,
                });
                for j in 0..n {
                    let mut e = t.0.clone();
                    e[j] += 1;
                    let c = Monomial(e);
                    if seen.insert(c.clone()) && !basis.iter().any(|g| g.leading.divides(&c)) {
                        candidates.push(c);
                    }
                }
                standard.push(t);
            }
        }
    }
    debug_assert_eq!(standard.len(), npts);

    Ok(IdealOfPoints {
        field: k,
        nvars: n,
        order: order.clone(),
        points: ps.points.clone(),
        basis,
        standard,
        rows,
    })
}

/// Interpolate `values` at the points of `ps`; the result is supported on
/// the standard monomials of the ideal of `ps` under `order`.
pub fn interpolate(ps: &PointSet, values: &[Elem], order: &TermOrder) -> Result<Polynomial> {
    if let Some(&bad) = values.iter().find(|&&v| !ps.field.contains(v)) {
        return Err(Error::Invalid(format!("{bad} is not an element of {}", ps.field)));
    }
    ideal_of_points(ps, order)?.interpolate(values)
}

/// Interpolation from `(point, value)` pairs that may repeat points. Equal
/// repeats are merged; conflicting ones are an error.
pub fn interpolate_pairs(
    field: Field,
    nvars: usize,
    pairs: &[(Vec<Elem>, Elem)],
    order: &TermOrder,
) -> Result<Polynomial> {
    let mut seen: BTreeMap<&[Elem], Elem> = BTreeMap::new();
    let mut points = Vec::new();
    let mut values = Vec::new();
    for (p, v) in pairs {
        match seen.get(p.as_slice()) {
            Some(&w) if w != *v => {
                return Err(Error::InconsistentData(format!(
                    "point {} is assigned both {} and {}",
                    format_point(field, p),
                    field.format(w),
                    field.format(*v)
                )))
            }
            Some(_) => {}
            None => {
                seen.insert(p, *v);
                points.push(p.clone());
                values.push(*v);
            }
        }
    }
    let ps = PointSet::new(field, nvars, points)?;
    interpolate(&ps, &values, order)
}

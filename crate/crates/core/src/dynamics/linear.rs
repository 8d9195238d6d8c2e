//! Linear systems `x -> A x`: invariant factors of `xI - A` by Smith
//! normal form over `k[x]`, and the phase-space cycle structure from ranks of
//! `A^t - I`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::{Elem, Field};

/// Dense matrix over a finite field, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Elem>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::ArityError {
                expected: c,
                found: bad.len(),
            });
        }
        let data: Vec<Elem> = rows.into_iter().flatten().collect();
        if let Some(&x) = data.iter().find(|&&x| !field.contains(x)) {
            return Err(Error::Invalid(format!("{x} is not an element of {field}")));
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let k = self.field;
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b != 0 {
                        let v = k.add(out.get(i, j), k.mul(a, b));
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.rows);
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

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let k = self.field;
        Matrix {
            field: k,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| k.sub(a, b))
                .collect(),
        }
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let k = self.field;
        (0..self.rows)
            .map(|i| (0..self.cols).fold(0, |acc, j| k.add(acc, k.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn rank(&self) -> usize {
        let k = self.field;
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, rank * m.cols + j);
            }
            let inv = k.inv(m.get(rank, col)).expect("nonzero pivot");
            for r in rank + 1..m.rows {
                let f = k.mul(m.get(r, col), inv);
                if f == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = k.sub(m.get(r, j), k.mul(f, m.get(rank, j)));
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Polynomial in one variable over a finite field, coefficients low to high.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl UniPoly {
    pub fn new(field: Field, mut coeffs: Vec<Elem>) -> UniPoly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        UniPoly { field, coeffs }
    }

    pub fn zero(field: Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    /// `x - c`
    pub fn linear(field: Field, c: Elem) -> UniPoly {
        UniPoly::new(field, vec![field.neg(c), field.one()])
    }

    pub fn coefficients(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_unit(&self) -> bool {
        self.degree() == Some(0)
    }

    fn lead(&self) -> Elem {
        *self.coeffs.last().unwrap_or(&0)
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero lead");
        self.scale(inv)
    }

    pub fn scale(&self, c: Elem) -> UniPoly {
        let k = self.field;
        UniPoly::new(k, self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let k = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            k,
            (0..n)
                .map(|i| {
                    k.add(
                        *self.coeffs.get(i).unwrap_or(&0),
                        *other.coeffs.get(i).unwrap_or(&0),
                    )
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(self.field.neg(self.field.one())))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let k = self.field;
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(k);
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        UniPoly::new(k, out)
    }

    /// Quotient and remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &UniPoly) -> (UniPoly, UniPoly) {
        let k = self.field;
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = k.inv(divisor.lead()).expect("nonzero lead");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let c = k.mul(*rem.last().expect("nonempty"), inv);
            quot[shift] = c;
            for (i, &d) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] = k.sub(rem[shift + i], k.mul(c, d));
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (UniPoly::new(k, quot), UniPoly::new(k, rem))
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let k = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let k = self.field;
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (e, c == k.one()) {
                (0, _) => f.write_str(&k.format(c))?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", k.format(c))?,
            }
            match e {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

/// Non-unit invariant factors of `xI - A`, monic, each dividing the next.
pub fn invariant_factors(a: &Matrix) -> Result<Vec<UniPoly>> {
    if a.rows != a.cols {
        return Err(Error::ShapeError {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let k = a.field;
    let n = a.rows;
    let mut m: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = k.neg(a.get(i, j));
                    if i == j {
                        UniPoly::new(k, vec![c, k.one()])
                    } else {
                        UniPoly::constant(k, c)
                    }
                })
                .collect()
        })
        .collect();

    for t in 0..n {
        loop {
            // Smallest-degree nonzero entry of the trailing block becomes the pivot.
            let pivot = (t..n)
                .flat_map(|i| (t..n).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by_key(|&(i, j)| m[i][j].degree());
            let Some((pi, pj)) = pivot else {
                break;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }

            let mut clean = true;
            for i in t + 1..n {
                if m[i][t].is_zero() {
                    continue;
                }
                let (q, r) = m[i][t].div_rem(&m[t][t]);
                for j in t..n {
                    let v = m[i][j].sub(&q.mul(&m[t][j]));
                    m[i][j] = v;
                }
                clean &= r.is_zero();
            }
            for j in t + 1..n {
                if m[t][j].is_zero() {
                    continue;
                }
                let (q, r) = m[t][j].div_rem(&m[t][t]);
                for row in m.iter_mut().skip(t) {
                    let v = row[j].sub(&q.mul(&row[t]));
                    row[j] = v;
                }
                clean &= r.is_zero();
            }
            if !clean {
                continue;
            }
            // The pivot must divide the rest of the block.
            let offender = (t + 1..n).find(|&i| {
                (t + 1..n).any(|j| !m[i][j].div_rem(&m[t][t]).1.is_zero())
            });
            match offender {
                Some(i) => {
                    for j in t..n {
                        let v = m[t][j].add(&m[i][j]);
                        m[t][j] = v;
                    }
                }
                None => break,
            }
        }
    }

    Ok((0..n)
        .map(|i| m[i][i].monic())
        .filter(|p| !p.is_unit() && !p.is_zero())
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCount {
    pub length: u64,
    pub count: u64,
}

/// Predicted phase-space structure of `x -> A x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystemAnalysis {
    pub matrix: Matrix,
    pub invariant_factors: Vec<UniPoly>,
    /// Multiplicative order of `A` on its invertible part.
    pub order: u64,
    /// Cycle lengths with multiplicities, ascending by length.
    pub cycles: Vec<CycleCount>,
    /// Index of the nilpotent part.
    pub max_transient_height: u64,
}

impl LinearSystemAnalysis {
    pub fn num_components(&self) -> u64 {
        self.cycles.iter().map(|c| c.count).sum()
    }

    /// Cycle lengths expanded with multiplicity, ascending.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        self.cycles
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.length, c.count as usize))
            .collect()
    }

    pub fn characteristic_polynomial(&self) -> UniPoly {
        self.invariant_factors
            .iter()
            .fold(UniPoly::constant(self.matrix.field, self.matrix.field.one()), |acc, p| {
                acc.mul(p)
            })
    }
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Cycle structure of `x -> A x` without enumerating states.
///
/// States of period dividing `t` form `ker(A^t - I)`, so there are
/// `q^(n - rank(A^t - I))` of them; exact-period counts follow by
/// subtracting divisors. The order of `A` on its invertible part is found by
/// iterating powers and must not exceed `bound`.
pub fn linear_cycle_structure(a: &Matrix, bound: u64) -> Result<LinearSystemAnalysis> {
    if a.rows != a.cols {
        return Err(Error::ShapeError {
            rows: a.rows,
            cols: a.cols,
        });
    }
    let k = a.field;
    let n = a.rows;
    let q = k.order() as u64;
    let too_large = |states: u128| Error::TooLarge { states, bound };
    let total = q.checked_pow(n as u32).ok_or_else(|| too_large(u128::MAX))?;

    // Nilpotency index: first N with rank(A^N) = rank(A^(N+1)).
    let mut power = Matrix::identity(k, n);
    let mut rank = n;
    let mut nil_index = 0u64;
    loop {
        let next = power.mul(a);
        let r = next.rank();
        if r == rank {
            break;
        }
        power = next;
        rank = r;
        nil_index += 1;
    }

    // Smallest t >= 1 with A^t A^N = A^N.
    let cap = total.min(bound);
    let base = power;
    let mut cur = a.mul(&base);
    let mut order = 1u64;
    while cur != base {
        order += 1;
        if order > cap {
            return Err(too_large(order as u128));
        }
        cur = a.mul(&cur);
    }

    let identity = Matrix::identity(k, n);
    let ds = divisors(order);
    let mut exact: Vec<u64> = Vec::with_capacity(ds.len());
    let mut cycles = Vec::new();
    for (i, &d) in ds.iter().enumerate() {
        let fixed_dim = n - a.pow(d).sub(&identity).rank();
        let fixed = q.pow(fixed_dim as u32);
        let below: u64 = ds[..i]
            .iter()
            .zip(&exact)
            .filter(|(&e, _)| d % e == 0)
            .map(|(_, &c)| c)
            .sum();
        let here = fixed - below;
        exact.push(here);
        if here > 0 {
            cycles.push(CycleCount {
                length: d,
                count: here / d,
            });
        }
    }

    Ok(LinearSystemAnalysis {
        matrix: a.clone(),
        invariant_factors: invariant_factors(a)?,
        order,
        cycles,
        max_transient_height: nil_index,
    })
}

//! Canalyzing and nested canalyzing Boolean functions.
//!
//! A Boolean function on `n` inputs is stored either as its truth table or as
//! its algebraic normal form, the coefficient vector `(c_S)` over subsets
//! `S` of `{1..n}`. Both are indexed by bitmasks with `x1` as the least
//! significant bit, so subsets appear in binary-counter order.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ff::Field;
use crate::poly::{Monomial, Polynomial};

/// Largest arity accepted for tables and coefficient vectors.
pub const MAX_VARS: usize = 20;

/// Largest arity accepted by [`enumerate_ncfs`].
pub const MAX_ENUMERATE: usize = 5;

fn check_arity(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::TooLarge {
            states: 1u128 << n.min(127),
            bound: 1u64 << MAX_VARS,
        });
    }
    Ok(())
}

/// Truth table of `f: F_2^n -> F_2`; entry `v` holds `f(x)` where bit `i-1`
/// of `v` is `x_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BooleanFunctionTable {
    n: usize,
    bits: Vec<bool>,
}

impl BooleanFunctionTable {
    pub fn new(n: usize, bits: Vec<bool>) -> Result<BooleanFunctionTable> {
        check_arity(n)?;
        if bits.len() != 1 << n {
            return Err(Error::ArityError {
                expected: 1 << n,
                found: bits.len(),
            });
        }
        Ok(BooleanFunctionTable { n, bits })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<BooleanFunctionTable> {
        check_arity(n)?;
        Ok(BooleanFunctionTable {
            n,
            bits: (0..1usize << n).map(f).collect(),
        })
    }

    /// Table of the `index`-th function on `n` inputs, `n <= 6`.
    pub fn from_index(n: usize, index: u64) -> BooleanFunctionTable {
        assert!(n <= 6);
        BooleanFunctionTable {
            n,
            bits: (0..1usize << n).map(|v| index >> v & 1 == 1).collect(),
        }
    }

    /// Parse a string of `0`/`1` characters, entry 0 first.
    pub fn parse(s: &str) -> Result<BooleanFunctionTable> {
        let s = s.trim();
        let mut bits = Vec::with_capacity(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::parse(1, i + 1, format!("expected 0 or 1, found {ch:?}"))),
            }
        }
        if !bits.len().is_power_of_two() {
            return Err(Error::parse(
                1,
                bits.len() + 1,
                format!("truth table length {} is not a power of two", bits.len()),
            ));
        }
        BooleanFunctionTable::new(bits.len().trailing_zeros() as usize, bits)
    }

    /// Tabulate a polynomial over `F_2`.
    pub fn from_polynomial(p: &Polynomial) -> Result<BooleanFunctionTable> {
        if p.field().order() != 2 {
            return Err(Error::FieldMismatch {
                left: p.field().to_string(),
                right: "GF(2)".into(),
            });
        }
        let n = p.nvars();
        BooleanFunctionTable::from_fn(n, |v| {
            let point: Vec<u32> = (0..n).map(|i| (v >> i & 1) as u32).collect();
            p.eval(&point) == 1
        })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, v: usize) -> bool {
        self.bits[v]
    }

    pub fn is_constant(&self) -> bool {
        self.bits.iter().all(|&b| b == self.bits[0])
    }

    /// Whether flipping `x_{i+1}` changes the value somewhere.
    pub fn depends_on(&self, i: usize) -> bool {
        (0..self.bits.len()).any(|v| self.bits[v] != self.bits[v ^ (1 << i)])
    }

    pub fn depends_on_all(&self) -> bool {
        (0..self.n).all(|i| self.depends_on(i))
    }
}

impl fmt::Display for BooleanFunctionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// ANF coefficients; entry `S` (a bitmask) is `c_S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientVector {
    n: usize,
    coeffs: Vec<bool>,
}

impl CoefficientVector {
    pub fn new(n: usize, coeffs: Vec<bool>) -> Result<CoefficientVector> {
        check_arity(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::ArityError {
                expected: 1 << n,
                found: coeffs.len(),
            });
        }
        Ok(CoefficientVector { n, coeffs })
    }

    fn from_mask_bits(n: usize, bits: u64) -> CoefficientVector {
        CoefficientVector {
            n,
            coeffs: (0..1usize << n).map(|s| bits >> s & 1 == 1).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[bool] {
        &self.coeffs
    }

    pub fn get(&self, subset: usize) -> bool {
        self.coeffs[subset]
    }

    /// The coefficients as a `0`/`1` string in subset order.
    pub fn bit_string(&self) -> String {
        self.coeffs.iter().map(|&c| if c { '1' } else { '0' }).collect()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        let k = Field::prime(2).expect("2 is prime");
        let mut p = Polynomial::zero(k, self.n);
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c {
                let m = Monomial::new((0..self.n).map(|i| (s >> i & 1) as u32).collect());
                p = p.add(&Polynomial::term(k, m, 1));
            }
        }
        p
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_polynomial())
    }
}

/// In-place Möbius transform over `F_2`; it is its own inverse.
fn moebius(v: &mut [bool]) {
    let len = v.len();
    let mut step = 1;
    while step < len {
        for block in (0..len).step_by(2 * step) {
            for j in block..block + step {
                v[j + step] ^= v[j];
            }
        }
        step *= 2;
    }
}

/// Truth table to ANF coefficients.
pub fn anf_transform(table: &BooleanFunctionTable) -> CoefficientVector {
    let mut coeffs = table.bits.clone();
    moebius(&mut coeffs);
    CoefficientVector { n: table.n, coeffs }
}

/// ANF coefficients to truth table.
pub fn anf_inverse(coeffs: &CoefficientVector) -> BooleanFunctionTable {
    let mut bits = coeffs.coeffs.clone();
    moebius(&mut bits);
    BooleanFunctionTable { n: coeffs.n, bits }
}

/// `f` restricted to `x_{variable+1} = input` is constantly `output`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Canalyzation {
    /// 0-based variable index.
    pub variable: usize,
    pub input: u8,
    pub output: u8,
}

/// All canalyzing (variable, input, output) triples, ordered by variable then input.
pub fn is_canalyzing(table: &BooleanFunctionTable) -> Vec<Canalyzation> {
    let mut out = Vec::new();
    for i in 0..table.n {
        for input in 0..2u8 {
            let mut values = (0..table.bits.len())
                .filter(|v| (v >> i & 1) as u8 == input)
                .map(|v| table.bits[v]);
            let first = values.next().expect("at least one input");
            if values.all(|b| b == first) {
                out.push(Canalyzation {
                    variable: i,
                    input,
                    output: first as u8,
                });
            }
        }
    }
    out
}

/// Witness that a function is nested canalyzing in the order `sigma`.
///
/// `a[k]` and `b[k]` are the canalyzing input and canalyzed output of
/// variable `sigma[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NcfCertificate {
    /// 0-based variable indices.
    pub sigma: Vec<usize>,
    pub a: Vec<u8>,
    pub b: Vec<u8>,
}

impl NcfCertificate {
    /// Evaluate the nested case analysis at the input whose bit `i` is `x_{i+1}`.
    pub fn evaluate(&self, input: usize) -> bool {
        for k in 0..self.sigma.len() {
            if (input >> self.sigma[k] & 1) as u8 == self.a[k] {
                return self.b[k] == 1;
            }
        }
        self.b.last() == Some(&0)
    }

    pub fn to_table(&self) -> BooleanFunctionTable {
        let n = self.sigma.len();
        BooleanFunctionTable {
            n,
            bits: (0..1usize << n).map(|v| self.evaluate(v)).collect(),
        }
    }
}

/// Search for a nested canalyzing certificate.
///
/// Variables are tried in increasing index and canalyzing inputs `0` before
/// `1`, so the returned certificate is the first in that order.
pub fn is_ncf_by_definition(table: &BooleanFunctionTable) -> Result<Option<NcfCertificate>> {
    if let Some(i) = (0..table.n).find(|&i| !table.depends_on(i)) {
        return Err(Error::NotEssentialArity(i + 1));
    }
    let mut cert = NcfCertificate {
        sigma: Vec::with_capacity(table.n),
        a: Vec::with_capacity(table.n),
        b: Vec::with_capacity(table.n),
    };
    let remaining: Vec<usize> = (0..table.n).collect();
    Ok(search(table, &remaining, 0, 0, &mut cert).then_some(cert))
}

/// `fixed_mask`/`fixed_vals` pin the already stripped variables to their
/// non-canalyzing inputs.
fn search(
    table: &BooleanFunctionTable,
    remaining: &[usize],
    fixed_mask: usize,
    fixed_vals: usize,
    cert: &mut NcfCertificate,
) -> bool {
    let inputs = || (0..table.bits.len()).filter(move |v| v & fixed_mask == fixed_vals);
    if remaining.len() == 1 {
        let i = remaining[0];
        let value_at = |x: usize| {
            inputs()
                .find(|v| v >> i & 1 == x)
                .map(|v| table.bits[v])
                .expect("nonempty")
        };
        let (f0, f1) = (value_at(0), value_at(1));
        if f0 == f1 {
            return false;
        }
        cert.sigma.push(i);
        cert.a.push(0);
        cert.b.push(f0 as u8);
        return true;
    }
    for (pos, &i) in remaining.iter().enumerate() {
        for input in 0..2usize {
            let mut values = inputs().filter(|v| v >> i & 1 == input).map(|v| table.bits[v]);
            let first = values.next().expect("nonempty");
            if !values.all(|b| b == first) {
                continue;
            }
            cert.sigma.push(i);
            cert.a.push(input as u8);
            cert.b.push(first as u8);
            let rest: Vec<usize> = remaining
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != pos)
                .map(|(_, &v)| v)
                .collect();
            let mask = fixed_mask | 1 << i;
            let vals = fixed_vals | (1 - input) << i;
            if search(table, &rest, mask, vals, cert) {
                return true;
            }
            cert.sigma.pop();
            cert.a.pop();
            cert.b.pop();
        }
    }
    false
}

fn check_permutation(n: usize, sigma: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if sigma.len() != n {
        return Err(Error::ArityError {
            expected: n,
            found: sigma.len(),
        });
    }
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::Invalid(format!("{sigma:?} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Check the coefficient relations characterising nested canalyzing
/// functions in the variable order `sigma` (0-based indices, `sigma[0]`
/// first).
pub fn is_ncf_by_coefficients(coeffs: &CoefficientVector, sigma: &[usize]) -> Result<bool> {
    let n = coeffs.n;
    check_permutation(n, sigma)?;
    let full = (1usize << n) - 1;
    if !coeffs.get(full) {
        return Ok(false);
    }
    let mut position = vec![0; n];
    for (k, &s) in sigma.iter().enumerate() {
        position[s] = k;
    }
    for s in 1..full {
        let r = (0..n)
            .filter(|&i| s >> i & 1 == 1)
            .map(|i| position[i])
            .max()
            .expect("nonempty subset");
        let completion: usize = sigma[..=r].iter().map(|&i| 1 << i).sum();
        let product = sigma[..=r]
            .iter()
            .filter(|&&i| s >> i & 1 == 0)
            .all(|&i| coeffs.get(full ^ 1 << i));
        if coeffs.get(s) != (coeffs.get(completion) && product) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All points of the variety for one ordering, as `u64` coefficient masks.
///
/// `c_∅`, the proper prefixes of `sigma` and the complements of
/// `sigma[0..n-1]` are free; every other coefficient is fixed by the
/// relations.
pub(crate) fn variety_points(n: usize, sigma: &[usize]) -> Vec<u64> {
    let full = (1usize << n) - 1;
    let prefixes: Vec<usize> = (1..n).map(|r| sigma[..r].iter().map(|&i| 1 << i).sum()).collect();
    let cosingles: Vec<usize> = sigma[..n.saturating_sub(1)].iter().map(|&i| full ^ 1 << i).collect();
    let free: Vec<usize> = std::iter::once(0)
        .chain(prefixes)
        .chain(cosingles)
        .collect();
    let mut position = vec![0; n];
    for (k, &s) in sigma.iter().enumerate() {
        position[s] = k;
    }
    let mut out = Vec::with_capacity(1 << free.len());
    for assignment in 0u64..1 << free.len() {
        let mut c = 1u64 << full;
        for (b, &s) in free.iter().enumerate() {
            if assignment >> b & 1 == 1 {
                c |= 1 << s;
            }
        }
        for s in 1..full {
            if free.contains(&s) {
                continue;
            }
            let r = (0..n)
                .filter(|&i| s >> i & 1 == 1)
                .map(|i| position[i])
                .max()
                .expect("nonempty subset");
            let completion: usize = sigma[..=r].iter().map(|&i| 1 << i).sum();
            let product = sigma[..=r]
                .iter()
                .filter(|&&i| s >> i & 1 == 0)
                .all(|&i| c >> (full ^ 1 << i) & 1 == 1);
            if c >> completion & 1 == 1 && product {
                c |= 1 << s;
            }
        }
        out.push(c);
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NcfEnumeration {
    pub n: usize,
    /// Distinct nested canalyzing functions, sorted.
    pub functions: Vec<CoefficientVector>,
}

impl NcfEnumeration {
    pub fn count(&self) -> usize {
        self.functions.len()
    }
}

/// Every nested canalyzing function on `n` variables, as the union of the
/// per-ordering varieties.
pub fn enumerate_ncfs(n: usize) -> Result<NcfEnumeration> {
    if n > MAX_ENUMERATE {
        return Err(Error::TooLarge {
            states: 1u128 << (1u32 << n.min(7)),
            bound: 1u64 << (1u32 << MAX_ENUMERATE),
        });
    }
    if n == 0 {
        return Ok(NcfEnumeration {
            n,
            functions: Vec::new(),
        });
    }
    let parts: Vec<Vec<u64>> = permutations(n)
        .par_iter()
        .map(|sigma| variety_points(n, sigma))
        .collect();
    let set: BTreeSet<u64> = parts.into_iter().flatten().collect();
    Ok(NcfEnumeration {
        n,
        functions: set
            .into_iter()
            .map(|bits| CoefficientVector::from_mask_bits(n, bits))
            .collect(),
    })
}

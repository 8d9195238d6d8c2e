//! Finite field arithmetic over prime fields `F_p` and `GF(4)`.
//!
//! Elements are stored as canonical indices `0..q`. For prime fields the
//! index is the residue. For `GF(4) = Z_2[a]/(a^2 + a + 1)` index `0` is zero
//! and index `k` (for `k = 1, 2, 3`) is `a^k`, so `3` is the multiplicative
//! identity. Code that needs the identity must go through [`Field::one`].

use std::fmt;

use crate::error::{Error, Result};

/// Raw element index. Only meaningful together with its [`Field`].
pub type Elem = u32;

/// Largest supported prime; keeps every product inside a `u64`.
pub const MAX_PRIME: u32 = (1 << 31) - 1;

// GF(4) elements on the polynomial basis {1, a}: bit 0 is the constant
// coefficient and bit 1 the coefficient of a.
const GF4_TO_BITS: [u8; 4] = [0b00, 0b10, 0b11, 0b01];
const GF4_FROM_BITS: [u32; 4] = [0, 3, 1, 2];

const fn gf4_add_table() -> [[u32; 4]; 4] {
    let mut t = [[0u32; 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            t[i][j] = GF4_FROM_BITS[(GF4_TO_BITS[i] ^ GF4_TO_BITS[j]) as usize];
            j += 1;
        }
        i += 1;
    }
    t
}

const fn gf4_mul_table() -> [[u32; 4]; 4] {
    let mut t = [[0u32; 4]; 4];
    let mut i = 1;
    while i < 4 {
        let mut j = 1;
        while j < 4 {
            t[i][j] = ((i + j - 1) % 3 + 1) as u32;
            j += 1;
        }
        i += 1;
    }
    t
}

static GF4_ADD: [[u32; 4]; 4] = gf4_add_table();
static GF4_MUL: [[u32; 4]; 4] = gf4_mul_table();

/// A finite field `F_p` (p prime) or `GF(4)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    characteristic: u32,
    degree: u32,
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Field> {
        if p > MAX_PRIME || !is_prime(p as u64) {
            return Err(Error::UnsupportedField(p as u64));
        }
        Ok(Field {
            characteristic: p,
            degree: 1,
        })
    }

    pub fn gf4() -> Field {
        Field {
            characteristic: 2,
            degree: 2,
        }
    }

    /// Field with `q` elements; `q` must be prime or 4.
    pub fn with_order(q: u64) -> Result<Field> {
        if q == 4 {
            Ok(Field::gf4())
        } else if q <= MAX_PRIME as u64 {
            Field::prime(q as u32)
        } else {
            Err(Error::UnsupportedField(q))
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of elements `q = p^m`.
    pub fn order(&self) -> u32 {
        self.characteristic.pow(self.degree)
    }

    pub fn is_gf4(&self) -> bool {
        self.degree == 2
    }

    #[inline]
    pub fn zero(&self) -> Elem {
        0
    }

    #[inline]
    pub fn one(&self) -> Elem {
        if self.is_gf4() {
            3
        } else {
            1
        }
    }

    /// The generator `a` of `GF(4)`; `None` for prime fields.
    pub fn generator(&self) -> Option<Elem> {
        self.is_gf4().then_some(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.order()
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        x < self.order()
    }

    #[inline]
    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.is_gf4() {
            GF4_ADD[x as usize][y as usize]
        } else {
            ((x as u64 + y as u64) % self.characteristic as u64) as Elem
        }
    }

    #[inline]
    pub fn neg(&self, x: Elem) -> Elem {
        if self.is_gf4() || x == 0 {
            x
        } else {
            self.characteristic - x
        }
    }

    #[inline]
    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        debug_assert!(self.contains(x) && self.contains(y));
        if self.is_gf4() {
            GF4_MUL[x as usize][y as usize]
        } else {
            ((x as u64 * y as u64) % self.characteristic as u64) as Elem
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, x: Elem) -> Option<Elem> {
        if x == 0 {
            return None;
        }
        if self.is_gf4() {
            return Some(if x == 3 { 3 } else { 3 - x });
        }
        Some(self.pow(x, (self.characteristic - 2) as u64))
    }

    /// `x^e`, with `0^0 = 1`. Exponents of nonzero bases are reduced mod `q - 1`.
    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return self.one();
        }
        if x == 0 {
            return 0;
        }
        let mut e = e % (self.order() as u64 - 1);
        if e == 0 {
            return self.one();
        }
        let mut base = x;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Image of an integer under `Z -> k`.
    pub fn from_int(&self, n: i64) -> Elem {
        let p = self.characteristic as i64;
        let r = n.rem_euclid(p) as Elem;
        if self.is_gf4() {
            if r == 0 {
                0
            } else {
                self.one()
            }
        } else {
            r
        }
    }

    /// Parse a field literal: `0..p-1` for prime fields, `0`, `1`, `a`, `a^2`
    /// (and `a^3`) for `GF(4)`.
    pub fn parse_literal(&self, s: &str) -> Result<Elem> {
        let t = s.trim();
        let bad = || Error::Invalid(format!("`{t}` is not an element of {self}"));
        if self.is_gf4() {
            return match t {
                "0" => Ok(0),
                "1" | "a^3" | "a^0" => Ok(3),
                "a" | "a^1" => Ok(1),
                "a^2" => Ok(2),
                _ => Err(bad()),
            };
        }
        let v: u64 = t.parse().map_err(|_| bad())?;
        if v >= self.characteristic as u64 {
            return Err(bad());
        }
        Ok(v as Elem)
    }

    pub fn format(&self, x: Elem) -> String {
        if self.is_gf4() {
            match x {
                0 => "0",
                1 => "a",
                2 => "a^2",
                _ => "1",
            }
            .to_string()
        } else {
            x.to_string()
        }
    }

    /// Checked element constructor.
    pub fn element(&self, value: Elem) -> Result<FieldElement> {
        if !self.contains(value) {
            return Err(Error::Invalid(format!("{value} is not an index of {self}")));
        }
        Ok(FieldElement { field: *self, value })
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_gf4() {
            write!(f, "GF(4)")
        } else {
            write!(f, "F_{}", self.characteristic)
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An element tagged with its field. Operations check that both operands
/// come from the same field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    field: Field,
    value: Elem,
}

impl FieldElement {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.to_string(),
                right: other.field.to_string(),
            });
        }
        Ok(())
    }

    fn wrap(&self, value: Elem) -> FieldElement {
        FieldElement {
            field: self.field,
            value,
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.add(self.value, other.value)))
    }

    pub fn sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.sub(self.value, other.value)))
    }

    pub fn mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn neg(&self) -> FieldElement {
        self.wrap(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElement> {
        self.field
            .inv(self.value)
            .map(|v| self.wrap(v))
            .ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.wrap(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_fields() -> Vec<Field> {
        [2, 3, 4, 5, 7]
            .into_iter()
            .map(|q| Field::with_order(q).unwrap())
            .collect()
    }

    #[test]
    fn gf4_generator_cubed_is_one() {
        let k = Field::gf4();
        let a = k.element(1).unwrap();
        let a2 = k.element(2).unwrap();
        assert_eq!(a.mul(&a2).unwrap().value(), k.one());
        assert_eq!(a.pow(3).value(), k.one());
        // a^2 = a + 1
        assert_eq!(k.add(1, k.one()), 2);
    }

    #[test]
    fn prime_field_addition() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.add(2, 2), 1);
    }

    #[test]
    fn gf4_inverse_matches_table_search() {
        let k = Field::gf4();
        for x in 1..4 {
            let by_search: Vec<Elem> = k.elements().filter(|&y| k.mul(x, y) == k.one()).collect();
            assert_eq!(by_search, vec![k.inv(x).unwrap()]);
        }
        assert_eq!(k.inv(2), Some(1));
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in small_fields() {
            let els: Vec<Elem> = k.elements().collect();
            for &x in &els {
                assert_eq!(k.add(x, 0), x);
                assert_eq!(k.mul(x, k.one()), x);
                assert_eq!(k.add(x, k.neg(x)), 0);
                if x != 0 {
                    let inverses = els.iter().filter(|&&y| k.mul(x, y) == k.one()).count();
                    assert_eq!(inverses, 1, "{k}: {x}");
                    assert_eq!(k.pow(x, (k.order() - 1) as u64), k.one());
                }
                assert_eq!(k.pow(x, k.order() as u64), x, "Fermat in {k}");
                for &y in &els {
                    assert_eq!(k.add(x, y), k.add(y, x));
                    assert_eq!(k.mul(x, y), k.mul(y, x));
                    for &z in &els {
                        assert_eq!(k.add(k.add(x, y), z), k.add(x, k.add(y, z)));
                        assert_eq!(k.mul(k.mul(x, y), z), k.mul(x, k.mul(y, z)));
                        assert_eq!(k.mul(x, k.add(y, z)), k.add(k.mul(x, y), k.mul(x, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn errors() {
        let f3 = Field::prime(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f3.element(0).unwrap().inv(), Err(Error::DivisionByZero));
        assert!(matches!(
            f3.element(1).unwrap().add(&f5.element(1).unwrap()),
            Err(Error::FieldMismatch { .. })
        ));
        assert!(Field::with_order(8).is_err());
        assert!(Field::with_order(9).is_err());
        assert!(Field::prime(1).is_err());
        assert!(f3.element(3).is_err());
    }

    #[test]
    fn literals_round_trip() {
        for k in small_fields() {
            for x in k.elements() {
                assert_eq!(k.parse_literal(&k.format(x)).unwrap(), x);
            }
        }
        let k = Field::gf4();
        assert_eq!(k.parse_literal("a^2").unwrap(), 2);
        assert!(k.parse_literal("2").is_err());
        assert_eq!(k.from_int(5), k.one());
        assert_eq!(Field::prime(3).unwrap().from_int(-1), 2);
    }
}

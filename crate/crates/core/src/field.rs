//! Prime fields F_p and the quadratic character of F_p^*.
//!
//! Elements are stored as canonical representatives in `[0, p)`. Extension
//! fields are representable in [`FieldSpec`] but rejected by [`make_field`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest characteristic accepted; keeps every product below 2^62.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u64,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Builds the field with `p^e` elements. Only `e = 1` is supported.
pub fn make_field(p: u64, e: u32) -> Result<FieldSpec> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e == 0 {
        return Err(Error::Unsupported("extension degree 0".into()));
    }
    if e > 1 {
        return Err(Error::Unsupported(format!("extension field of degree {e}")));
    }
    if p >= MAX_CHARACTERISTIC {
        return Err(Error::Unsupported(format!("characteristic {p} too large")));
    }
    Ok(FieldSpec { p: p as u32, e, q: p })
}

impl FieldSpec {
    pub fn new(p: u64) -> Result<Self> {
        make_field(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn is_odd(&self) -> bool {
        self.p != 2
    }

    /// Checks the ensemble condition: q odd and q = 1 (mod 4).
    pub fn require_ensemble(&self) -> Result<()> {
        if self.q % 4 == 1 {
            Ok(())
        } else {
            Err(Error::BadFieldForEnsemble(self.q))
        }
    }

    pub fn element(&self, value: i64) -> FieldElement {
        FieldElement { spec: *self, value: self.reduce(value) }
    }

    pub fn zero(&self) -> FieldElement {
        self.element(0)
    }

    pub fn one(&self) -> FieldElement {
        self.element(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.p).map(move |v| FieldElement { spec: *self, value: v })
    }

    pub(crate) fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.p as i64) as u32
    }

    // Raw arithmetic on canonical representatives. Hot loops use these
    // directly instead of going through `FieldElement`.

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + self.p as u64 - b as u64;
        (s % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub(crate) fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero representative by Fermat.
    #[inline]
    pub(crate) fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow(a, self.p as u64 - 2)
    }

    /// Euler's criterion on a raw representative; requires odd p.
    #[inline]
    pub(crate) fn symbol(&self, a: u32) -> i8 {
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p as u64 - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    value: u32,
}

impl FieldElement {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, k: u64) -> FieldElement {
        field_pow(*self, k)
    }

    pub fn inv(&self) -> Option<FieldElement> {
        (self.value != 0).then(|| FieldElement { spec: self.spec, value: self.spec.inv(self.value) })
    }

    pub fn residue_symbol(&self) -> Result<i8> {
        residue_symbol_fq(*self)
    }
}

/// `a^k` by square-and-multiply, with `a^0 = 1` for every `a`.
pub fn field_pow(a: FieldElement, k: u64) -> FieldElement {
    FieldElement { spec: a.spec, value: a.spec.pow(a.value, k) }
}

/// 0 for zero, +1 for nonzero squares, -1 otherwise.
pub fn residue_symbol_fq(a: FieldElement) -> Result<i8> {
    if !a.spec.is_odd() {
        return Err(Error::OddCharacteristicRequired);
    }
    Ok(a.spec.symbol(a.value))
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $raw:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.spec, rhs.spec, "field mismatch");
                FieldElement { spec: self.spec, value: self.spec.$raw(self.value, rhs.value) }
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { spec: self.spec, value: self.spec.neg(self.value) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        assert_eq!(make_field(5, 1).unwrap().q(), 5);
        assert_eq!(make_field(13, 1).unwrap().q(), 13);
        assert_eq!(make_field(4, 1), Err(Error::NotPrime(4)));
        assert!(matches!(make_field(5, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pow_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        let f13 = FieldSpec::new(13).unwrap();
        assert_eq!(field_pow(f5.element(2), 0), f5.one());
        assert_eq!(field_pow(f5.zero(), 0), f5.one());
        assert_eq!(field_pow(f5.element(2), 4), f5.one());
        // 3^6 by repeated multiplication
        let mut acc = f13.one();
        for _ in 0..6 {
            acc = acc * f13.element(3);
        }
        assert_eq!(acc, f13.one());
        assert_eq!(field_pow(f13.element(3), 6), acc);
    }

    #[test]
    fn symbol_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        assert_eq!(residue_symbol_fq(f5.zero()), Ok(0));
        assert_eq!(residue_symbol_fq(f5.element(4)), Ok(1));
        assert_eq!(residue_symbol_fq(f5.element(2)), Ok(-1));
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(residue_symbol_fq(f2.one()), Err(Error::OddCharacteristicRequired));
    }

    fn small_fields() -> Vec<FieldSpec> {
        [3, 5, 7, 11, 13].iter().map(|&p| FieldSpec::new(p).unwrap()).collect()
    }

    #[test]
    fn field_axioms_exhaustive() {
        for f in small_fields() {
            for a in f.elements() {
                assert_eq!(a + (-a), f.zero());
                if let Some(inv) = a.inv() {
                    assert_eq!(a * inv, f.one());
                }
                for b in f.elements() {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for c in f.elements() {
                        assert_eq!((a + b) + c, a + (b + c));
                        assert_eq!((a * b) * c, a * (b * c));
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn symbol_is_multiplicative_and_balanced() {
        for f in small_fields() {
            let squares: Vec<u32> = f.elements().map(|a| (a * a).value()).collect();
            for a in f.elements() {
                let expected = if a.is_zero() {
                    0
                } else if squares.contains(&a.value()) {
                    1
                } else {
                    -1
                };
                assert_eq!(a.residue_symbol().unwrap(), expected);
                for b in f.elements() {
                    assert_eq!(
                        (a * b).residue_symbol().unwrap(),
                        a.residue_symbol().unwrap() * b.residue_symbol().unwrap()
                    );
                }
            }
            let plus = f.elements().filter(|a| a.residue_symbol().unwrap() == 1).count();
            assert_eq!(plus as u64, (f.q() - 1) / 2);
        }
    }
}

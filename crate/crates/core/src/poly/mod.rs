//! The polynomial ring A = F_q[T].

mod enumerate;
mod factor;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

pub(crate) use enumerate::visit_monic;
pub use enumerate::{
    ensemble_size, enumerate_ensemble, enumerate_monic, monic_at, monic_count, EnsembleRange, MonicRange,
};
pub use factor::{count_irreducible, euler_phi, factor, irreducibles, is_irreducible, mobius, Factorization};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// A polynomial over a prime field, coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u32>,
}

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Poly {
    /// Builds a polynomial from raw coefficients, reducing them mod p.
    pub fn new(field: FieldSpec, coeffs: Vec<u32>) -> Self {
        let p = field.p();
        let mut coeffs: Vec<u32> = coeffs.into_iter().map(|c| c % p).collect();
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    pub fn from_i64(field: FieldSpec, coeffs: &[i64]) -> Self {
        let mut coeffs: Vec<u32> = coeffs.iter().map(|&c| field.reduce(c)).collect();
        trim(&mut coeffs);
        Poly { field, coeffs }
    }

    /// Trusted constructor: coefficients already reduced and trimmed.
    pub(crate) fn from_raw(field: FieldSpec, coeffs: Vec<u32>) -> Self {
        debug_assert!(coeffs.last() != Some(&0));
        debug_assert!(coeffs.iter().all(|&c| c < field.p()));
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldSpec) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![1] }
    }

    /// The indeterminate T.
    pub fn t(field: FieldSpec) -> Self {
        Poly { field, coeffs: vec![0, 1] }
    }

    pub fn constant(c: FieldElement) -> Self {
        Poly::new(c.spec(), vec![c.value()])
    }

    pub fn monomial(c: FieldElement, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero(c.spec());
        }
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c.value();
        Poly { field: c.spec(), coeffs }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field.element(self.coeffs.get(i).copied().unwrap_or(0) as i64)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    /// Degree as an option; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn leading_coeff(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field.element(c as i64))
    }

    /// |f| = q^deg f. Undefined (zero) for f = 0.
    pub fn norm(&self) -> BigUint {
        match self.deg() {
            Some(d) => BigUint::from(self.field.q()).pow(d as u32),
            None => BigUint::from(0u32),
        }
    }

    pub fn eval(&self, x: FieldElement) -> FieldElement {
        let f = self.field;
        let v = self.coeffs.iter().rev().fold(0u32, |acc, &c| f.add(f.mul(acc, x.value()), c));
        f.element(v as i64)
    }

    pub fn scale(&self, c: FieldElement) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&a| f.mul(a, c.value())).collect())
    }

    /// Splits f = unit * monic. The zero polynomial has no such split.
    pub fn monic_part(&self) -> Option<(FieldElement, Poly)> {
        let lead = self.leading_coeff()?;
        let inv = lead.inv().expect("nonzero leading coefficient");
        Some((lead, self.scale(inv)))
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Euclidean division: `self = q * g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(g)?;
        if g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let f = self.field;
        let dg = g.coeffs.len() - 1;
        if self.coeffs.len() <= dg {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv = f.inv(g.coeffs[dg]);
        let mut r = self.coeffs.clone();
        let mut quot = vec![0u32; r.len() - dg];
        for i in (0..quot.len()).rev() {
            let c = f.mul(r[i + dg], inv);
            quot[i] = c;
            if c != 0 {
                for (j, &b) in g.coeffs.iter().enumerate() {
                    r[i + j] = f.sub(r[i + j], f.mul(c, b));
                }
            }
        }
        r.truncate(dg);
        trim(&mut r);
        trim(&mut quot);
        Ok((Poly::from_raw(f, quot), Poly::from_raw(f, r)))
    }

    pub fn rem(&self, g: &Poly) -> Result<Poly> {
        Ok(self.divrem(g)?.1)
    }

    pub fn divides(&self, f: &Poly) -> Result<bool> {
        Ok(f.rem(self)?.is_zero())
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        let mut coeffs: Vec<u32> =
            self.coeffs.iter().enumerate().skip(1).map(|(i, &c)| f.mul(c, (i as u64 % f.p() as u64) as u32)).collect();
        trim(&mut coeffs);
        Poly::from_raw(f, coeffs)
    }

    pub fn pow(&self, mut k: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        (self * other).rem(modulus)
    }

    /// `self^exp mod modulus`.
    pub fn powmod(&self, exp: &BigUint, modulus: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(self.field).rem(modulus)?;
        let base = self.rem(modulus)?;
        for i in (0..exp.bits()).rev() {
            acc = acc.mulmod(&acc, modulus)?;
            if exp.bit(i) {
                acc = acc.mulmod(&base, modulus)?;
            }
        }
        Ok(acc)
    }

    /// Square-freeness via gcd(f, f'); a nonconstant p-th power is never square-free.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_constant() {
            return Ok(true);
        }
        let d = self.derivative();
        if d.is_zero() {
            return Ok(false);
        }
        Ok(poly_gcd(self, &d)?.is_one())
    }

    /// Parses either `"c0,c1,...,cd"` (ascending decimal coefficients) or a
    /// pretty form such as `"T^3+2*T+1"`.
    pub fn parse(field: FieldSpec, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        if s.contains(['T', 't', 'x', 'X']) || !s.contains(',') && s.contains(['+', '*', '^']) {
            parse_pretty(field, s)
        } else {
            let coeffs = s
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(format!("{c:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(Poly::from_i64(field, &coeffs))
        }
    }

    /// Ascending comma-separated coefficients; `"0"` for the zero polynomial.
    pub fn to_coeff_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_pretty(field: FieldSpec, s: &str) -> Result<Poly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut acc: Vec<i64> = Vec::new();
    let mut terms: Vec<(i64, &str)> = Vec::new();
    let mut start = 0;
    let mut sign = 1;
    let bytes = cleaned.as_bytes();
    for i in 0..=bytes.len() {
        let at_end = i == bytes.len();
        if at_end || ((bytes[i] == b'+' || bytes[i] == b'-') && i > 0 && bytes[i - 1] != b'^') {
            let term = &cleaned[start..i];
            if !term.is_empty() {
                terms.push((sign, term));
            } else if i > 0 {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            if !at_end {
                sign = if bytes[i] == b'-' { -1 } else { 1 };
            }
            start = i + 1;
        } else if i == 0 && (bytes[0] == b'-' || bytes[0] == b'+') {
            sign = if bytes[0] == b'-' { -1 } else { 1 };
            start = 1;
        }
    }
    let bad = |t: &str| Error::Parse(format!("bad term {t:?}"));
    for (sign, term) in terms {
        let (coef, power) = match term.find(['T', 't', 'x', 'X']) {
            None => (term.parse::<i64>().map_err(|_| bad(term))?, 0usize),
            Some(pos) => {
                let head = term[..pos].trim_end_matches('*');
                let coef = if head.is_empty() { 1 } else { head.parse::<i64>().map_err(|_| bad(term))? };
                let tail = &term[pos + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^').ok_or_else(|| bad(term))?.parse::<usize>().map_err(|_| bad(term))?
                };
                (coef, power)
            }
        };
        if acc.len() <= power {
            acc.resize(power + 1, 0);
        }
        acc[power] += sign * coef.rem_euclid(field.p() as i64);
    }
    Ok(Poly::from_i64(field, &acc))
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, c) => write!(f, "{c}*T")?,
                (i, 1) => write!(f, "T^{i}")?,
                (i, c) => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{}]({})", self.field, self)
    }
}

/// Canonical order: by degree, then by coefficients from the top down. For
/// monic polynomials of one degree this matches enumeration order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v: Vec<u32> = (0..n)
            .map(|i| f.add(self.coeffs.get(i).copied().unwrap_or(0), rhs.coeffs.get(i).copied().unwrap_or(0)))
            .collect();
        trim(&mut v);
        Poly::from_raw(f, v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let f = self.field;
        Poly::from_raw(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let f = self.field;
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(f);
        }
        let p = f.p() as u64;
        let mut acc = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u64 * b as u64) % p;
            }
        }
        let mut v: Vec<u32> = acc.into_iter().map(|c| c as u32).collect();
        trim(&mut v);
        Poly::from_raw(f, v)
    }
}

macro_rules! owned_ops {
    ($($trait:ident $method:ident),*) => {$(
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    )*};
}

owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

pub fn poly_divrem(f: &Poly, g: &Poly) -> Result<(Poly, Poly)> {
    f.divrem(g)
}

/// Monic gcd by Euclid's algorithm.
pub fn poly_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    f.check_field(g)?;
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic_part().expect("nonzero").1)
}

pub fn derivative(f: &Poly) -> Poly {
    f.derivative()
}

pub fn is_squarefree(f: &Poly) -> Result<bool> {
    f.is_squarefree()
}

/// True iff `f` is a unit multiple of a perfect square (`f` nonzero).
pub fn is_square(f: &Poly) -> Result<bool> {
    Ok(factor(f)?.factors().iter().all(|(_, e)| e % 2 == 0))
}

pub(crate) fn big_q_pow(q: u64, k: usize) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..k {
        acc *= q;
    }
    acc
}

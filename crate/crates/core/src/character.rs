//! The quadratic residue symbol (D/f) on F_q[T] and the character chi_D.
//!
//! Two independent routes compute the symbol:
//!
//! * [`symbol`] factors the denominator and applies Euler's criterion in each
//!   residue field A/P ([`symbol_irreducible`]).
//! * [`jacobi_symbol`] runs a Euclidean descent using quadratic reciprocity
//!   for F_q[T]. Ensemble sweeps use this route.
//!
//! The numerator is never normalised: D may be non-monic or unreduced.

use std::ops::Range;

use num_bigint::BigUint;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{factor, is_irreducible, monic_count, visit_monic, Poly};

type Buf = SmallVec<[u32; 24]>;

/// The character chi_D(f) = (D/f) on monic f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadChar {
    modulus: Poly,
}

impl QuadChar {
    pub fn new(modulus: Poly) -> Result<Self> {
        if !modulus.field().is_odd() {
            return Err(Error::OddCharacteristicRequired);
        }
        if modulus.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(QuadChar { modulus })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn field(&self) -> FieldSpec {
        self.modulus.field()
    }

    pub fn eval(&self, f: &Poly) -> Result<i8> {
        jacobi_symbol(&self.modulus, f)
    }
}

fn check_pair(d: &Poly, f: &Poly) -> Result<()> {
    if d.field() != f.field() {
        return Err(Error::FieldMismatch);
    }
    if !f.field().is_odd() {
        return Err(Error::OddCharacteristicRequired);
    }
    if !f.is_monic() {
        return Err(Error::ZeroDenominator);
    }
    Ok(())
}

/// (D/P) for monic irreducible P via (D mod P)^{(|P|-1)/2} in A/P.
pub fn symbol_irreducible(d: &Poly, p: &Poly) -> Result<i8> {
    check_pair(d, p)?;
    if p.deg() == Some(0) || !is_irreducible(p)? {
        return Err(Error::NotIrreducible(p.to_string()));
    }
    euler_criterion(d, p)
}

fn euler_criterion(d: &Poly, p: &Poly) -> Result<i8> {
    let residue = d.rem(p)?;
    if residue.is_zero() {
        return Ok(0);
    }
    let exp = (p.norm() - 1u32) / 2u32;
    let r = residue.powmod(&exp, p)?;
    match r.coeffs() {
        [1] => Ok(1),
        [c] if *c == p.field().p() - 1 => Ok(-1),
        _ => Err(Error::NotIrreducible(p.to_string())),
    }
}

/// (D/f) for monic f as the product of (D/P)^e over the factorization of f.
pub fn symbol(d: &Poly, f: &Poly) -> Result<i8> {
    check_pair(d, f)?;
    let fac = factor(f)?;
    let mut acc = 1i8;
    for (p, e) in fac.factors() {
        let s = euler_criterion(d, p)?;
        if s == 0 {
            return Ok(0);
        }
        if e % 2 == 1 {
            acc *= s;
        }
    }
    Ok(acc)
}

/// (D/f) for monic f by reciprocity descent.
pub fn jacobi_symbol(d: &Poly, f: &Poly) -> Result<i8> {
    check_pair(d, f)?;
    Ok(jacobi_raw(d.field(), d.coeffs(), f.coeffs()))
}

/// a <- a mod b for monic b, trimming the result.
#[inline]
fn rem_monic(field: FieldSpec, a: &mut Buf, b: &[u32]) {
    let db = b.len() - 1;
    while a.len() > db {
        let top = a.len() - 1;
        let c = a[top];
        if c != 0 {
            let shift = top - db;
            for (j, &bj) in b[..db].iter().enumerate() {
                if bj != 0 {
                    a[shift + j] = field.sub(a[shift + j], field.mul(c, bj));
                }
            }
        }
        a.pop();
    }
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Jacobi symbol on raw coefficient slices; `b` must be monic.
///
/// For monic coprime A, B: (A/B)(B/A) = (-1)^{(q-1)/2 deg A deg B}, and a
/// constant c contributes (c/B) = sym(c)^{deg B}.
pub(crate) fn jacobi_raw(field: FieldSpec, a: &[u32], b: &[u32]) -> i8 {
    debug_assert_eq!(b.last(), Some(&1));
    let odd_half = (field.q() - 1) / 2 % 2 == 1;
    let mut a: Buf = a.iter().copied().collect();
    while a.last() == Some(&0) {
        a.pop();
    }
    let mut b: Buf = b.iter().copied().collect();
    let mut result = 1i8;
    loop {
        let db = b.len() - 1;
        if db == 0 {
            return result;
        }
        rem_monic(field, &mut a, &b);
        let Some(&lead) = a.last() else {
            return 0;
        };
        if lead != 1 {
            let inv = field.inv(lead);
            for x in a.iter_mut() {
                *x = field.mul(*x, inv);
            }
            if db % 2 == 1 {
                result *= field.symbol(lead);
            }
        }
        let da = a.len() - 1;
        if da == 0 {
            return result;
        }
        if odd_half && da % 2 == 1 && db % 2 == 1 {
            result = -result;
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// Exact sum of chi_D(B) over monic B of degree n.
pub fn char_sum(chi: &QuadChar, n: usize) -> i64 {
    let total = monic_count(chi.field(), n).expect("enumeration exceeds u64 range");
    char_sum_range(chi, n, 0..total)
}

/// Partial character sum over an index range of the monic enumeration.
pub fn char_sum_range(chi: &QuadChar, n: usize, range: Range<u64>) -> i64 {
    let field = chi.field();
    let d = chi.modulus.coeffs();
    let mut acc = 0i64;
    visit_monic(field, n, range, |f| acc += jacobi_raw(field, d, f) as i64);
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeilReport {
    pub lhs: i64,
    pub bound: f64,
    pub ok: bool,
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Checks |sum_{deg B = n} chi(B)| <= C(deg D - 1, n) q^{n/2}, exactly
/// (both sides squared).
pub fn check_weil_bound(chi: &QuadChar, n: usize) -> Result<WeilReport> {
    let deg = chi.modulus.deg().unwrap_or(0);
    if n >= deg {
        return Err(Error::DegreeTooLarge { n, deg });
    }
    let lhs = char_sum(chi, n);
    Ok(weil_report(chi.field().q(), deg, n, lhs))
}

pub(crate) fn weil_report(q: u64, deg: usize, n: usize, lhs: i64) -> WeilReport {
    let c = binomial(deg as u64 - 1, n as u64);
    let lhs_sq = BigUint::from(lhs.unsigned_abs()).pow(2);
    let rhs_sq = &c * &c * BigUint::from(q).pow(n as u32);
    let c_f64 = c.to_string().parse::<f64>().unwrap_or(f64::INFINITY);
    WeilReport { lhs, bound: c_f64 * (q as f64).powf(n as f64 / 2.0), ok: lhs_sq <= rhs_sq }
}

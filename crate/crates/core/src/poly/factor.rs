use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};

use super::{big_q_pow, enumerate_monic, poly_gcd, Poly};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Complete factorization `unit * prod P_i^{e_i}` into monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    unit: FieldElement,
    factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn unit(&self) -> FieldElement {
        self.unit
    }

    /// Distinct monic irreducible factors with multiplicities, in canonical order.
    pub fn factors(&self) -> &[(Poly, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(self.unit), |acc, (p, e)| &acc * &p.pow(*e as u64))
    }
}

pub(crate) fn integer_mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test: f of degree n is irreducible iff T^{q^n} = T mod f and
/// gcd(T^{q^{n/r}} - T, f) = 1 for every prime r | n.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let n = match f.deg() {
        None | Some(0) => return Err(Error::ConstantInput),
        Some(n) => n,
    };
    if n == 1 {
        return Ok(true);
    }
    let field = f.field();
    let f = f.monic_part().expect("nonzero").1;
    let t = Poly::t(field);
    let q = BigUint::from(field.q());
    let checkpoints: Vec<usize> = prime_divisors(n).into_iter().map(|r| n / r).collect();
    // frob[k] = T^{q^k} mod f
    let mut frob = t.rem(&f)?;
    for k in 1..=n {
        frob = frob.powmod(&q, &f)?;
        if checkpoints.contains(&k) && !poly_gcd(&(&frob - &t), &f)?.is_one() {
            return Ok(false);
        }
    }
    Ok((&frob - &t).rem(&f)?.is_zero())
}

type IrreducibleCache = Mutex<HashMap<(FieldSpec, usize), Arc<Vec<Poly>>>>;

fn cache() -> &'static IrreducibleCache {
    static CACHE: OnceLock<IrreducibleCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All monic irreducibles of degree `d`, in enumeration order. Tables are
/// built once per (field, degree) and shared read-only afterwards.
pub fn irreducibles(field: FieldSpec, d: usize) -> Arc<Vec<Poly>> {
    if let Some(t) = cache().lock().expect("cache poisoned").get(&(field, d)) {
        return Arc::clone(t);
    }
    let table: Vec<Poly> = if d == 0 {
        Vec::new()
    } else {
        enumerate_monic(field, d).filter(|f| is_irreducible(f).expect("degree >= 1")).collect()
    };
    let table = Arc::new(table);
    cache().lock().expect("cache poisoned").entry((field, d)).or_insert(table).clone()
}

/// Factorization by trial division against the cached irreducible tables.
pub fn factor(f: &Poly) -> Result<Factorization> {
    let (unit, mut rest) = f.monic_part().ok_or(Error::ZeroPolynomial)?;
    let field = f.field();
    let mut factors = Vec::new();
    let mut d = 1;
    while 2 * d <= rest.deg().unwrap_or(0) {
        for p in irreducibles(field, d).iter() {
            if 2 * d > rest.deg().unwrap_or(0) {
                break;
            }
            let mut e = 0;
            loop {
                let (quot, r) = rest.divrem(p)?;
                if !r.is_zero() {
                    break;
                }
                rest = quot;
                e += 1;
            }
            if e > 0 {
                factors.push((p.clone(), e));
            }
        }
        d += 1;
    }
    if !rest.is_one() {
        // What is left has no factor of degree <= deg/2, so it is irreducible;
        // it may still coincide with a factor already found.
        match factors.iter_mut().find(|(p, _)| *p == rest) {
            Some((_, e)) => *e += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Mobius function: (-1)^t for a unit times t distinct irreducibles, else 0.
pub fn mobius(f: &Poly) -> Result<i8> {
    let fac = factor(f)?;
    if !fac.is_squarefree() {
        return Ok(0);
    }
    Ok(if fac.factors.len() % 2 == 0 { 1 } else { -1 })
}

/// Number of nonzero polynomials of degree < deg f coprime to f.
pub fn euler_phi(f: &Poly) -> Result<BigUint> {
    match f.deg() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::ConstantInput),
        _ => {}
    }
    let fac = factor(f)?;
    Ok(fac.factors.iter().fold(BigUint::one(), |acc, (p, e)| {
        let norm = p.norm();
        acc * (&norm - 1u32) * norm.pow(e - 1)
    }))
}

/// Number of monic irreducibles of degree n: (1/n) sum_{d|n} mu(d) q^{n/d}.
pub fn count_irreducible(field: FieldSpec, n: i64) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::NonPositiveDegree(n));
    }
    let n = n as usize;
    let mut total = BigInt::from(0);
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        let mu = integer_mobius(d as u64);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(big_q_pow(field.q(), n / d));
        }
    }
    debug_assert!(!total.is_negative());
    let (quot, rem) = (total.magnitude() / n, total.magnitude() % n);
    debug_assert!(rem == BigUint::from(0u32));
    Ok(quot)
}

//! L-polynomials of quadratic characters and the values derived from them.
//!
//! For D monic square-free of degree 2g+1 the L-function of chi_D is a
//! polynomial of degree 2g in u = q^{-s}:
//!
//! ```text
//! L(u, chi_D) = sum_{n=0}^{2g} a_n u^n,   a_n = sum_{f monic, deg f = n} chi_D(f)
//! ```
//!
//! Three routes produce the coefficients: direct character sums, an Euler
//! product over irreducibles, and (for g <= 1) affine point counts on the
//! curve y^2 = D(x).

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::character::{char_sum, jacobi_raw, QuadChar};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{irreducibles, Poly};

pub type ExactRational = BigRational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LPolynomial {
    discriminant: Poly,
    genus: usize,
    coeffs: Vec<BigInt>,
}

impl LPolynomial {
    /// Wraps coefficients a_0..a_{2g} for the discriminant `d`.
    pub fn from_coeffs(d: Poly, coeffs: Vec<BigInt>) -> Result<Self> {
        let deg = d.deg().ok_or(Error::ZeroPolynomial)?;
        if deg % 2 == 0 {
            return Err(Error::EvenDegree(deg));
        }
        let genus = (deg - 1) / 2;
        if coeffs.len() != 2 * genus + 1 {
            return Err(Error::BadConfig(format!(
                "expected {} coefficients for genus {genus}, got {}",
                2 * genus + 1,
                coeffs.len()
            )));
        }
        Ok(LPolynomial { discriminant: d, genus, coeffs })
    }

    pub fn field(&self) -> FieldSpec {
        self.discriminant.field()
    }

    pub fn q(&self) -> u64 {
        self.field().q()
    }

    pub fn discriminant(&self) -> &Poly {
        &self.discriminant
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Overwrites one coefficient. Used by fault-injection checks.
    pub fn set_coeff(&mut self, n: usize, value: BigInt) {
        self.coeffs[n] = value;
    }

    pub fn eval(&self, u: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, a| acc * u + BigRational::from_integer(a.clone()))
    }

    pub fn record(&self) -> Result<LPolynomialRecord> {
        let l = l_value_at_one(self);
        Ok(LPolynomialRecord {
            q: self.q(),
            discriminant: self.discriminant.to_coeff_string(),
            g: self.genus,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
            l_at_one: RationalRecord::from(&l),
            class_number: class_number_of(self)?.to_string(),
        })
    }
}

/// Serialisable rational; integers as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalRecord {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalRecord {
    fn from(r: &BigRational) -> Self {
        RationalRecord { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomialRecord {
    pub q: u64,
    #[serde(rename = "D")]
    pub discriminant: String,
    pub g: usize,
    pub coeffs: Vec<String>,
    pub l_at_one: RationalRecord,
    pub class_number: String,
}

/// Checks that `d` is a monic square-free polynomial of odd degree over a
/// field of odd characteristic and returns its genus.
pub fn validate_discriminant(d: &Poly) -> Result<usize> {
    if !d.field().is_odd() {
        return Err(Error::OddCharacteristicRequired);
    }
    let deg = d.deg().ok_or(Error::ZeroPolynomial)?;
    if !d.is_monic() {
        return Err(Error::NotMonic(d.to_string()));
    }
    if deg % 2 == 0 {
        return Err(Error::EvenDegree(deg));
    }
    if !d.is_squarefree()? {
        return Err(Error::NotSquareFree(d.to_string()));
    }
    Ok((deg - 1) / 2)
}

/// a_n as raw character sums over all monic f of degree n <= 2g.
pub fn l_coefficients_direct(d: &Poly) -> Result<LPolynomial> {
    let g = validate_discriminant(d)?;
    let chi = QuadChar::new(d.clone())?;
    let coeffs = (0..=2 * g).map(|n| BigInt::from(char_sum(&chi, n))).collect();
    LPolynomial::from_coeffs(d.clone(), coeffs)
}

/// Number of affine solutions of y^2 = D(x) over the base field.
pub fn affine_point_count(d: &Poly) -> Result<u64> {
    let field = d.field();
    let mut n = 0u64;
    for x in field.elements() {
        n += (1 + d.eval(x).residue_symbol()?) as u64;
    }
    Ok(n)
}

/// Coefficients recovered from the curve's point counts.
///
/// N_1 = q + 1 + a_1 (one point at infinity for odd degree). Only the base
/// field count is available, so genus <= 1 is supported; a_2 follows from
/// the functional equation.
pub fn l_coefficients_from_points(d: &Poly) -> Result<LPolynomial> {
    let g = validate_discriminant(d)?;
    let q = d.field().q();
    let coeffs = match g {
        0 => vec![BigInt::one()],
        1 => {
            let n1 = affine_point_count(d)? + 1;
            let a1 = n1 as i64 - q as i64 - 1;
            vec![BigInt::one(), BigInt::from(a1), BigInt::from(q)]
        }
        g => return Err(Error::UnsupportedGenus(g)),
    };
    LPolynomial::from_coeffs(d.clone(), coeffs)
}

/// Precomputed irreducibles of degree 1..=max_degree for building
/// L-polynomials as Euler products. Read-only once built.
#[derive(Clone, Debug)]
pub struct EulerTable {
    field: FieldSpec,
    by_degree: Vec<Arc<Vec<Poly>>>,
}

impl EulerTable {
    pub fn new(field: FieldSpec, max_degree: usize) -> Self {
        let by_degree = (1..=max_degree).map(|k| irreducibles(field, k)).collect();
        EulerTable { field, by_degree }
    }

    /// Table sufficient for every discriminant of genus `g`.
    pub fn for_genus(field: FieldSpec, g: usize) -> Self {
        Self::new(field, 2 * g)
    }

    pub fn max_degree(&self) -> usize {
        self.by_degree.len()
    }

    pub fn prime_count(&self) -> usize {
        self.by_degree.iter().map(|t| t.len()).sum()
    }

    /// Counts of irreducibles with chi_D(P) = +1 and -1, per degree.
    pub(crate) fn character_counts(&self, d: &[u32]) -> (Vec<u64>, Vec<u64>) {
        let mut plus = vec![0u64; self.by_degree.len() + 1];
        let mut minus = vec![0u64; self.by_degree.len() + 1];
        for (i, table) in self.by_degree.iter().enumerate() {
            for p in table.iter() {
                match jacobi_raw(self.field, d, p.coeffs()) {
                    1 => plus[i + 1] += 1,
                    -1 => minus[i + 1] += 1,
                    _ => {}
                }
            }
        }
        (plus, minus)
    }

    /// a_0..a_{len-1} of prod_P (1 - chi_D(P) u^{deg P})^{-1}.
    pub(crate) fn coefficients(&self, d: &[u32], len: usize) -> Vec<BigInt> {
        assert!(len <= self.by_degree.len() + 1, "Euler table too small");
        let (plus, minus) = self.character_counts(d);
        expand_euler_product(&plus, &minus, len)
    }
}

/// Expands prod_k (1 - u^k)^{-plus[k]} (1 + u^k)^{-minus[k]} up to u^{len-1}.
pub(crate) fn expand_euler_product(plus: &[u64], minus: &[u64], len: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); len];
    if len == 0 {
        return series;
    }
    series[0] = BigInt::one();
    for k in 1..len.min(plus.len()) {
        for (m, sign) in [(plus[k], 1i32), (minus[k], -1i32)] {
            if m == 0 {
                continue;
            }
            // (1 -/+ x)^{-m} = sum_j (+/-1)^j C(m+j-1, j) x^j with x = u^k
            let max_j = (len - 1) / k;
            let mut factor = Vec::with_capacity(max_j + 1);
            let mut c = BigInt::one();
            for j in 0..=max_j {
                if j > 0 {
                    c = c * BigInt::from(m + j as u64 - 1) / BigInt::from(j as u64);
                }
                let term = if sign < 0 && j % 2 == 1 { -c.clone() } else { c.clone() };
                factor.push(term);
            }
            let mut next = vec![BigInt::zero(); len];
            for (i, s) in series.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                for (j, f) in factor.iter().enumerate() {
                    let idx = i + j * k;
                    if idx >= len {
                        break;
                    }
                    next[idx] += s * f;
                }
            }
            series = next;
        }
    }
    series
}

/// a_n through the Euler product over irreducibles of degree <= 2g.
pub fn l_coefficients_euler(d: &Poly) -> Result<LPolynomial> {
    let g = validate_discriminant(d)?;
    let table = EulerTable::for_genus(d.field(), g);
    l_coefficients_with_table(d, &table)
}

pub fn l_coefficients_with_table(d: &Poly, table: &EulerTable) -> Result<LPolynomial> {
    let g = validate_discriminant(d)?;
    let coeffs = table.coefficients(d.coeffs(), 2 * g + 1);
    LPolynomial::from_coeffs(d.clone(), coeffs)
}

fn q_pow(q: u64, k: usize) -> BigInt {
    BigInt::from(BigUint::from(q).pow(k as u32))
}

/// a_n q^{g-n} = a_{2g-n} for all n, cross-multiplied to stay integral.
pub fn verify_functional_equation(l: &LPolynomial) -> bool {
    let g = l.genus;
    let q = l.q();
    if l.coeffs.len() != 2 * g + 1 {
        return false;
    }
    (0..=2 * g).all(|n| {
        let (lhs, rhs) = if n <= g {
            (&l.coeffs[n] * q_pow(q, g - n), l.coeffs[2 * g - n].clone())
        } else {
            (l.coeffs[n].clone(), &l.coeffs[2 * g - n] * q_pow(q, n - g))
        };
        lhs == rhs
    })
}

/// L(1, chi_D) = sum_n a_n q^{-n}, reduced.
pub fn l_value_at_one(l: &LPolynomial) -> ExactRational {
    let top = l.coeffs.len().saturating_sub(1);
    let num: BigInt = l.coeffs.iter().enumerate().map(|(n, a)| a * q_pow(l.q(), top - n)).sum();
    BigRational::new(num, q_pow(l.q(), top))
}

/// The approximate functional equation at s = 1:
/// sum_{deg f <= g} chi(f)/|f| + q^{-g} sum_{deg f <= g-1} chi(f).
pub fn approx_fe_value(d: &Poly) -> Result<ExactRational> {
    let g = validate_discriminant(d)?;
    let chi = QuadChar::new(d.clone())?;
    let sums: Vec<i64> = (0..=g).map(|n| char_sum(&chi, n)).collect();
    Ok(approx_fe_from_sums(d.field().q(), g, &sums))
}

/// Assembles the approximate functional equation from the short character
/// sums s_0..s_g.
pub(crate) fn approx_fe_from_sums(q: u64, g: usize, sums: &[i64]) -> ExactRational {
    // common denominator q^g
    let first: BigInt = (0..=g).map(|n| BigInt::from(sums[n]) * q_pow(q, g - n)).sum();
    let second: BigInt = (0..g).map(|m| BigInt::from(sums[m])).sum();
    BigRational::new(first + second, q_pow(q, g))
}

/// h_D = q^g L(1, chi_D) = sum_n a_n q^{g-n}, which must be a positive integer.
pub fn class_number_of(l: &LPolynomial) -> Result<BigInt> {
    let g = l.genus;
    let q = l.q();
    let num: BigInt = l.coeffs.iter().enumerate().map(|(n, a)| a * q_pow(q, 2 * g - n)).sum();
    let den = q_pow(q, g);
    let (h, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonIntegralClassNumber(BigRational::new(num, den).to_string()));
    }
    if !h.is_positive() {
        return Err(Error::NonPositive(h.to_string()));
    }
    Ok(h)
}

/// h_D from a_0..a_g alone, folding the upper half in through the
/// functional equation: h = sum_{n<=g} a_n q^{g-n} + sum_{n<g} a_n.
pub fn class_number_from_half(q: u64, g: usize, half: &[BigInt]) -> BigInt {
    assert!(half.len() > g, "need a_0..a_g");
    let upper: BigInt = (0..=g).map(|n| &half[n] * q_pow(q, g - n)).sum();
    let lower: BigInt = half[..g].iter().sum();
    upper + lower
}

pub fn class_number(d: &Poly) -> Result<BigInt> {
    class_number_of(&l_coefficients_euler(d)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::poly::enumerate_ensemble;

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(f5(), s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn genus_zero() {
        let d = p("T");
        for l in [
            l_coefficients_direct(&d).unwrap(),
            l_coefficients_from_points(&d).unwrap(),
            l_coefficients_euler(&d).unwrap(),
        ] {
            assert_eq!(l.coeffs(), ints(&[1]).as_slice());
            assert!(verify_functional_equation(&l));
            assert_eq!(l_value_at_one(&l), BigRational::one());
        }
        assert_eq!(approx_fe_value(&d).unwrap(), BigRational::one());
        assert_eq!(class_number(&d).unwrap(), BigInt::one());
    }

    #[test]
    fn cubic_example_three_routes() {
        let d = p("T^3+T+1");
        let direct = l_coefficients_direct(&d).unwrap();
        let points = l_coefficients_from_points(&d).unwrap();
        let euler = l_coefficients_euler(&d).unwrap();
        assert_eq!(direct, points);
        assert_eq!(direct, euler);
        let a1 = direct.coeffs()[1].clone();
        let a2 = direct.coeffs()[2].clone();
        assert_eq!(a2, BigInt::from(5));
        let expected = BigRational::new(BigInt::from(25) + BigInt::from(5) * &a1 + &a2, BigInt::from(25));
        assert_eq!(l_value_at_one(&direct), expected);
        assert_eq!(approx_fe_value(&d).unwrap(), expected);
        assert_eq!(class_number(&d).unwrap(), BigInt::from(5) + &a1 + BigInt::from(1));
        // N_1 = q + 1 + a_1
        assert_eq!(affine_point_count(&d).unwrap() as i64 + 1, 6 + a1.to_string().parse::<i64>().unwrap());
    }

    #[test]
    fn rejects_bad_discriminants() {
        assert!(matches!(l_coefficients_direct(&p("T^2+T")), Err(Error::EvenDegree(2))));
        assert!(matches!(l_coefficients_direct(&p("T^3")), Err(Error::NotSquareFree(_))));
        assert!(matches!(l_coefficients_direct(&p("2*T^3+1")), Err(Error::NotMonic(_))));
        let d5 = p("T^5+T+1");
        assert!(d5.is_squarefree().unwrap());
        assert_eq!(l_coefficients_from_points(&d5), Err(Error::UnsupportedGenus(2)));
    }

    #[test]
    fn functional_equation_detects_fault() {
        let mut l = l_coefficients_euler(&p("T^5+T+1")).unwrap();
        assert!(verify_functional_equation(&l));
        assert_eq!(l.coeffs()[4], BigInt::from(25));
        let bumped = &l.coeffs()[1] + 1;
        l.set_coeff(1, bumped);
        assert!(!verify_functional_equation(&l));
    }

    #[test]
    fn half_coefficients_give_the_class_number() {
        let field = f5();
        let table = EulerTable::new(field, 2);
        for d in enumerate_ensemble(field, 2).unwrap().step_by(7) {
            let half = table.coefficients(d.coeffs(), 3);
            let full = class_number_of(&l_coefficients_euler(&d).unwrap()).unwrap();
            assert_eq!(class_number_from_half(5, 2, &half), full, "D={d}");
        }
    }

    #[test]
    fn class_number_rejects_non_integral() {
        let l = LPolynomial::from_coeffs(p("T^3+T+1"), ints(&[1, 0, 1])).unwrap();
        assert!(matches!(class_number_of(&l), Err(Error::NonIntegralClassNumber(_))));
        let l = LPolynomial::from_coeffs(p("T^3+T+1"), ints(&[1, -12, 5])).unwrap();
        assert!(matches!(class_number_of(&l), Err(Error::NonPositive(_))));
    }

    #[test]
    fn euler_matches_direct_on_small_ensembles() {
        for (q, g) in [(5, 1), (5, 2), (13, 1)] {
            let field = FieldSpec::new(q).unwrap();
            let table = EulerTable::for_genus(field, g);
            for d in enumerate_ensemble(field, g).unwrap() {
                let direct = l_coefficients_direct(&d).unwrap();
                assert_eq!(l_coefficients_with_table(&d, &table).unwrap(), direct, "{d}");
                if g == 1 {
                    assert_eq!(l_coefficients_from_points(&d).unwrap(), direct, "{d}");
                }
            }
        }
    }

    #[test]
    fn expansion_of_single_factors() {
        // (1 - u)^{-2} = 1 + 2u + 3u^2 + 4u^3
        assert_eq!(expand_euler_product(&[0, 2], &[0, 0], 4), ints(&[1, 2, 3, 4]));
        // (1 + u^2)^{-1} = 1 - u^2 + u^4
        assert_eq!(expand_euler_product(&[0, 0, 0], &[0, 0, 1], 5), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn record_serialises_exact_strings() {
        let l = l_coefficients_euler(&p("1,1,0,1")).unwrap();
        let r = l.record().unwrap();
        assert_eq!(r.discriminant, "1,1,0,1");
        assert_eq!(r.g, 1);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"l_at_one\":{\"num\""));
    }
}

//! Zeta values, Euler products and closed-form main terms.
//!
//! Euler products over monic irreducibles are aggregated by degree: the
//! factor for degree n appears pi_q(n) times, so
//!
//! ```text
//! P(s) = prod_n (1 - 1/((q^n + 1) q^{ns}))^{pi_q(n)}
//! ```
//!
//! evaluated with 384-bit binary floats. The main terms for the ensemble
//! sum of L(1, chi_D) are assembled in `f64` from those products.

use std::collections::BTreeMap;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{count_irreducible, euler_phi, factor, Poly};

/// Working precision of Euler products, in bits.
pub const PRECISION: usize = 384;
const RM: RoundingMode = RoundingMode::ToEven;

fn q_pow(q: u64, k: usize) -> BigUint {
    BigUint::from(q).pow(k as u32)
}

fn rational_q_pow(q: u64, k: i64) -> BigRational {
    let base = BigInt::from(q_pow(q, k.unsigned_abs() as usize));
    if k >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// zeta_A(s) = 1/(1 - q^{1-s}) for integer s >= 2.
pub fn zeta_a(field: FieldSpec, s: i64) -> Result<BigRational> {
    if s <= 1 {
        return Err(Error::PoleAtOne(s));
    }
    let t = rational_q_pow(field.q(), s - 1);
    Ok(&t / (&t - BigRational::one()))
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn big_to_float(n: &BigUint, cc: &mut Consts) -> BigFloat {
    BigFloat::parse(&n.to_string(), Radix::Dec, PRECISION, RM, cc)
}

fn float_to_f64(x: &BigFloat) -> f64 {
    x.to_string().parse().unwrap_or(f64::NAN)
}

/// -ln(1 - x) by its power series; 0 <= x <= 1/2.
fn neg_ln_one_minus(x: &BigFloat) -> BigFloat {
    let mut sum = x.clone();
    let mut power = x.clone();
    let eps = BigFloat::from_word(1, PRECISION).mul(
        &BigFloat::from_word(2, PRECISION).powi(PRECISION + 8, PRECISION, RM).reciprocal(PRECISION, RM),
        PRECISION,
        RM,
    );
    for k in 2u64.. {
        power = power.mul(x, PRECISION, RM);
        let term = power.div(&BigFloat::from_u64(k, PRECISION), PRECISION, RM);
        sum = sum.add(&term, PRECISION, RM);
        if term.abs().cmp(&sum.abs().mul(&eps, PRECISION, RM)).is_none_or(|c| c <= 0) {
            break;
        }
    }
    sum
}

/// A truncated Euler product with a rigorous bound on the neglected part.
#[derive(Clone, Debug)]
pub struct TruncatedEulerProduct {
    pub s: u32,
    pub cutoff_degree: usize,
    /// Product over all irreducibles of degree <= cutoff.
    pub value: BigFloat,
    /// Bound on |log| of the omitted factors plus a rounding allowance.
    pub tail_bound: BigFloat,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerProductRecord {
    pub value: String,
    pub cutoff: usize,
    pub tail_bound: String,
}

impl TruncatedEulerProduct {
    pub fn value_f64(&self) -> f64 {
        float_to_f64(&self.value)
    }

    pub fn tail_bound_f64(&self) -> f64 {
        float_to_f64(&self.tail_bound)
    }

    pub fn record(&self) -> EulerProductRecord {
        EulerProductRecord {
            value: self.value.to_string(),
            cutoff: self.cutoff_degree,
            tail_bound: self.tail_bound.to_string(),
        }
    }
}

/// P(s) = prod_P (1 - 1/((|P|+1)|P|^s)) truncated at degree `cutoff`.
///
/// The omitted log is at most sum_{n > c} pi_q(n) x_n/(1 - x_n) with
/// x_n <= q^{-n(s+1)} and pi_q(n) <= q^n, giving the geometric majorant
/// q^{-(c+1)s} / ((1 - q^{-s})(1 - q^{-(s+1)})).
pub fn euler_product_p(field: FieldSpec, s: u32, cutoff: usize) -> Result<TruncatedEulerProduct> {
    if s == 0 {
        return Err(Error::Unsupported("P(s) diverges at s = 0".into()));
    }
    let q = field.q();
    let mut cc = Consts::new().map_err(|e| Error::Unsupported(format!("float constants: {e:?}")))?;
    let mut log_sum = BigFloat::from_word(0, PRECISION);
    for n in 1..=cutoff {
        let pi = count_irreducible(field, n as i64)?;
        let den = (q_pow(q, n) + 1u32) * q_pow(q, n * s as usize);
        let x = big_to_float(&den, &mut cc).reciprocal(PRECISION, RM);
        let term = neg_ln_one_minus(&x).mul(&big_to_float(&pi, &mut cc), PRECISION, RM);
        log_sum = log_sum.sub(&term, PRECISION, RM);
    }
    let value = log_sum.exp(PRECISION, RM, &mut cc);

    let one = BigFloat::from_word(1, PRECISION);
    let qf = BigFloat::from_u64(q, PRECISION);
    let inv_pow = |k: usize| qf.powi(k, PRECISION, RM).reciprocal(PRECISION, RM);
    let truncation = inv_pow((cutoff + 1) * s as usize)
        .div(&one.sub(&inv_pow(s as usize), PRECISION, RM), PRECISION, RM)
        .div(&one.sub(&inv_pow(s as usize + 1), PRECISION, RM), PRECISION, RM);
    let rounding = BigFloat::from_word(2, PRECISION).powi(PRECISION - 64, PRECISION, RM).reciprocal(PRECISION, RM);
    let tail_bound = truncation.add(&rounding, PRECISION, RM);
    Ok(TruncatedEulerProduct { s, cutoff_degree: cutoff, value, tail_bound })
}

/// Distinct irreducible factors of `l`, counted per degree.
fn prime_degree_counts(l: Option<&Poly>) -> Result<BTreeMap<usize, u64>> {
    let mut counts = BTreeMap::new();
    if let Some(l) = l {
        for p in factor(l)?.primes() {
            *counts.entry(p.deg().unwrap_or(0)).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Exact sum over monic d with deg d <= max_deg and (d, l) = 1 of
///
/// ```text
/// mu(d) / |d|^a * prod_{P | d} 1/(|P| + 1)     (weighted)
/// mu(d) / |d|^a                                 (plain)
/// ```
///
/// The summand is multiplicative and depends only on the degrees of the
/// prime factors, so the sum is read off the truncated series
/// prod_k (1 - c_k x^k)^{m_k}, where m_k counts the admissible primes of
/// degree k.
pub fn mobius_weighted_sum(
    field: FieldSpec,
    a: u32,
    max_deg: usize,
    l: Option<&Poly>,
    weighted: bool,
) -> Result<BigRational> {
    let q = field.q();
    let excluded = prime_degree_counts(l)?;
    let mut series = vec![BigRational::zero(); max_deg + 1];
    series[0] = BigRational::one();
    for k in 1..=max_deg {
        let total = count_irreducible(field, k as i64)?;
        let m = total - BigUint::from(*excluded.get(&k).unwrap_or(&0));
        let mut c = rational_q_pow(q, -((a as usize * k) as i64));
        if weighted {
            c /= BigRational::from_integer(BigInt::from(q_pow(q, k) + 1u32));
        }
        let max_j = max_deg / k;
        let mut factor = Vec::with_capacity(max_j + 1);
        let mut binom = BigInt::one();
        let mut c_pow = BigRational::one();
        let m = BigInt::from(m);
        for j in 0..=max_j {
            if j > 0 {
                binom = binom * (&m - BigInt::from(j - 1)) / BigInt::from(j);
                c_pow = &c_pow * &c;
            }
            if binom.is_zero() {
                break;
            }
            let term = BigRational::from_integer(binom.clone()) * &c_pow;
            factor.push(if j % 2 == 1 { -term } else { term });
        }
        let mut next = vec![BigRational::zero(); max_deg + 1];
        for (i, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for (j, f) in factor.iter().enumerate() {
                let idx = i + j * k;
                if idx > max_deg {
                    break;
                }
                next[idx] += s * f;
            }
        }
        series = next;
    }
    Ok(series.into_iter().sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaVariant {
    /// The bracket as printed in the theorem statement.
    TheoremLiteral,
    /// Sum of the two pieces assembled in the proof.
    ProofAssembled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MainTermBreakdown {
    pub leading: f64,
    pub secondary_1: f64,
    pub secondary_2: f64,
    pub total: f64,
    pub formula_variant: FormulaVariant,
}

/// Euler-product constants P(1), P(2) at a fixed cutoff, with the main-term
/// formulas that use them.
#[derive(Clone, Debug)]
pub struct SpecialValues {
    field: FieldSpec,
    p1: TruncatedEulerProduct,
    p2: TruncatedEulerProduct,
}

impl SpecialValues {
    pub fn new(field: FieldSpec, cutoff: usize) -> Result<Self> {
        Ok(SpecialValues { field, p1: euler_product_p(field, 1, cutoff)?, p2: euler_product_p(field, 2, cutoff)? })
    }

    pub fn p1(&self) -> &TruncatedEulerProduct {
        &self.p1
    }

    pub fn p2(&self) -> &TruncatedEulerProduct {
        &self.p2
    }

    fn zeta2(&self) -> f64 {
        rational_to_f64(&zeta_a(self.field, 2).expect("s = 2"))
    }

    /// zeta_A(2) P(2): the limiting average of L(1, chi_D).
    pub fn corollary_average(&self) -> f64 {
        self.zeta2() * self.p2.value_f64()
    }

    /// Predicted average class number q^g zeta_A(2) P(2).
    pub fn average_class_number(&self, g: usize) -> f64 {
        (self.field.q() as f64).powi(g as i32) * self.corollary_average()
    }

    pub fn theorem2_main_term(&self, g: usize, variant: FormulaVariant) -> MainTermBreakdown {
        let q = self.field.q() as f64;
        let gi = g as i64;
        let norm_d = q.powi(2 * g as i32 + 1);
        let p1 = self.p1.value_f64();
        let p2 = self.p2.value_f64();
        let z2 = self.zeta2();
        let half_floor = gi.div_euclid(2);
        let half_floor_minus = (gi - 1).div_euclid(2);
        let leading = norm_d * p2;
        let secondary_1 = -norm_d * q.powi(-(half_floor as i32) - 1) * p1;
        let secondary_2 = match variant {
            FormulaVariant::ProofAssembled => {
                -norm_d * q.powi(-(gi as i32)) * q.powi(half_floor_minus as i32 + 1) / (z2 * (1.0 - q)) * p1
            }
            FormulaVariant::TheoremLiteral => -norm_d * p1 / (z2 * z2 * q.powi((gi * half_floor_minus) as i32)),
        };
        MainTermBreakdown {
            leading,
            secondary_1,
            secondary_2,
            total: leading + secondary_1 + secondary_2,
            formula_variant: variant,
        }
    }
}

pub fn theorem2_main_term(
    field: FieldSpec,
    g: usize,
    variant: FormulaVariant,
    cutoff: usize,
) -> Result<MainTermBreakdown> {
    Ok(SpecialValues::new(field, cutoff)?.theorem2_main_term(g, variant))
}

pub fn corollary_average(field: FieldSpec, cutoff: usize) -> Result<f64> {
    Ok(SpecialValues::new(field, cutoff)?.corollary_average())
}

fn require_monic(l: &Poly) -> Result<()> {
    if l.is_monic() {
        Ok(())
    } else {
        Err(Error::ZeroModulus)
    }
}

/// |D| / (zeta_A(2) prod_{P | l} (1 + 1/|P|)) with |D| = q^{2g+1}, exactly.
pub fn prop2_main_term(g: usize, l: &Poly) -> Result<BigRational> {
    require_monic(l)?;
    let field = l.field();
    let q = field.q();
    let mut acc = BigRational::from_integer(BigInt::from(q_pow(q, 2 * g + 1))) / zeta_a(field, 2)?;
    if !l.is_one() {
        for p in factor(l)?.primes() {
            let norm = BigInt::from(p.norm());
            acc *= BigRational::new(norm.clone(), norm + 1);
        }
    }
    Ok(acc)
}

/// #{D monic, deg D = d, (D, l) = 1} = q^d Phi(l)/|l|, for d >= deg l.
pub fn count_coprime_exact(d: usize, l: &Poly) -> Result<BigUint> {
    require_monic(l)?;
    let deg_l = l.deg().unwrap_or(0);
    if deg_l == 0 {
        return Err(Error::ConstantInput);
    }
    if d < deg_l {
        return Err(Error::DegreeTooSmall { d, deg_l });
    }
    let q = l.field().q();
    Ok(q_pow(q, d - deg_l) * euler_phi(l)?)
}

/// The same count by enumerating every monic D of degree d.
pub fn count_coprime_brute(d: usize, l: &Poly) -> Result<u64> {
    require_monic(l)?;
    let mut n = 0;
    for cand in crate::poly::enumerate_monic(l.field(), d) {
        if crate::poly::poly_gcd(&cand, l)?.is_one() {
            n += 1;
        }
    }
    Ok(n)
}

/// A measured quantity against the envelope it is claimed to be O() of.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaMonitor {
    pub name: String,
    pub measured: f64,
    pub envelope: f64,
    pub ratio: f64,
    /// False for ratios reported without a boundedness claim.
    pub asserted: bool,
}

impl LemmaMonitor {
    fn new(name: &str, measured: f64, envelope: f64) -> Self {
        LemmaMonitor { name: name.into(), measured, envelope, ratio: measured.abs() / envelope, asserted: true }
    }

    fn informational(name: &str, measured: f64, envelope: f64) -> Self {
        LemmaMonitor { asserted: false, ..LemmaMonitor::new(name, measured, envelope) }
    }

    pub fn within(&self, threshold: f64) -> bool {
        !self.asserted || self.ratio <= threshold
    }
}

/// Measured-over-envelope ratios for the Mobius-sum estimates feeding the
/// main term at genus g (coprimality modulus `l` for the square-count tail).
pub fn lemma_monitors(sv: &SpecialValues, g: usize, l: Option<&Poly>) -> Result<Vec<LemmaMonitor>> {
    let field = sv.field;
    let q = field.q();
    let qf = q as f64;
    let gi = g as i64;
    let norm_d = qf.powi(2 * g as i32 + 1);
    let q_g = qf.powi(g as i32);
    let half = gi.div_euclid(2) as usize;
    let z2 = zeta_a(field, 2)?;
    let one_minus_inv_q = BigRational::one() - rational_q_pow(q, -1);
    let p1 = sv.p1.value_f64();
    let p2 = sv.p2.value_f64();
    let mut out = Vec::new();

    let s2 = mobius_weighted_sum(field, 2, half, None, true)?;
    let tail2 = p2 - rational_to_f64(&s2);
    out.push(LemmaMonitor::new("mobius_tail_a2", norm_d * tail2, q_g));

    // |D|/zeta_A(2) * sum mu(d)/|d| prod 1/(|P|+1) * q^{-deg d}/(1 - 1/q), minus |D| P(2)
    let assembled = rational_to_f64(&(&s2 / (&z2 * &one_minus_inv_q)));
    out.push(LemmaMonitor::new("square_main_term", norm_d * (assembled - p2), q_g));

    // The a = 1 tail enters the main term only after scaling by
    // q^{-[g/2]-1}/(1 - 1/q); unscaled it grows like q^{3g/2}.
    let s1 = mobius_weighted_sum(field, 1, half, None, true)?;
    let tail1 = norm_d * (p1 - rational_to_f64(&s1));
    let scale = qf.powi(-(half as i32) - 1) / (1.0 - 1.0 / qf);
    out.push(LemmaMonitor::new("mobius_tail_a1", scale * tail1, q_g));
    out.push(LemmaMonitor::informational("mobius_tail_a1_unscaled", tail1, q_g));

    if g >= 1 {
        let half_minus = ((gi - 1).div_euclid(2)) as usize;
        let s1m = mobius_weighted_sum(field, 1, half_minus, None, true)?;
        let scale =
            norm_d * qf.powi(-(g as i32)) * qf.powi(half_minus as i32 + 1) / (rational_to_f64(&z2) * (1.0 - qf));
        out.push(LemmaMonitor::new("mobius_tail_a1_dual", scale * (p1 - rational_to_f64(&s1m)), q_g));

        let s0 = mobius_weighted_sum(field, 0, half_minus, None, true)?;
        let scale = norm_d * qf.powi(-(g as i32)) / (rational_to_f64(&z2) * (1.0 - qf));
        out.push(LemmaMonitor::new("mobius_head_a0", scale * rational_to_f64(&s0), g as f64 * q_g));
    }

    let tail = coprime_square_tail(field, g, l)?;
    out.push(LemmaMonitor::new("coprime_square_tail", rational_to_f64(&tail), qf.powf(-0.5) / q_g));
    Ok(out)
}

/// (1/zeta_A(2)) / prod_{P | l}(1 - 1/|P|^2)  minus  sum_{deg Q <= g, (Q,l)=1} mu(Q)/|Q|^2.
///
/// This is exactly the tail over deg Q > g + 1/2, computed in closed form.
pub fn coprime_square_tail(field: FieldSpec, g: usize, l: Option<&Poly>) -> Result<BigRational> {
    let mut closed = BigRational::one() / zeta_a(field, 2)?;
    if let Some(l) = l {
        if !l.is_one() {
            for p in factor(l)?.primes() {
                let n2 = BigInt::from(p.norm().pow(2));
                closed *= BigRational::new(n2.clone(), n2 - 1);
            }
        }
    }
    Ok(closed - mobius_weighted_sum(field, 2, g, l, false)?)
}

/// Whether |value| <= bound, for a rational and a nonnegative rational bound.
pub fn within(value: &BigRational, bound: &BigRational) -> bool {
    value.abs() <= *bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{enumerate_monic, mobius};

    fn f5() -> FieldSpec {
        FieldSpec::new(5).unwrap()
    }

    fn p(s: &str) -> Poly {
        Poly::parse(f5(), s).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn zeta_examples() {
        assert_eq!(zeta_a(f5(), 2).unwrap(), rat(5, 4));
        assert_eq!(zeta_a(f5(), 3).unwrap(), rat(25, 24));
        assert_eq!(zeta_a(f5(), 1), Err(Error::PoleAtOne(1)));
    }

    /// Sum over every monic d by factoring each one.
    fn mobius_sum_brute(field: FieldSpec, a: u32, max_deg: usize, l: Option<&Poly>, weighted: bool) -> BigRational {
        let q = field.q();
        let mut acc = BigRational::zero();
        for n in 0..=max_deg {
            for d in enumerate_monic(field, n) {
                if let Some(l) = l {
                    if !crate::poly::poly_gcd(&d, l).unwrap().is_one() {
                        continue;
                    }
                }
                let mu = mobius(&d).unwrap();
                if mu == 0 {
                    continue;
                }
                let mut term =
                    BigRational::from_integer(BigInt::from(mu)) * rational_q_pow(q, -((a as usize * n) as i64));
                if weighted {
                    for pr in factor(&d).unwrap().primes() {
                        term /= BigRational::from_integer(BigInt::from(pr.norm() + 1u32));
                    }
                }
                acc += term;
            }
        }
        acc
    }

    #[test]
    fn mobius_sum_matches_enumeration() {
        let l = p("T^2+T");
        for (a, weighted) in [(0, true), (1, true), (2, true), (2, false), (1, false)] {
            for max_deg in 0..=4 {
                for lopt in [None, Some(&l)] {
                    assert_eq!(
                        mobius_weighted_sum(f5(), a, max_deg, lopt, weighted).unwrap(),
                        mobius_sum_brute(f5(), a, max_deg, lopt, weighted),
                        "a={a} weighted={weighted} max_deg={max_deg} l={lopt:?}"
                    );
                }
            }
        }
        let f13 = FieldSpec::new(13).unwrap();
        let l13 = Poly::parse(f13, "T^2+2").unwrap();
        assert_eq!(
            mobius_weighted_sum(f13, 2, 3, Some(&l13), false).unwrap(),
            mobius_sum_brute(f13, 2, 3, Some(&l13), false)
        );
    }

    #[test]
    fn mobius_sum_trivial_cases() {
        assert_eq!(mobius_weighted_sum(f5(), 2, 0, None, true).unwrap(), BigRational::one());
        let one = Poly::one(f5());
        for max_deg in 0..6 {
            assert_eq!(
                mobius_weighted_sum(f5(), 2, max_deg, Some(&one), true).unwrap(),
                mobius_weighted_sum(f5(), 2, max_deg, None, true).unwrap()
            );
        }
    }

    #[test]
    fn weighted_sum_converges_to_euler_product() {
        let sv = SpecialValues::new(f5(), 40).unwrap();
        let s = mobius_weighted_sum(f5(), 2, 12, None, true).unwrap();
        // tail over deg d > 12 is at most sum_{h > 12} q^{-2h}
        let bound = 5f64.powi(-26) / (1.0 - 1.0 / 25.0);
        assert!((rational_to_f64(&s) - sv.p2().value_f64()).abs() <= bound + 1e-16);
        let s1 = mobius_weighted_sum(f5(), 1, 12, None, true).unwrap();
        assert!((rational_to_f64(&s1) - sv.p1().value_f64()).abs() < 1e-8);
    }

    #[test]
    fn euler_product_examples() {
        let p0 = euler_product_p(f5(), 2, 0).unwrap();
        assert_eq!(p0.value_f64(), 1.0);
        let p30 = euler_product_p(f5(), 2, 30).unwrap();
        let p40 = euler_product_p(f5(), 2, 40).unwrap();
        assert!((p30.value_f64() - p40.value_f64()).abs() < 1e-12);
        assert!(p40.tail_bound_f64() < 1e-12);
        let s1a = euler_product_p(f5(), 1, 30).unwrap();
        let s1b = euler_product_p(f5(), 1, 40).unwrap();
        assert!((s1a.value_f64() - s1b.value_f64()).abs() <= s1a.tail_bound_f64());
        assert!(s1b.tail_bound_f64() < 1e-12);
        assert!(euler_product_p(f5(), 0, 3).is_err());
    }

    #[test]
    fn euler_product_brackets_are_consistent() {
        let mut prev: Option<TruncatedEulerProduct> = None;
        for c in 0..=12 {
            let cur = euler_product_p(f5(), 1, c).unwrap();
            if let Some(prev) = prev {
                assert!(cur.tail_bound_f64() < prev.tail_bound_f64());
                assert!(cur.value_f64() <= prev.value_f64());
                assert!(prev.value_f64() - cur.value_f64() <= prev.tail_bound_f64());
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn euler_product_matches_irreducible_enumeration() {
        // direct product over the enumerated irreducibles of degree <= 3
        let mut direct = 1.0f64;
        for n in 1..=3 {
            for pr in crate::poly::irreducibles(f5(), n).iter() {
                let norm = 5f64.powi(pr.deg().unwrap() as i32);
                direct *= 1.0 - 1.0 / ((norm + 1.0) * norm * norm);
            }
        }
        let agg = euler_product_p(f5(), 2, 3).unwrap();
        assert!((agg.value_f64() - direct).abs() < 1e-15);
    }

    #[test]
    fn main_term_shapes() {
        let sv = SpecialValues::new(f5(), 40).unwrap();
        for g in 0..8 {
            for variant in [FormulaVariant::ProofAssembled, FormulaVariant::TheoremLiteral] {
                let m = sv.theorem2_main_term(g, variant);
                assert!(m.secondary_1 < 0.0);
                assert_eq!(m.total, m.leading + m.secondary_1 + m.secondary_2);
                assert_eq!(m.leading, 5f64.powi(2 * g as i32 + 1) * sv.p2().value_f64());
            }
        }
        // secondary terms vanish relative to the leading one as g grows
        let m = sv.theorem2_main_term(30, FormulaVariant::ProofAssembled);
        assert!((m.total / m.leading - 1.0).abs() < 1e-9);
        // leading / #H -> zeta_A(2) P(2)
        let g = 6;
        let lead = sv.theorem2_main_term(g, FormulaVariant::ProofAssembled).leading;
        let size = 4.0 * 5f64.powi(2 * g as i32);
        assert!((lead / size - sv.corollary_average()).abs() < 1e-12);
        assert!((sv.corollary_average() - 1.25 * sv.p2().value_f64()).abs() < 1e-15);
        assert!((sv.average_class_number(3) - 125.0 * sv.corollary_average()).abs() < 1e-9);
    }

    #[test]
    fn prop2_examples() {
        let one = Poly::one(f5());
        for g in 0..4 {
            let expected = 4 * 5i64.pow(2 * g as u32);
            assert_eq!(prop2_main_term(g, &one).unwrap(), rat(expected, 1));
        }
        assert_eq!(prop2_main_term(1, &p("T")).unwrap(), rat(250, 3));
        // multiplicative over coprime moduli
        let a = prop2_main_term(2, &p("T")).unwrap();
        let b = prop2_main_term(2, &p("T+1")).unwrap();
        let ab = prop2_main_term(2, &p("T^2+T")).unwrap();
        let base = prop2_main_term(2, &one).unwrap();
        assert_eq!(ab * base, a * b);
        assert_eq!(prop2_main_term(1, &p("2*T")), Err(Error::ZeroModulus));
    }

    #[test]
    fn coprime_count_examples() {
        assert_eq!(count_coprime_exact(1, &p("T")).unwrap(), BigUint::from(4u32));
        assert_eq!(count_coprime_exact(3, &p("T^2+T")).unwrap(), BigUint::from(80u32));
        assert_eq!(count_coprime_brute(3, &p("T^2+T")).unwrap(), 80);
        assert_eq!(count_coprime_exact(2, &p("T^2+2")).unwrap(), BigUint::from(24u32));
        assert_eq!(count_coprime_exact(1, &p("T^2+T")), Err(Error::DegreeTooSmall { d: 1, deg_l: 2 }));
    }

    #[test]
    fn coprime_square_tail_is_small() {
        let l = p("T^2+T");
        for g in 0..6 {
            for lopt in [None, Some(&l)] {
                let tail = coprime_square_tail(f5(), g, lopt).unwrap();
                // |tail| <= sum_{n > g} q^{-n}
                let bound = rational_q_pow(5, -(g as i64) - 1) / rat(4, 5);
                assert!(within(&tail, &bound), "g={g}");
            }
        }
    }

    #[test]
    fn lemma_monitors_are_bounded() {
        let sv = SpecialValues::new(f5(), 40).unwrap();
        for g in 0..=12 {
            for m in lemma_monitors(&sv, g, Some(&p("T"))).unwrap() {
                assert!(m.within(10.0), "g={g} {m:?}");
            }
        }
    }

    #[test]
    fn unscaled_a1_tail_outgrows_q_to_the_g() {
        let sv = SpecialValues::new(f5(), 40).unwrap();
        let ratio = |g| {
            lemma_monitors(&sv, g, None)
                .unwrap()
                .into_iter()
                .find(|m| m.name == "mobius_tail_a1_unscaled")
                .unwrap()
                .ratio
        };
        assert!(ratio(13) > 10.0);
        assert!(ratio(13) > 2.0 * ratio(7));
    }
}

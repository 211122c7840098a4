use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{check_budget, ensemble_chunks, q_pow_int, visit_ensemble, work_units, ExperimentConfig, Mode};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lfunction::{class_number_from_half, EulerTable};
use crate::parallel::{map_ranges, map_slice};
use crate::poly::{ensemble_size, monic_at, monic_count, Poly};
use crate::special::{rational_to_f64, FormulaVariant, MainTermBreakdown, SpecialValues};

/// Ensemble sums for one genus, with the predictions they are compared to.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentRecord {
    pub q: u64,
    pub g: usize,
    pub ensemble_size: u128,
    /// Sum of L(1, chi_D); in sample mode, the scaled sample estimate.
    pub sum_l: BigRational,
    /// Sum of h_D, scaled the same way as `sum_l`.
    pub sum_h: BigRational,
    pub main_proof: MainTermBreakdown,
    pub main_literal: MainTermBreakdown,
    /// ensemble_size * zeta_A(2) P(2).
    pub corollary: f64,
    pub rel_err_leading: f64,
    pub err_over_2qg: f64,
    pub sample_size: Option<usize>,
    pub std_error: Option<f64>,
}

impl MomentRecord {
    /// sum_l / (ensemble_size zeta_A(2) P(2)).
    pub fn corollary_ratio(&self) -> f64 {
        1.0 + self.rel_err_leading
    }

    /// Whether sum_h q^{-g} = sum_l holds exactly.
    pub fn artin_consistent(&self) -> bool {
        &self.sum_h / BigRational::from_integer(q_pow_int(self.q, self.g)) == self.sum_l
    }

    fn row(&self) -> MomentRow {
        MomentRow {
            q: self.q,
            g: self.g,
            ensemble_size: self.ensemble_size.to_string(),
            sum_l_num: self.sum_l.numer().to_string(),
            sum_l_den: self.sum_l.denom().to_string(),
            sum_h: self.sum_h.to_string(),
            main_proof: self.main_proof.total,
            main_literal: self.main_literal.total,
            corollary: self.corollary,
            rel_err_leading: self.rel_err_leading,
            err_over_2qg: self.err_over_2qg,
        }
    }
}

#[derive(Serialize)]
struct MomentRow {
    q: u64,
    g: usize,
    ensemble_size: String,
    #[serde(rename = "sum_L_num")]
    sum_l_num: String,
    #[serde(rename = "sum_L_den")]
    sum_l_den: String,
    sum_h: String,
    main_proof: f64,
    main_literal: f64,
    corollary: f64,
    rel_err_leading: f64,
    err_over_2qg: f64,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    #[serde(flatten)]
    row: MomentRow,
    breakdown_proof: &'a MainTermBreakdown,
    breakdown_literal: &'a MainTermBreakdown,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    std_error: Option<f64>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    q: u64,
    mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    generator: Option<&'static str>,
    cutoff: usize,
    records: Vec<JsonRecord<'a>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub q: u64,
    pub mode: Mode,
    pub seed: Option<u64>,
    pub cutoff: usize,
    pub records: Vec<MomentRecord>,
}

impl MomentReport {
    pub fn record(&self, g: usize) -> Option<&MomentRecord> {
        self.records.iter().find(|r| r.g == g)
    }

    pub fn to_json(&self) -> String {
        let report = JsonReport {
            q: self.q,
            mode: self.mode,
            seed: self.seed,
            generator: self.seed.map(|_| "ChaCha8"),
            cutoff: self.cutoff,
            records: self
                .records
                .iter()
                .map(|r| JsonRecord {
                    row: r.row(),
                    breakdown_proof: &r.main_proof,
                    breakdown_literal: &r.main_literal,
                    sample_size: r.sample_size,
                    std_error: r.std_error,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&report).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.records {
            w.serialize(r.row()).expect("row serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }
}

/// h_D from the Euler product over irreducibles of degree <= g; `table`
/// stops at degree g.
fn class_number(d: &Poly, table: &EulerTable) -> Result<BigInt> {
    let g = table.max_degree();
    let half = table.coefficients(d.coeffs(), g + 1);
    let h = class_number_from_half(d.field().q(), g, &half);
    if h.is_positive() {
        Ok(h)
    } else {
        Err(Error::NonPositive(h.to_string()))
    }
}

fn full_sum(field: FieldSpec, g: usize, table: &EulerTable, cfg: &ExperimentConfig) -> Result<(BigInt, u128)> {
    let ranges = ensemble_chunks(field, g, cfg.options().schedule())?;
    let partials = map_ranges(cfg.options().schedule(), ranges, |range| -> Result<(BigInt, u128)> {
        let mut sum = BigInt::zero();
        let mut count = 0u128;
        let mut err = None;
        visit_ensemble(field, g, range, |_, d| match class_number(d, table) {
            Ok(h) => {
                sum += h;
                count += 1;
            }
            Err(e) => {
                err.get_or_insert(e);
            }
        });
        err.map_or(Ok((sum, count)), Err)
    });
    let mut sum = BigInt::zero();
    let mut count = 0;
    for p in partials {
        let (s, c) = p?;
        sum += s;
        count += c;
    }
    Ok((sum, count))
}

/// Uniform draws from monic degree-(2g+1) polynomials, rejecting the
/// non-square-free ones.
fn draw_sample(field: FieldSpec, g: usize, size: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let total = monic_count(field, 2 * g + 1).expect("sample space fits in u64");
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        let d = monic_at(field, 2 * g + 1, rng.gen_range(0..total));
        if d.is_squarefree().expect("monic is nonzero") {
            out.push(d);
        }
    }
    out
}

pub fn run_mean_value(cfg: &ExperimentConfig) -> Result<MomentReport> {
    let field = cfg.validate()?;
    let q = field.q();
    let sv = SpecialValues::new(field, cfg.cutoff)?;
    let mut rng = cfg.seed.map(ChaCha8Rng::seed_from_u64);
    let mut records = Vec::new();
    for g in cfg.g_min..=cfg.g_max {
        let size = ensemble_size(field, g);
        let table = EulerTable::new(field, g);
        let q_g = q_pow_int(q, g);
        let (sum_h, sample_size, std_error) = match cfg.mode {
            Mode::Full => {
                check_budget(work_units(size, g), cfg.budget)?;
                let (sum, count) = full_sum(field, g, &table, cfg)?;
                debug_assert_eq!(count, size);
                (BigRational::from_integer(sum), None, None)
            }
            Mode::Sample => {
                let n = cfg.sample_size.expect("validated");
                check_budget(work_units(n as u128, g), cfg.budget)?;
                let draws = draw_sample(field, g, n, rng.as_mut().expect("validated"));
                let hs = map_slice(cfg.options().schedule(), &draws, |d| class_number(d, &table))
                    .into_iter()
                    .collect::<Result<Vec<_>>>()?;
                let total: BigInt = hs.iter().sum();
                let scale = BigRational::new(BigInt::from(size), BigInt::from(n));
                let ls: Vec<f64> =
                    hs.iter().map(|h| rational_to_f64(&BigRational::new(h.clone(), q_g.clone()))).collect();
                let mean = ls.iter().sum::<f64>() / n as f64;
                let var = if n > 1 { ls.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64 } else { 0.0 };
                let se = size as f64 * (var / n as f64).sqrt();
                (BigRational::from_integer(total) * scale, Some(n), Some(se))
            }
        };
        let sum_l = &sum_h / BigRational::from_integer(q_g);
        let sum_l_f = rational_to_f64(&sum_l);
        let main_proof = sv.theorem2_main_term(g, FormulaVariant::ProofAssembled);
        let main_literal = sv.theorem2_main_term(g, FormulaVariant::TheoremLiteral);
        let corollary = size as f64 * sv.corollary_average();
        records.push(MomentRecord {
            q,
            g,
            ensemble_size: size,
            sum_l,
            sum_h,
            main_proof,
            main_literal,
            corollary,
            rel_err_leading: sum_l_f / corollary - 1.0,
            err_over_2qg: (sum_l_f - main_proof.total) / (2.0 * q as f64).powi(g as i32),
            sample_size,
            std_error,
        });
    }
    Ok(MomentReport { q, mode: cfg.mode, seed: cfg.seed, cutoff: cfg.cutoff, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lfunction::{l_coefficients_direct, l_value_at_one};
    use crate::poly::enumerate_ensemble;

    #[test]
    fn full_mode_small_genus() {
        let mut cfg = ExperimentConfig::full(5, 0, 2);
        cfg.cutoff = 30;
        let report = run_mean_value(&cfg).unwrap();
        assert_eq!(report.records.len(), 3);
        let field = FieldSpec::new(5).unwrap();
        for r in &report.records {
            assert!(r.artin_consistent());
            assert!(r.sum_h.is_integer());
            // oracle: direct character sums, L(1) summed exactly
            let direct: BigRational = enumerate_ensemble(field, r.g)
                .unwrap()
                .map(|d| l_value_at_one(&l_coefficients_direct(&d).unwrap()))
                .sum();
            assert_eq!(direct, r.sum_l, "g={}", r.g);
        }
        assert_eq!(report.record(1).unwrap().ensemble_size, 100);
        // every genus-0 curve has class number 1
        assert_eq!(report.record(0).unwrap().sum_h, BigRational::from_integer(5.into()));
    }

    #[test]
    fn csv_has_the_documented_columns() {
        let report = run_mean_value(&ExperimentConfig::full(5, 1, 1)).unwrap();
        let csv = report.to_csv();
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "q,g,ensemble_size,sum_L_num,sum_L_den,sum_h,main_proof,main_literal,corollary,rel_err_leading,err_over_2qg"
        );
        assert_eq!(csv.lines().count(), 2);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["records"][0]["ensemble_size"], "100");
        assert_eq!(json["records"][0]["sum_h"], report.records[0].sum_h.to_string());
    }

    #[test]
    fn sample_mode_is_seeded() {
        let cfg = ExperimentConfig::sample(5, 1, 2, 200, 42);
        let a = run_mean_value(&cfg).unwrap();
        let b = run_mean_value(&ExperimentConfig { workers: 3, ..cfg.clone() }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let c = run_mean_value(&ExperimentConfig::sample(5, 1, 2, 200, 43)).unwrap();
        assert_ne!(a.to_json(), c.to_json());
        let full = run_mean_value(&ExperimentConfig::full(5, 2, 2)).unwrap();
        let est = a.record(2).unwrap();
        let exact = rational_to_f64(&full.records[0].sum_l);
        assert!((rational_to_f64(&est.sum_l) - exact).abs() < 5.0 * est.std_error.unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let mut cfg = ExperimentConfig::full(5, 2, 2);
        cfg.budget = 1000;
        assert!(matches!(run_mean_value(&cfg), Err(crate::Error::BudgetExceeded { work: 12500, budget: 1000 })));
    }
}

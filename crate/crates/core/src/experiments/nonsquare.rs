use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{check_budget, ensemble_chunks, q_pow_int, visit_ensemble, work_units, RunOptions};
use crate::character::jacobi_raw;
use crate::error::Result;
use crate::field::FieldSpec;
use crate::parallel::map_ranges;
use crate::poly::{ensemble_size, monic_count, visit_monic};
use crate::special::rational_to_f64;

/// Split of the short character sums over the ensemble into square and
/// non-square f, with the non-square parts measured against (2q)^g.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonsquareReport {
    pub q: u64,
    pub g: usize,
    pub ensemble_size: String,
    /// sum_D sum_{n<=g} q^{-n} sum_{deg f = n, f non-square} chi_D(f)
    pub nonsquare_weighted: String,
    /// q^{-g} sum_D sum_{m<g} sum_{deg f = m, f non-square} chi_D(f)
    pub nonsquare_tail: String,
    pub square_weighted: String,
    pub square_tail: String,
    pub ratio_weighted: f64,
    pub ratio_tail: f64,
    /// The four pieces added back together: the ensemble sum of L(1, chi_D).
    pub sum_l: String,
}

impl NonsquareReport {
    pub fn within(&self, threshold: f64) -> bool {
        self.ratio_weighted.abs() <= threshold && self.ratio_tail.abs() <= threshold
    }
}

/// Totals over the ensemble of the degree-n character sums, split by
/// whether f is a square.
#[derive(Clone, Debug)]
struct Totals {
    all: Vec<i128>,
    squares: Vec<i128>,
}

impl Totals {
    fn new(g: usize) -> Self {
        Totals { all: vec![0; g + 1], squares: vec![0; g + 1] }
    }

    fn merge(&mut self, other: &Totals) {
        for (a, b) in self.all.iter_mut().zip(&other.all) {
            *a += b;
        }
        for (a, b) in self.squares.iter_mut().zip(&other.squares) {
            *a += b;
        }
    }
}

pub fn run_nonsquare_monitor(q: u64, g: usize, opts: &RunOptions) -> Result<NonsquareReport> {
    let field = FieldSpec::new(q)?;
    field.require_ensemble()?;
    let size = ensemble_size(field, g);
    check_budget(work_units(size, g), opts.budget)?;
    let schedule = opts.schedule();
    let partials = map_ranges(schedule, ensemble_chunks(field, g, schedule)?, |range| {
        let mut t = Totals::new(g);
        visit_ensemble(field, g, range, |_, d| {
            let d = d.coeffs();
            for n in 0..=g {
                let count = monic_count(field, n).expect("small degree");
                visit_monic(field, n, 0..count, |f| t.all[n] += jacobi_raw(field, d, f) as i128);
                if n % 2 == 0 {
                    // chi_D(l^2) is 1 when (l, D) = 1 and 0 otherwise
                    let half = n / 2;
                    let count = monic_count(field, half).expect("small degree");
                    visit_monic(field, half, 0..count, |l| t.squares[n] += jacobi_raw(field, d, l).abs() as i128);
                }
            }
        });
        t
    });
    let mut totals = Totals::new(g);
    for p in &partials {
        totals.merge(p);
    }

    let rat = |n: i128, k: usize| BigRational::new(BigInt::from(n), q_pow_int(q, k));
    let mut non_w = BigRational::zero();
    let mut sq_w = BigRational::zero();
    for n in 0..=g {
        non_w += rat(totals.all[n] - totals.squares[n], n);
        sq_w += rat(totals.squares[n], n);
    }
    let non_t: i128 = (0..g).map(|m| totals.all[m] - totals.squares[m]).sum();
    let sq_t: i128 = (0..g).map(|m| totals.squares[m]).sum();
    let (non_t, sq_t) = (rat(non_t, g), rat(sq_t, g));
    let envelope = (2.0 * q as f64).powi(g as i32);
    let sum_l = &non_w + &sq_w + &non_t + &sq_t;
    Ok(NonsquareReport {
        q,
        g,
        ensemble_size: size.to_string(),
        ratio_weighted: rational_to_f64(&non_w) / envelope,
        ratio_tail: rational_to_f64(&non_t) / envelope,
        nonsquare_weighted: non_w.to_string(),
        nonsquare_tail: non_t.to_string(),
        square_weighted: sq_w.to_string(),
        square_tail: sq_t.to_string(),
        sum_l: sum_l.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{run_mean_value, ExperimentConfig};

    #[test]
    fn pieces_reassemble_the_mean_value() {
        for g in 1..=2 {
            let r = run_nonsquare_monitor(5, g, &RunOptions::default()).unwrap();
            let mean = run_mean_value(&ExperimentConfig::full(5, g, g)).unwrap();
            assert_eq!(r.sum_l, mean.records[0].sum_l.to_string());
            assert!(r.within(10.0), "{r:?}");
            let sq: BigRational = r.square_weighted.parse().unwrap();
            assert!(sq > BigRational::zero());
        }
    }

    #[test]
    fn genus_one_square_terms_by_hand() {
        // n = 0 contributes #H = 100; no squares of degree 1
        let r = run_nonsquare_monitor(5, 1, &RunOptions::default()).unwrap();
        assert_eq!(r.square_weighted, "100");
        assert_eq!(r.square_tail, "20");
        assert_eq!(r.nonsquare_tail, "0");
    }
}

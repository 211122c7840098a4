use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::{check_budget, ensemble_chunks, visit_ensemble, work_units, RunOptions};
use crate::character::jacobi_raw;
use crate::error::{Error, Result};
use crate::parallel::map_ranges;
use crate::poly::{ensemble_size, euler_phi, Poly};
use crate::special::{prop2_main_term, rational_to_f64};

/// Count of discriminants coprime to `l` against the closed-form main term.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub q: u64,
    pub g: usize,
    pub l: String,
    pub count: String,
    pub main_term: String,
    pub error: String,
    /// sqrt|D| Phi(l)/|l|
    pub envelope: f64,
    pub ratio: f64,
}

impl Prop2Report {
    pub fn error_is_zero(&self) -> bool {
        self.error == "0"
    }
}

pub fn run_prop2_check(g: usize, l: &Poly, opts: &RunOptions) -> Result<Prop2Report> {
    if !l.is_monic() {
        return Err(Error::ZeroModulus);
    }
    let field = l.field();
    field.require_ensemble()?;
    check_budget(work_units(ensemble_size(field, g), g), opts.budget)?;
    let schedule = opts.schedule();
    let lc = l.coeffs();
    let partials = map_ranges(schedule, ensemble_chunks(field, g, schedule)?, |range| {
        let mut n = 0u64;
        // (l / D) vanishes exactly when gcd(l, D) != 1
        visit_ensemble(field, g, range, |_, d| n += (jacobi_raw(field, lc, d.coeffs()) != 0) as u64);
        n
    });
    let count: u64 = partials.iter().sum();
    let main = prop2_main_term(g, l)?;
    let error = BigRational::from_integer(BigInt::from(count)) - &main;
    let q = field.q() as f64;
    let phi_ratio =
        if l.is_one() { 1.0 } else { rational_to_f64(&BigRational::new(euler_phi(l)?.into(), l.norm().into())) };
    let envelope = q.powf(g as f64 + 0.5) * phi_ratio;
    Ok(Prop2Report {
        q: field.q(),
        g,
        l: l.to_string(),
        count: count.to_string(),
        main_term: main.to_string(),
        ratio: rational_to_f64(&error).abs() / envelope,
        error: if error.is_zero() { "0".into() } else { error.to_string() },
        envelope,
    })
}

//! Ensemble drivers: exhaustive or sampled sweeps over H_{2g+1,q} with
//! exact reductions, and the reports they produce.

mod config;
mod mean;
mod nonsquare;
mod prop2;
mod verify;

use std::ops::Range;

pub use config::{ExperimentConfig, Mode, RunOptions, DEFAULT_BUDGET, DEFAULT_CUTOFF};
pub use mean::{run_mean_value, MomentRecord, MomentReport};
pub use nonsquare::{run_nonsquare_monitor, NonsquareReport};
pub use prop2::{run_prop2_check, Prop2Report};
pub use verify::{run_verify_suite, InvariantResult, VerifyOptions, VerifyReport, INVARIANTS};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::parallel::{chunk_ranges, default_chunk, Schedule};
use crate::poly::{monic_count, Poly};

/// Work units for a sweep: discriminants times L-coefficients per discriminant.
pub fn work_units(count: u128, g: usize) -> u128 {
    count * (2 * g as u128 + 1)
}

pub(crate) fn check_budget(work: u128, budget: u128) -> Result<()> {
    if work > budget {
        Err(Error::BudgetExceeded { work, budget })
    } else {
        Ok(())
    }
}

/// Index ranges over the monic polynomials of degree 2g+1.
pub(crate) fn ensemble_chunks(field: FieldSpec, g: usize, schedule: Schedule) -> Result<Vec<Range<u64>>> {
    let total = monic_count(field, 2 * g + 1)
        .ok_or_else(|| Error::Unsupported(format!("genus {g} over {field} overflows the enumeration")))?;
    Ok(chunk_ranges(total, default_chunk(total, schedule)))
}

/// Calls `visit` on every square-free monic polynomial in the index range.
pub(crate) fn visit_ensemble(field: FieldSpec, g: usize, range: Range<u64>, mut visit: impl FnMut(u64, &Poly)) {
    let start = range.start;
    for (i, d) in crate::poly::MonicRange::new(field, 2 * g + 1, range).enumerate() {
        if d.is_squarefree().expect("monic is nonzero") {
            visit(start + i as u64, &d);
        }
    }
}

pub(crate) fn q_pow_int(q: u64, k: usize) -> num_bigint::BigInt {
    num_bigint::BigInt::from(crate::poly::big_q_pow(q, k))
}

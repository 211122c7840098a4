use num_bigint::BigInt;
use serde::Serialize;

use super::{check_budget, ensemble_chunks, visit_ensemble, work_units, RunOptions};
use crate::character::{jacobi_raw, weil_report};
use crate::error::Result;
use crate::field::FieldSpec;
use crate::lfunction::{
    approx_fe_from_sums, class_number_of, l_coefficients_with_table, l_value_at_one, verify_functional_equation,
    EulerTable,
};
use crate::parallel::map_ranges;
use crate::poly::{ensemble_size, monic_at, monic_count, visit_monic, Poly};

pub const INVARIANTS: [&str; 7] = [
    "functional_equation",
    "approx_functional_equation",
    "class_number",
    "point_count_a1",
    "weil_bound",
    "char_sum_vanishing",
    "direct_vs_euler",
];

const FE: usize = 0;
const APPROX: usize = 1;
const CLASS: usize = 2;
const POINTS: usize = 3;
const WEIL: usize = 4;
const VANISH: usize = 5;
const DIRECT: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub run: RunOptions,
    /// Perturb a_{2g} of the first discriminant of each genus.
    pub inject_fault: bool,
    /// Roughly how many discriminants per genus, spread evenly through the
    /// enumeration, get the full direct character-sum comparison when that
    /// is too costly for the whole ensemble.
    pub spot_checks: u64,
    /// Full direct sums for every discriminant while q^{2g} stays below this.
    pub direct_limit: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { run: RunOptions::default(), inject_fault: false, spot_checks: 100, direct_limit: 1000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantResult {
    pub g: usize,
    pub name: &'static str,
    pub checked: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl InvariantResult {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked > 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub q: u64,
    pub g_max: usize,
    pub discriminants: u64,
    pub per_genus: Vec<(usize, u64)>,
    pub invariants: Vec<InvariantResult>,
    pub passed: bool,
}

impl VerifyReport {
    /// Results for one invariant, one entry per genus.
    pub fn results(&self, name: &str) -> impl Iterator<Item = &InvariantResult> + '_ {
        let name = name.to_owned();
        self.invariants.iter().filter(move |r| r.name == name)
    }

    pub fn invariant_passed(&self, name: &str, genera: impl Fn(usize) -> bool) -> bool {
        let mut any = false;
        for r in self.results(name).filter(|r| genera(r.g)) {
            any = true;
            if !r.passed() {
                return false;
            }
        }
        any
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Clone, Debug, Default)]
struct Tally {
    checked: u64,
    failed: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(detail());
            }
        }
    }

    /// Appends a later chunk; the earliest counterexample wins.
    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }
}

fn char_sums(field: FieldSpec, d: &[u32], upto: usize) -> Vec<i64> {
    (0..=upto)
        .map(|n| {
            let mut s = 0i64;
            visit_monic(field, n, 0..monic_count(field, n).expect("small degree"), |f| {
                s += jacobi_raw(field, d, f) as i64
            });
            s
        })
        .collect()
}

struct Genus<'a> {
    field: FieldSpec,
    g: usize,
    table: &'a EulerTable,
    opts: &'a VerifyOptions,
    full_direct: bool,
    stride: u64,
    first: Option<u64>,
}

impl Genus<'_> {
    /// `index` is the position of `d` in the monic enumeration.
    fn check(&self, index: u64, d: &Poly, t: &mut [Tally]) -> Result<()> {
        let (field, g, q) = (self.field, self.g, self.field.q());
        let mut l = l_coefficients_with_table(d, self.table)?;
        if self.opts.inject_fault && Some(index) == self.first {
            let top = l.coeffs()[2 * g].clone();
            l.set_coeff(2 * g, top + 1);
        }
        let a = l.coeffs().to_vec();
        let show = |what: &str| format!("D={d} a={a:?} {what}");

        t[FE].record(verify_functional_equation(&l), || show("violates a_(2g-n) = q^(g-n) a_n"));

        let spot = index.is_multiple_of(self.stride);
        let direct_len = if self.full_direct || spot { 2 * g + 1 } else { g };
        let s = char_sums(field, d.coeffs(), direct_len);

        let approx = approx_fe_from_sums(q, g, &s[..=g]);
        let value = l_value_at_one(&l);
        t[APPROX].record(approx == value, || show(&format!("approx {approx} != L(1) {value}")));

        let h = class_number_of(&l);
        t[CLASS].record(h.is_ok(), || show(&h.as_ref().err().map(|e| e.to_string()).unwrap_or_default()));

        if g >= 1 {
            let n1: i64 = field.elements().map(|x| d.eval(x).residue_symbol().expect("odd q") as i64).sum();
            t[POINTS].record(a[1] == BigInt::from(n1), || show(&format!("point-count sum {n1}")));
        }

        for n in 0..=2 * g {
            let value = if n < s.len() { s[n] } else { i64::try_from(&a[n]).unwrap_or(i64::MAX) };
            let w = weil_report(q, 2 * g + 1, n, value);
            t[WEIL].record(w.ok, || show(&format!("|S_{n}| = {} > {}", value.abs(), w.bound)));
        }

        for n in 0..s.len().min(2 * g + 1) {
            t[DIRECT].record(a[n] == BigInt::from(s[n]), || show(&format!("direct S_{n} = {}", s[n])));
        }
        if s.len() > 2 * g + 1 {
            t[VANISH].record(s[2 * g + 1] == 0, || show(&format!("S_{} = {}", 2 * g + 1, s[2 * g + 1])));
        }
        Ok(())
    }
}

/// Runs every per-discriminant invariant over H_{2g+1,q} for 1 <= g <= g_max.
pub fn run_verify_suite(q: u64, g_max: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    let field = FieldSpec::new(q)?;
    field.require_ensemble()?;
    let work: u128 = (1..=g_max).map(|g| work_units(ensemble_size(field, g), g)).sum();
    check_budget(work, opts.run.budget)?;
    let schedule = opts.run.schedule();
    let mut invariants = Vec::new();
    let mut per_genus = Vec::new();
    for g in 1..=g_max {
        let table = EulerTable::for_genus(field, g);
        let total = monic_count(field, 2 * g + 1).expect("budget bounds the degree");
        let full_direct = monic_count(field, 2 * g).is_some_and(|n| n <= opts.direct_limit);
        let stride = (total / opts.spot_checks.max(1)).max(1);
        let first = (0..total).find(|&i| monic_at(field, 2 * g + 1, i).is_squarefree().expect("monic"));
        let ctx = Genus { field, g, table: &table, opts, full_direct, stride, first };
        let partials =
            map_ranges(schedule, ensemble_chunks(field, g, schedule)?, |range| -> Result<(u64, Vec<Tally>)> {
                let mut t = vec![Tally::default(); INVARIANTS.len()];
                let mut seen = 0u64;
                let mut err = None;
                visit_ensemble(field, g, range, |index, d| {
                    seen += 1;
                    if err.is_none() {
                        if let Err(e) = ctx.check(index, d, &mut t) {
                            err = Some(e);
                        }
                    }
                });
                err.map_or(Ok((seen, t)), Err)
            });
        let mut totals = vec![Tally::default(); INVARIANTS.len()];
        let mut seen = 0;
        for p in partials {
            let (n, t) = p?;
            seen += n;
            for (acc, part) in totals.iter_mut().zip(t) {
                acc.merge(part);
            }
        }
        per_genus.push((g, seen));
        for (i, tally) in totals.into_iter().enumerate() {
            invariants.push(InvariantResult {
                g,
                name: INVARIANTS[i],
                checked: tally.checked,
                failed: tally.failed,
                counterexample: tally.counterexample,
            });
        }
    }
    let discriminants = per_genus.iter().map(|(_, n)| n).sum();
    let passed = invariants.iter().all(|r| r.failed == 0);
    Ok(VerifyReport { q, g_max, discriminants, per_genus, invariants, passed })
}

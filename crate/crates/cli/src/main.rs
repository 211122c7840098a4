use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use quadl::character::{char_sum, check_weil_bound, symbol, QuadChar};
use quadl::experiments::{
    run_mean_value, run_nonsquare_monitor, run_prop2_check, run_verify_suite, ExperimentConfig, InvariantResult, Mode,
    RunOptions, VerifyOptions, DEFAULT_BUDGET, DEFAULT_CUTOFF,
};
use quadl::field::FieldSpec;
use quadl::lfunction::{l_coefficients_direct, l_coefficients_euler, l_coefficients_from_points};
use quadl::poly::Poly;
use quadl::special::euler_product_p;
use quadl::Error;

#[derive(Parser)]
#[command(name = "quadl", version, about = "Quadratic L-functions over F_q[T]")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Full,
    Sample,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    Euler,
    Direct,
    Points,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Sweep {
    #[arg(long, default_value_t = 5)]
    q: u64,
    /// Worker threads; 0 uses every core, 1 runs sequentially.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Work-unit ceiling: discriminants times (2g+1).
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u128,
}

impl Sweep {
    fn options(&self) -> RunOptions {
        RunOptions { workers: self.workers, budget: self.budget }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ensemble sums of L(1, chi_D) and h_D against the predicted main terms.
    Mean {
        #[command(flatten)]
        sweep: Sweep,
        /// Single genus; overrides --g-min/--g-max.
        #[arg(long)]
        g: Option<usize>,
        #[arg(long, default_value_t = 1)]
        g_min: usize,
        #[arg(long, default_value_t = 3)]
        g_max: usize,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        #[arg(long)]
        sample_size: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Square and non-square parts of the short character sums.
    Nonsquare {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        g: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Count of discriminants coprime to l against the closed form.
    Prop2 {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long)]
        g: usize,
        /// Modulus, e.g. "T^2+T" or "0,1,1".
        #[arg(long, default_value = "T")]
        l: String,
        #[command(flatten)]
        output: Output,
    },
    /// Every per-discriminant invariant over the ensembles of genus 1..=g.
    Verify {
        #[command(flatten)]
        sweep: Sweep,
        #[arg(long = "g-max", alias = "g", default_value_t = 2)]
        g_max: usize,
        /// Corrupt one coefficient to exercise the failure path.
        #[arg(long)]
        inject_fault: bool,
        #[command(flatten)]
        output: Output,
    },
    /// L-polynomial, L(1) and class number of one discriminant.
    Lpoly {
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, short = 'd')]
        d: String,
        #[arg(long, value_enum, default_value = "euler")]
        route: Route,
        #[command(flatten)]
        output: Output,
    },
    /// Quadratic residue symbol (D/f) for monic f.
    Symbol {
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, short = 'd')]
        d: String,
        #[arg(long, short = 'f')]
        f: String,
    },
    /// Sum of chi_D over monic polynomials of degree n, with the Weil bound.
    Charsum {
        #[arg(long, default_value_t = 5)]
        q: u64,
        #[arg(long, short = 'd')]
        d: String,
        #[arg(long, short = 'n')]
        n: usize,
    },
    /// Euler product P(s) with its truncation bound.
    Special {
        #[arg(long, default_value_t = 5)]
        q: u64,
        /// P1 or P2 (any P<s> with s >= 1).
        #[arg(long, default_value = "P2")]
        what: String,
        #[arg(long, default_value_t = DEFAULT_CUTOFF)]
        cutoff: usize,
    },
}

enum Failure {
    Invariant(String),
    Config(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonIntegralClassNumber(_) | Error::NonPositive(_) => Failure::Invariant(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

fn emit(output: &Output, text: &str) -> CliResult {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|e| Failure::Config(e.to_string()))
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn csv_rows<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("flat record");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn verify_csv(rows: &[InvariantResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["g", "name", "checked", "failed", "counterexample"]).expect("in-memory writer");
    for r in rows {
        let (g, checked, failed) = (r.g.to_string(), r.checked.to_string(), r.failed.to_string());
        w.write_record([g.as_str(), r.name, &checked, &failed, r.counterexample.as_deref().unwrap_or("")])
            .expect("in-memory writer");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

fn render<T: Serialize>(output: &Output, value: &T) -> CliResult {
    match output.format {
        Format::Json => emit(output, &json(value)),
        Format::Csv => emit(output, &csv_rows(std::slice::from_ref(value))),
    }
}

fn field(q: u64) -> Result<FieldSpec, Failure> {
    Ok(FieldSpec::new(q)?)
}

fn poly(q: u64, s: &str) -> Result<Poly, Failure> {
    Ok(Poly::parse(field(q)?, s)?)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Mean { sweep, g, g_min, g_max, mode, sample_size, seed, cutoff, output } => {
            let (g_min, g_max) = g.map_or((g_min, g_max), |g| (g, g));
            let cfg = ExperimentConfig {
                q: sweep.q,
                g_min,
                g_max,
                mode: match mode {
                    ModeArg::Full => Mode::Full,
                    ModeArg::Sample => Mode::Sample,
                },
                sample_size,
                seed,
                cutoff,
                workers: sweep.workers,
                budget: sweep.budget,
                out_path: output.out.clone(),
            };
            let report = run_mean_value(&cfg)?;
            let text = match output.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            emit(&output, &text)?;
            if let Some(r) = report.records.iter().find(|r| !r.artin_consistent()) {
                return Err(Failure::Invariant(format!("sum_h q^-g != sum_L at g = {}", r.g)));
            }
            Ok(())
        }
        Command::Nonsquare { sweep, g, output } => {
            let report = run_nonsquare_monitor(sweep.q, g, &sweep.options())?;
            render(&output, &report)
        }
        Command::Prop2 { sweep, g, l, output } => {
            let l = poly(sweep.q, &l)?;
            let report = run_prop2_check(g, &l, &sweep.options())?;
            render(&output, &report)
        }
        Command::Verify { sweep, g_max, inject_fault, output } => {
            let opts = VerifyOptions { run: sweep.options(), inject_fault, ..VerifyOptions::default() };
            let report = run_verify_suite(sweep.q, g_max, &opts)?;
            match output.format {
                Format::Json => emit(&output, &json(&report))?,
                Format::Csv => emit(&output, &verify_csv(&report.invariants))?,
            }
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<String> = report
                    .invariants
                    .iter()
                    .filter(|r| r.failed > 0)
                    .map(|r| format!("{} (g={})", r.name, r.g))
                    .collect();
                Err(Failure::Invariant(format!("failed: {}", failed.join(", "))))
            }
        }
        Command::Lpoly { q, d, route, output } => {
            if output.format == Format::Csv {
                return Err(Failure::Config("lpoly output is JSON only".into()));
            }
            let d = poly(q, &d)?;
            let l = match route {
                Route::Euler => l_coefficients_euler(&d)?,
                Route::Direct => l_coefficients_direct(&d)?,
                Route::Points => l_coefficients_from_points(&d)?,
            };
            emit(&output, &json(&l.record()?))
        }
        Command::Symbol { q, d, f } => {
            let value = symbol(&poly(q, &d)?, &poly(q, &f)?)?;
            println!("{}", json(&serde_json::json!({ "D": d, "f": f, "symbol": value })).trim_end());
            Ok(())
        }
        Command::Charsum { q, d, n } => {
            let chi = QuadChar::new(poly(q, &d)?)?;
            let sum = char_sum(&chi, n);
            let mut out = serde_json::json!({ "D": d, "n": n, "sum": sum });
            if let Ok(w) = check_weil_bound(&chi, n) {
                out["weil_bound"] = w.bound.into();
                out["within_bound"] = w.ok.into();
            }
            println!("{}", json(&out).trim_end());
            Ok(())
        }
        Command::Special { q, what, cutoff } => {
            let s: u32 = what
                .strip_prefix(['P', 'p'])
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Failure::Config(format!("unknown quantity {what:?}; expected P1 or P2")))?;
            let p = euler_product_p(field(q)?, s, cutoff)?;
            println!("{}", json(&p.record()).trim_end());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

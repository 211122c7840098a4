use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::parallel::Schedule;

pub const DEFAULT_BUDGET: u128 = 10_000_000;
pub const DEFAULT_CUTOFF: usize = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Full,
    Sample,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "sample" => Ok(Mode::Sample),
            other => Err(Error::BadConfig(format!("unknown mode {other:?}"))),
        }
    }
}

/// Settings shared by every ensemble sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub workers: usize,
    pub budget: u128,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { workers: 0, budget: DEFAULT_BUDGET }
    }
}

impl RunOptions {
    pub fn schedule(&self) -> Schedule {
        Schedule::from_workers(self.workers)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub q: u64,
    pub g_min: usize,
    pub g_max: usize,
    pub mode: Mode,
    pub sample_size: Option<usize>,
    pub seed: Option<u64>,
    pub cutoff: usize,
    pub workers: usize,
    pub budget: u128,
    pub out_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn full(q: u64, g_min: usize, g_max: usize) -> Self {
        ExperimentConfig {
            q,
            g_min,
            g_max,
            mode: Mode::Full,
            sample_size: None,
            seed: None,
            cutoff: DEFAULT_CUTOFF,
            workers: 0,
            budget: DEFAULT_BUDGET,
            out_path: None,
        }
    }

    pub fn sample(q: u64, g_min: usize, g_max: usize, sample_size: usize, seed: u64) -> Self {
        ExperimentConfig {
            mode: Mode::Sample,
            sample_size: Some(sample_size),
            seed: Some(seed),
            ..Self::full(q, g_min, g_max)
        }
    }

    pub fn options(&self) -> RunOptions {
        RunOptions { workers: self.workers, budget: self.budget }
    }

    /// Checks the config and returns the coefficient field.
    pub fn validate(&self) -> Result<FieldSpec> {
        let field = FieldSpec::new(self.q)?;
        field.require_ensemble()?;
        if self.g_min > self.g_max {
            return Err(Error::BadConfig(format!("g_min {} exceeds g_max {}", self.g_min, self.g_max)));
        }
        if self.mode == Mode::Sample {
            match (self.sample_size, self.seed) {
                (Some(n), Some(_)) if n > 0 => {}
                (Some(0), _) => return Err(Error::BadConfig("sample size must be positive".into())),
                _ => return Err(Error::BadConfig("sample mode needs both a seed and a sample size".into())),
            }
        }
        Ok(field)
    }
}

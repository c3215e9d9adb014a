//! Reproducible Monte Carlo runs of the contagion process.
//!
//! Trial `k` draws from its own stream `(seed, k)` so its trajectory does
//! not depend on how trials are scheduled. Trials are grouped into
//! fixed-size blocks that run in parallel; block results are merged in
//! block order, so floating-point sums are bit-identical for any thread
//! count.

mod diagnostics;
mod output;
mod runner;
mod stats;

pub use diagnostics::{
    histogram, ks_fit, martingale_residual, stationarity_diagnostic, total_variation,
    Histogram, StationarityReport,
};
pub use output::{write_histogram_csv, write_trajectory_csv, HeaderInfo};
pub use runner::{estimate_infection_rate, run_trials, RateEstimate, BLOCK_SIZE};
pub use stats::{TrendEstimate, TrialStatistics};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::contagion::{ContagionError, DeltaSchedule, MemoryMode, UrnInit};
use crate::exact::ExactError;
use crate::graph::Network;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonteCarloError {
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error(transparent)]
    Contagion(#[from] ContagionError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Optional statistics beyond the always-collected per-step counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Collect {
    /// Count every full assignment (needs `N·n ≤ 24`).
    pub assignments: bool,
    /// Per-trial least-squares slope of the infected fraction over
    /// steps `start..=end`.
    pub trend: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub network: Network,
    pub init: UrnInit<f64>,
    pub schedule: DeltaSchedule<f64>,
    pub memory: MemoryMode,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub collect: Collect,
}

impl RunConfig {
    pub fn new(
        network: Network,
        init: UrnInit<f64>,
        schedule: DeltaSchedule<f64>,
        horizon: usize,
        trials: usize,
        seed: u64,
    ) -> Self {
        RunConfig {
            network,
            init,
            schedule,
            memory: MemoryMode::Infinite,
            horizon,
            trials,
            seed,
            collect: Collect::default(),
        }
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        if self.trials == 0 || self.horizon == 0 {
            return Err(MonteCarloError::InvalidConfig("trials and horizon must be ≥ 1".into()));
        }
        self.init.check_network(&self.network)?;
        self.schedule.validate(self.network.node_count())?;
        if self.collect.assignments && self.network.node_count() * self.horizon > 24 {
            return Err(MonteCarloError::InvalidConfig(
                "assignment counting needs N·n ≤ 24".into(),
            ));
        }
        if let Some((a, b)) = self.collect.trend {
            if a == 0 || b <= a || b > self.horizon {
                return Err(MonteCarloError::InvalidConfig(format!(
                    "trend window {a}..={b} must satisfy 1 ≤ start < end ≤ horizon"
                )));
            }
        }
        Ok(())
    }

    /// Canonical text form of everything that affects the output.
    pub fn canonical(&self) -> String {
        let join = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let rows = |t: &[Vec<f64>]| t.iter().map(|r| join(r)).collect::<Vec<_>>().join(";");
        let edges = self
            .network
            .edges()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect::<Vec<_>>()
            .join(",");
        let schedule = match &self.schedule {
            DeltaSchedule::Constant { red, black } => format!("constant:{red}:{black}"),
            DeltaSchedule::PerNode { red, black } => format!("per_node:{}:{}", join(red), join(black)),
            DeltaSchedule::Tabulated { red, black } => format!("tabulated:{}:{}", rows(red), rows(black)),
            DeltaSchedule::Curing { red, multiplier } => format!("curing:{red}:{multiplier}"),
        };
        let memory = match self.memory {
            MemoryMode::Infinite => "infinite".to_string(),
            MemoryMode::Finite(m) => format!("finite:{m}"),
        };
        format!(
            "nodes={}|edges={edges}|red={}|black={}|schedule={schedule}|memory={memory}|horizon={}|trials={}|seed={}|assignments={}|trend={:?}",
            self.network.node_count(),
            join(self.init.red()),
            join(self.init.black()),
            self.horizon,
            self.trials,
            self.seed,
            self.collect.assignments,
            self.collect.trend,
        )
    }

    /// SHA-256 of [`canonical`](Self::canonical), hex encoded.
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

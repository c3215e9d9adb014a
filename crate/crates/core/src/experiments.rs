//! Desk-scale versions of the figure experiments, shared by the command
//! line tool and the acceptance tests.
//!
//! Networks are Barabasi-Albert graphs with `m = 2` grown from graph seed
//! [`BA_SEED`]. Unless stated otherwise urns start with one red and one
//! black ball and every draw adds one ball of the drawn colour.

use rand::Rng;

use crate::approx::{model2a_delta, model2b_delta, rho_for_node, ModelKind};
use crate::contagion::{DeltaSchedule, MemoryMode, UrnInit};
use crate::exact::BetaParams;
use crate::graph::{generate, largest_eigenvalue, GraphKind, Network, PowerIteration};
use crate::montecarlo::{
    histogram, ks_fit, run_trials, stationarity_diagnostic, Collect, MonteCarloError, RunConfig,
    StationarityReport, TrendEstimate, TrialStatistics,
};
use crate::rng::{stream, SETUP_STREAM};
use crate::sis::{sis_run, SisParams};

pub const BA_SEED: u64 = 1;

/// Memory length of the finite-memory runs.
pub const FIG5_MEMORY: usize = 50;

/// SIS infection rate paired with the urn runs; the cure rate is
/// `ratio · SIS_BETA`.
pub const SIS_BETA: f64 = 0.15;

/// Red reinforcement of the curing-ratio runs; black is `ratio · FIG5_DELTA_RED`.
pub const FIG5_DELTA_RED: f64 = 2.0;

pub fn ba_network(nodes: usize) -> Result<Network, MonteCarloError> {
    generate(&GraphKind::BarabasiAlbert { nodes, m: 2, seed: BA_SEED })
        .map_err(|e| MonteCarloError::InvalidConfig(e.to_string()))
}

/// Initial masses drawn uniformly from `lo..=hi` on the set-up stream.
pub fn random_integer_init(nodes: usize, lo: u32, hi: u32, seed: u64) -> UrnInit<f64> {
    let mut rng = stream(seed, SETUP_STREAM);
    let mut draw = || rng.random_range(lo..=hi) as f64;
    let red: Vec<f64> = (0..nodes).map(|_| draw()).collect();
    let black: Vec<f64> = (0..nodes).map(|_| draw()).collect();
    UrnInit::new(red, black).expect("masses are at least 1")
}

fn unit_init(nodes: usize) -> UrnInit<f64> {
    UrnInit::uniform(nodes, 1.0, 1.0).expect("positive masses")
}

pub struct Fig2 {
    pub config: RunConfig,
    pub stats: TrialStatistics,
    pub report: StationarityReport,
}

/// Pair frequency `P(Z_n = 1, Z_{n−1} = 1)` on the 5-node network, checked
/// for settling over the trailing `window` steps.
pub fn fig2(seed: u64, trials: usize, horizon: usize, window: usize) -> Result<Fig2, MonteCarloError> {
    let config = RunConfig::new(ba_network(5)?, unit_init(5), DeltaSchedule::constant(1.0), horizon, trials, seed);
    let stats = run_trials(&config)?;
    let report = stationarity_diagnostic(&stats, Some(window))?;
    Ok(Fig2 { config, stats, report })
}

pub struct BetaFit {
    pub label: String,
    pub node: usize,
    /// `None` for the single-urn case, whose limit law is exact.
    pub model: Option<ModelKind>,
    pub beta: BetaParams,
    pub ks: f64,
    pub sample_averages: Vec<f64>,
}

impl BetaFit {
    pub fn histogram(&self, bins: usize) -> Result<crate::montecarlo::Histogram, MonteCarloError> {
        histogram(&self.sample_averages, bins)
    }
}

pub struct Fig4 {
    pub runs: Vec<(RunConfig, Vec<BetaFit>)>,
}

impl Fig4 {
    pub fn find(&self, label: &str) -> Option<&BetaFit> {
        self.runs.iter().flat_map(|(_, f)| f).find(|f| f.label == label)
    }
}

/// Sample averages at `horizon` against Beta limits: a single urn with
/// `ρ = δ = 1/2`, then node 0 of the 5- and 100-node networks under both
/// Model II variants.
pub fn fig4(seed: u64, trials: usize, horizon: usize) -> Result<Fig4, MonteCarloError> {
    let mut runs = Vec::new();

    let single = generate(&GraphKind::Complete(1)).map_err(|e| MonteCarloError::InvalidConfig(e.to_string()))?;
    let cfg = RunConfig::new(single, unit_init(1), DeltaSchedule::constant(1.0), horizon, trials, seed);
    let stats = run_trials(&cfg)?;
    let beta = BetaParams::from_polya(0.5, 0.5)?;
    let xs = stats.sample_averages(0).to_vec();
    let fit = BetaFit {
        label: "single".into(),
        node: 0,
        model: None,
        beta,
        ks: ks_fit(&xs, &beta)?,
        sample_averages: xs,
    };
    runs.push((cfg, vec![fit]));

    for nodes in [5, 100] {
        let net = ba_network(nodes)?;
        let init = unit_init(nodes);
        let cfg = RunConfig::new(net.clone(), init.clone(), DeltaSchedule::constant(1.0), horizon, trials, seed);
        let stats = run_trials(&cfg)?;
        let node = 0;
        let rho = rho_for_node(&net, &init, node);
        let xs = stats.sample_averages(node).to_vec();
        let mut fits = Vec::new();
        for (model, delta) in [
            (ModelKind::IIa, model2a_delta(&net, &init, node, &1.0)),
            (ModelKind::IIb, model2b_delta(&net, &init, node, &1.0)),
        ] {
            let beta = BetaParams::from_polya(rho, delta)?;
            fits.push(BetaFit {
                label: format!("ba{nodes}_{}", model.to_string().to_lowercase()),
                node,
                model: Some(model),
                beta,
                ks: ks_fit(&xs, &beta)?,
                sample_averages: xs.clone(),
            });
        }
        runs.push((cfg, fits));
    }
    Ok(Fig4 { runs })
}

pub struct Fig5Run {
    pub label: String,
    /// `Δ_b / Δ_r`, equal to `δ_SIS / β`.
    pub ratio: f64,
    pub config: RunConfig,
    pub stats: TrialStatistics,
    pub trend: TrendEstimate,
    /// Mean SIS infection probability at `t = 1..=horizon`.
    pub sis_mean: Vec<f64>,
}

pub struct Fig5 {
    pub lambda_max: f64,
    pub runs: Vec<Fig5Run>,
}

impl Fig5 {
    pub fn find(&self, label: &str) -> Option<&Fig5Run> {
        self.runs.iter().find(|r| r.label == label)
    }
}

/// The 20-node network with random integer masses in `1..=10` and
/// `Δ_r = 2`, run at curing ratios `λ_max/10`, `1.01 λ_max` and 1. The
/// ratio-1 case runs with both infinite and finite memory on the same
/// seed. Infinite-memory trends are fitted over `[horizon/10, horizon]`,
/// finite-memory ones over the trailing half, where they should have
/// settled.
pub fn fig5(seed: u64, trials: usize, horizon: usize) -> Result<Fig5, MonteCarloError> {
    let net = ba_network(20)?;
    let lambda_max = largest_eigenvalue(&net, PowerIteration::default())
        .map_err(|e| MonteCarloError::InvalidConfig(e.to_string()))?;
    let init = random_integer_init(20, 1, 10, seed);
    let init_probs: Vec<f64> = (0..20).map(|i| init.red()[i] / init.total(i)).collect();

    let cases = [
        ("low", lambda_max / 10.0, MemoryMode::Infinite),
        ("low_finite", lambda_max / 10.0, MemoryMode::Finite(FIG5_MEMORY)),
        ("met", 1.01 * lambda_max, MemoryMode::Infinite),
        ("met_finite", 1.01 * lambda_max, MemoryMode::Finite(FIG5_MEMORY)),
        ("same", 1.0, MemoryMode::Infinite),
        ("same_finite", 1.0, MemoryMode::Finite(FIG5_MEMORY)),
    ];
    let mut runs = Vec::new();
    for (label, ratio, memory) in cases {
        let mut config = RunConfig::new(
            net.clone(),
            init.clone(),
            DeltaSchedule::Constant { red: FIG5_DELTA_RED, black: ratio * FIG5_DELTA_RED },
            horizon,
            trials,
            seed,
        );
        config.memory = memory;
        let start = match memory {
            MemoryMode::Infinite => horizon / 10,
            MemoryMode::Finite(_) => horizon / 2,
        };
        config.collect = Collect { assignments: false, trend: Some((start.max(1), horizon)) };
        let stats = run_trials(&config)?;
        let sis = sis_run(&net, &init_probs, &SisParams { beta: SIS_BETA, delta: (ratio * SIS_BETA).min(1.0) }, horizon)
            .map_err(|e| MonteCarloError::InvalidConfig(e.to_string()))?;
        runs.push(Fig5Run {
            label: label.into(),
            ratio,
            trend: stats.trend().expect("trend collected"),
            stats,
            config,
            sis_mean: sis[1..].iter().map(|s| s.mean()).collect(),
        });
    }
    Ok(Fig5 { lambda_max, runs })
}

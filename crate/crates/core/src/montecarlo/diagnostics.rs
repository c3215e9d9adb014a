use super::{run_trials, MonteCarloError, RunConfig, TrialStatistics};
use crate::contagion::MemoryMode;
use crate::exact::{BetaParams, ExactError, JointTable};
use crate::mass::Mass;

/// Density histogram over `[0, 1]` with equal-width bins.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.density.len()
    }

    pub fn area(&self) -> f64 {
        self.density
            .iter()
            .zip(self.edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum()
    }
}

/// Values equal to 1 fall in the last bin.
pub fn histogram(samples: &[f64], bins: usize) -> Result<Histogram, MonteCarloError> {
    if bins == 0 || samples.len() < bins {
        return Err(MonteCarloError::InvalidConfig(format!(
            "histogram needs 1 ≤ bins ≤ samples, got {bins} bins for {} samples",
            samples.len()
        )));
    }
    if let Some(x) = samples.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(MonteCarloError::InvalidConfig(format!("sample {x} outside [0, 1]")));
    }
    let mut counts = vec![0usize; bins];
    for &x in samples {
        counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let scale = bins as f64 / samples.len() as f64;
    Ok(Histogram {
        edges: (0..=bins).map(|k| k as f64 / bins as f64).collect(),
        density: counts.into_iter().map(|c| c as f64 * scale).collect(),
    })
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// a Beta law. Both sides of each jump are checked, so ties are handled.
pub fn ks_fit(samples: &[f64], beta: &BetaParams) -> Result<f64, ExactError> {
    if samples.is_empty() {
        return Err(ExactError::Domain("no samples".into()));
    }
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut worst: f64 = 0.0;
    let mut k = 0;
    while k < xs.len() {
        let x = xs[k];
        let mut j = k;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = beta.cdf(x)?;
        worst = worst.max((f - k as f64 / n).abs()).max((j as f64 / n - f).abs());
        k = j;
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarityReport {
    /// Steps `start..=end` inspected.
    pub window: (usize, usize),
    /// Largest `|f(t) − f(t−1)|` inside the window, `f` the node-averaged
    /// pair frequency.
    pub max_deviation: f64,
    /// Mean of `f` over the window.
    pub settled_value: f64,
}

/// Successive deviations of the pair frequency `P(Z_t = 1, Z_{t−1} = 1)`,
/// averaged over nodes, over the trailing `window` steps (default: last
/// 20% of the horizon).
pub fn stationarity_diagnostic(
    stats: &TrialStatistics,
    window: Option<usize>,
) -> Result<StationarityReport, MonteCarloError> {
    let n = stats.horizon();
    let w = window.unwrap_or(n / 5).max(1);
    if n < 3 || w + 1 >= n {
        return Err(MonteCarloError::InvalidConfig(format!(
            "window {w} leaves no room inside horizon {n}"
        )));
    }
    let f = stats.mean_pair_freq();
    let start = n - w + 1;
    let max_deviation = (start..=n)
        .map(|t| (f[t - 1] - f[t - 2]).abs())
        .fold(0.0, f64::max);
    let settled_value = f[start - 1..].iter().sum::<f64>() / w as f64;
    Ok(StationarityReport {
        window: (start, n),
        max_deviation,
        settled_value,
    })
}

/// Per-step trial mean of `Ũ_t − Ũ_{t−1}` with its standard error. Only
/// defined where the network susceptibility is a martingale: a regular
/// network, constant equal reinforcement, equal urn totals and infinite
/// memory.
pub fn martingale_residual(cfg: &RunConfig) -> Result<Vec<(f64, f64)>, MonteCarloError> {
    let fail = |why: &str| Err(MonteCarloError::HypothesisViolation(why.into()));
    if !cfg.network.is_regular() {
        return fail("network is not regular");
    }
    if cfg.schedule.constant_equal().is_none() {
        return fail("schedule is not a constant equal Δ");
    }
    let totals = cfg.init.totals();
    if totals.iter().any(|t| *t != totals[0]) {
        return fail("initial urn totals differ");
    }
    if cfg.memory != MemoryMode::Infinite {
        return fail("memory is finite");
    }
    Ok(run_trials(cfg)?.susceptibility_increments())
}

/// Half the L1 distance between empirical assignment frequencies and an
/// exact joint table.
pub fn total_variation<P: Mass>(empirical: &[f64], exact: &JointTable<P>) -> Result<f64, MonteCarloError> {
    if empirical.len() != exact.len() {
        return Err(MonteCarloError::InvalidConfig(format!(
            "{} empirical cells against {} exact cells",
            empirical.len(),
            exact.len()
        )));
    }
    Ok(exact
        .iter()
        .map(|(bits, p)| (empirical[bits as usize] - p.to_f64()).abs())
        .sum::<f64>()
        / 2.0)
}

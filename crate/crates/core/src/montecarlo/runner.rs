use rayon::prelude::*;

use super::{MonteCarloError, RunConfig, TrialStatistics};
use crate::contagion::{DeltaSchedule, NetworkState, UrnInit};
use crate::exact::average_infection_rate;
use crate::graph::Network;
use crate::mass::Mass;
use crate::rng::trial_rng;

/// Trials per work unit.
pub const BLOCK_SIZE: usize = 64;

pub fn run_trials(cfg: &RunConfig) -> Result<TrialStatistics, MonteCarloError> {
    cfg.validate()?;
    let template = NetworkState::new(&cfg.network, &cfg.init, cfg.memory)?;
    let assignment_bits = cfg
        .collect
        .assignments
        .then(|| cfg.network.node_count() * cfg.horizon);
    let fresh = || {
        TrialStatistics::empty(
            cfg.horizon,
            cfg.network.node_count(),
            assignment_bits,
            cfg.collect.trend.is_some(),
        )
    };

    let blocks = cfg.trials.div_ceil(BLOCK_SIZE);
    let wave = (rayon::current_num_threads() * 2).max(1);
    let mut total = fresh();
    for first in (0..blocks).step_by(wave) {
        let results: Vec<TrialStatistics> = (first..(first + wave).min(blocks))
            .into_par_iter()
            .map(|b| {
                let mut stats = fresh();
                let mut scratch = Scratch::new(cfg.network.node_count());
                for k in b * BLOCK_SIZE..((b + 1) * BLOCK_SIZE).min(cfg.trials) {
                    run_one(cfg, &template, k as u64, &mut stats, &mut scratch);
                }
                stats
            })
            .collect();
        for r in results {
            total.merge(r);
        }
    }
    Ok(total)
}

struct Scratch {
    draws: Vec<bool>,
    prev: Vec<bool>,
    probs: Vec<f64>,
    reds: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            draws: vec![false; n],
            prev: vec![false; n],
            probs: Vec::with_capacity(n),
            reds: vec![0; n],
        }
    }
}

fn run_one(cfg: &RunConfig, template: &NetworkState<f64>, trial: u64, stats: &mut TrialStatistics, sc: &mut Scratch) {
    let net = &cfg.network;
    let n = net.node_count();
    let mut rng = trial_rng(cfg.seed, trial);
    let mut state = template.clone();
    sc.prev.iter_mut().for_each(|p| *p = false);
    sc.reds.iter_mut().for_each(|r| *r = 0);
    let mut u_prev = state.network_susceptibility();
    let mut bits = 0u64;
    let (trend_lo, trend_hi) = cfg.collect.trend.unwrap_or((0, 0));
    let trend_mid = (trend_lo + trend_hi) as f64 / 2.0;
    let mut trend_acc = 0.0;

    for t in 1..=cfg.horizon {
        state.sample_step_into(net, &cfg.schedule, &mut rng, &mut sc.draws, &mut sc.probs);
        let row = (t - 1) * n;
        let mut infected = 0usize;
        let mut u_sum = 0.0;
        for i in 0..n {
            let u = state.red_mass()[i] / state.total_mass()[i];
            stats.urn_sums[row + i] += u;
            u_sum += u;
            if sc.draws[i] {
                infected += 1;
                sc.reds[i] += 1;
                stats.infections[row + i] += 1;
                if sc.prev[i] {
                    stats.pairs[row + i] += 1;
                }
                if stats.assignments.is_some() {
                    bits |= 1 << ((t - 1) * n + i);
                }
            }
        }
        let u_tilde = u_sum / n as f64;
        stats.susceptibility[t - 1] += u_tilde;
        let inc = u_tilde - u_prev;
        stats.increments[t - 1] += inc;
        stats.increments_sq[t - 1] += inc * inc;
        u_prev = u_tilde;
        if (trend_lo..=trend_hi).contains(&t) && stats.slopes.is_some() {
            trend_acc += (t as f64 - trend_mid) * infected as f64 / n as f64;
        }
        std::mem::swap(&mut sc.prev, &mut sc.draws);
    }

    for (avgs, &r) in stats.sample_averages.iter_mut().zip(&sc.reds) {
        avgs.push(r as f64 / cfg.horizon as f64);
    }
    if let Some(counts) = stats.assignments.as_mut() {
        counts[bits as usize] += 1;
    }
    if let Some(slopes) = stats.slopes.as_mut() {
        let m = (trend_hi - trend_lo + 1) as f64;
        let sxx = m * (m * m - 1.0) / 12.0;
        slopes.push(trend_acc / sxx);
    }
    stats.trials += 1;
}

/// An average infection rate, exact when enumeration is affordable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RateEstimate {
    Exact(f64),
    MonteCarlo { mean: f64, std_error: f64, trials: usize },
}

/// `Ĩ_n` by enumeration (in floating point) when `N(n − 1) ≤ cap`,
/// otherwise estimated from `trials` runs.
pub fn estimate_infection_rate<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    sched: &DeltaSchedule<P>,
    n: usize,
    cap: usize,
    trials: usize,
    seed: u64,
) -> Result<RateEstimate, MonteCarloError> {
    let init_f: UrnInit<f64> = init.cast();
    let sched_f: DeltaSchedule<f64> = sched.cast();
    if n >= 1 && net.node_count() * (n - 1) <= cap {
        let rate = average_infection_rate(net, &init_f, &sched_f, n, cap)?;
        return Ok(RateEstimate::Exact(rate));
    }
    let cfg = RunConfig::new(net.clone(), init_f, sched_f, n, trials, seed);
    let stats = run_trials(&cfg)?;
    let row = &stats.infections[(n - 1) * net.node_count()..n * net.node_count()];
    let p = row.iter().sum::<u64>() as f64 / (net.node_count() * trials) as f64;
    // Node indicators within a trial are correlated; per-trial fractions
    // give an honest standard error.
    let fracs: Vec<f64> = per_trial_final_fraction(&cfg)?;
    let k = fracs.len() as f64;
    let var = fracs.iter().map(|f| (f - p).powi(2)).sum::<f64>() / (k - 1.0).max(1.0);
    Ok(RateEstimate::MonteCarlo {
        mean: p,
        std_error: (var / k).sqrt(),
        trials,
    })
}

fn per_trial_final_fraction(cfg: &RunConfig) -> Result<Vec<f64>, MonteCarloError> {
    let template = NetworkState::new(&cfg.network, &cfg.init, cfg.memory)?;
    let n = cfg.network.node_count();
    Ok((0..cfg.trials as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(cfg.seed, k);
            let mut st = template.clone();
            let mut draws = vec![false; n];
            let mut probs = Vec::with_capacity(n);
            for _ in 0..cfg.horizon {
                st.sample_step_into(&cfg.network, &cfg.schedule, &mut rng, &mut draws, &mut probs);
            }
            draws.iter().filter(|&&d| d).count() as f64 / n as f64
        })
        .collect())
}

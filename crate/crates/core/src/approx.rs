//! Classical Polya approximations of a single node's draw process.
//!
//! Every model uses the node's initial super-urn proportion as `ρ`, so the
//! one-step laws agree; they differ in the correlation parameter. Model I
//! fits it numerically by minimising the KL divergence rate, Models II(a)
//! and II(b) use closed forms in `δ_i = NΔ / T̄_i`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contagion::{DeltaSchedule, UrnInit};
use crate::exact::{
    complete_n1_joint, complete_node_distribution, node_sequence_distribution, ExactError,
    SequenceDistribution, DEFAULT_CAP,
};
use crate::graph::Network;
use crate::mass::Mass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApproxError {
    #[error("node marginal is degenerate: {0}")]
    DegenerateMarginal(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "IIa")]
    IIa,
    #[serde(rename = "IIb")]
    IIb,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::I => "I",
            ModelKind::IIa => "IIa",
            ModelKind::IIb => "IIb",
        })
    }
}

/// A classical Polya stand-in for one node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeApproximation {
    pub node: usize,
    pub rho: f64,
    pub delta: f64,
    pub model: ModelKind,
    /// Achieved KL rate; only set for Model I.
    pub fit_kl: Option<f64>,
}

/// `ρ_i = R̄_i / T̄_i`.
pub fn rho_for_node<P: Mass>(net: &Network, init: &UrnInit<P>, i: usize) -> P {
    init.super_red(net, i) / init.super_total(net, i)
}

/// `δ_i = NΔ / T̄_i`.
pub fn delta_i<P: Mass>(net: &Network, init: &UrnInit<P>, i: usize, delta: &P) -> P {
    P::from_u64(net.node_count() as u64) * delta.clone() / init.super_total(net, i)
}

/// `δ'_i = δ_i / (N + (N − 1)δ_i)`.
pub fn model2a_delta<P: Mass>(net: &Network, init: &UrnInit<P>, i: usize, delta: &P) -> P {
    let d = delta_i(net, init, i, delta);
    let n = P::from_u64(net.node_count() as u64);
    d.clone() / (n.clone() + (n - P::one()) * d)
}

/// `δ*_i = δ_i / (N² + (N − 1)δ_i)`.
pub fn model2b_delta<P: Mass>(net: &Network, init: &UrnInit<P>, i: usize, delta: &P) -> P {
    let d = delta_i(net, init, i, delta);
    let n = P::from_u64(net.node_count() as u64);
    d.clone() / (n.clone() * n.clone() + (n - P::one()) * d)
}

/// `(n,1)`-step joint of a classical Polya process, `ρ(ρ + δ)/(1 + δ)`;
/// with `δ = δ'_i` it reproduces the complete-network value.
pub fn classical_n1_joint<P: Mass>(rho: &P, delta: &P) -> P {
    rho.clone() * (rho.clone() + delta.clone()) / (P::one() + delta.clone())
}

/// Difference between the classical `(n,1)` joint at `δ'` and the
/// complete-network value; zero up to rounding.
pub fn model2a_matching_gap(rho: f64, delta: f64, node_count: usize) -> f64 {
    let n = node_count as f64;
    let dp = delta / (n + (n - 1.0) * delta);
    classical_n1_joint(&rho, &dp) - complete_n1_joint(&rho, &delta, node_count)
}

/// Coarse grid then golden-section search for the Model I fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub delta_max: f64,
    pub grid_points: usize,
    pub tolerance: f64,
}

impl SearchConfig {
    /// Search `[0, 10 δ_i]` with 200 grid points down to width `1e-6`.
    pub fn around(delta_i: f64) -> Self {
        SearchConfig {
            delta_max: 10.0 * delta_i,
            grid_points: 200,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Model1Fit {
    pub delta_hat: f64,
    pub kl: f64,
    /// Largest KL rate seen on the coarse grid.
    pub worst_grid_kl: f64,
}

/// KL rate `(1/n) D(P || Q_{ρ,δ})` as a function of `δ`, evaluated through
/// the red-count sufficient statistic.
#[derive(Debug, Clone)]
pub struct KlObjective {
    n: usize,
    rho: f64,
    neg_entropy: f64,
    by_count: Vec<f64>,
}

impl KlObjective {
    pub fn new<P: Mass>(marginal: &SequenceDistribution<P>, rho: f64) -> Result<Self, ApproxError> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(ApproxError::InvalidInput(format!("rho = {rho} must lie in (0, 1)")));
        }
        let n = marginal.len();
        if n == 0 {
            return Err(ApproxError::DegenerateMarginal("empty window".into()));
        }
        let mut by_count = vec![0.0; n + 1];
        let mut neg_entropy = 0.0;
        let mut total = 0.0;
        for (s, p) in marginal.probs().iter().enumerate() {
            let p = p.to_f64();
            if p > 0.0 {
                neg_entropy += p * p.ln();
                by_count[s.count_ones() as usize] += p;
            }
            total += p;
        }
        if !((total - 1.0).abs() < 1e-9) {
            return Err(ApproxError::DegenerateMarginal(format!("total mass {total}")));
        }
        Ok(KlObjective {
            n,
            rho,
            neg_entropy,
            by_count,
        })
    }

    pub fn eval(&self, delta: f64) -> f64 {
        let n = self.n;
        let mut log_red = vec![0.0; n + 1];
        let mut log_black = vec![0.0; n + 1];
        for j in 0..n {
            log_red[j + 1] = log_red[j] + (self.rho + j as f64 * delta).ln();
            log_black[j + 1] = log_black[j] + (1.0 - self.rho + j as f64 * delta).ln();
        }
        let log_norm: f64 = (0..n).map(|t| (1.0 + t as f64 * delta).ln()).sum();
        let cross: f64 = self
            .by_count
            .iter()
            .enumerate()
            .filter(|(_, p)| **p > 0.0)
            .map(|(k, p)| p * (log_red[k] + log_black[n - k] - log_norm))
            .sum();
        ((self.neg_entropy - cross) / n as f64).max(0.0)
    }
}

/// Model I: the `δ ≥ 0` minimising the KL rate from the node's law.
pub fn model1_fit<P: Mass>(
    marginal: &SequenceDistribution<P>,
    rho: f64,
    search: &SearchConfig,
) -> Result<Model1Fit, ApproxError> {
    let objective = KlObjective::new(marginal, rho)?;
    if !(search.delta_max >= 0.0) || search.grid_points < 2 {
        return Err(ApproxError::InvalidInput("search needs delta_max ≥ 0 and two grid points".into()));
    }
    if search.delta_max == 0.0 {
        let kl = objective.eval(0.0);
        return Ok(Model1Fit { delta_hat: 0.0, kl, worst_grid_kl: kl });
    }
    let step = search.delta_max / (search.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..search.grid_points).map(|k| objective.eval(k as f64 * step)).collect();
    let (best, _) = grid
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc });
    let worst_grid_kl = grid.iter().cloned().fold(0.0, f64::max);

    let lo = best.saturating_sub(1) as f64 * step;
    let hi = (best + 1).min(search.grid_points - 1) as f64 * step;
    let refined = golden_section(|d| objective.eval(d), lo, hi, search.tolerance);
    let refined_kl = objective.eval(refined);
    let (delta_hat, kl) = if refined_kl <= grid[best] {
        (refined, refined_kl)
    } else {
        (best as f64 * step, grid[best])
    };
    Ok(Model1Fit { delta_hat, kl, worst_grid_kl })
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Maximum absolute gap between a complete-network node law and the
/// `Polya(ρ_i, δ'_i)` law over all sequences of length `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport<P> {
    pub rho: P,
    pub delta_prime: P,
    pub max_deviation: P,
}

pub fn model2a_consistency<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    delta: &P,
    i: usize,
    n: usize,
) -> Result<ConsistencyReport<P>, ApproxError> {
    let marginal = complete_node_distribution(net, init, &DeltaSchedule::constant(delta.clone()), n)?;
    let rho = rho_for_node(net, init, i);
    let delta_prime = model2a_delta(net, init, i, delta);
    let params = crate::exact::PolyaParams::new(rho.clone(), delta_prime.clone())?;
    let q = crate::exact::classical_polya_distribution(&params, n);
    let max_deviation = marginal
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(p, q)| {
            let d = p.clone() - q.clone();
            if d.is_negative() {
                P::zero() - d
            } else {
                d
            }
        })
        .fold(P::zero(), |m, d| if d > m { d } else { m });
    Ok(ConsistencyReport { rho, delta_prime, max_deviation })
}

/// Advisory model choice: the small-network formula up to `threshold`
/// nodes, the large-network one above.
pub fn recommend_model(node_count: usize, threshold: usize) -> ModelKind {
    if node_count <= threshold {
        ModelKind::IIb
    } else {
        ModelKind::IIa
    }
}

pub const DEFAULT_MODEL_THRESHOLD: usize = 20;

/// All three approximations of one node, with the KL rate each achieves
/// against the node's exact `n`-step law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub node: usize,
    pub rho: f64,
    pub delta_hat: f64,
    pub kl: f64,
    pub worst_grid_kl: f64,
    pub delta_prime: f64,
    pub delta_star: f64,
    pub kl_prime: f64,
    pub kl_star: f64,
}

impl FitReport {
    pub fn approximations(&self) -> [NodeApproximation; 3] {
        let mk = |delta, model, fit_kl| NodeApproximation {
            node: self.node,
            rho: self.rho,
            delta,
            model,
            fit_kl,
        };
        [
            mk(self.delta_hat, ModelKind::I, Some(self.kl)),
            mk(self.delta_prime, ModelKind::IIa, None),
            mk(self.delta_star, ModelKind::IIb, None),
        ]
    }
}

/// The exact law of node `i`'s first `n` draws under a constant schedule
/// `Δ_r = Δ_b = delta`: the complete-network recursion when it applies,
/// full enumeration otherwise.
pub fn node_law<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    delta: &P,
    i: usize,
    n: usize,
    cap: usize,
) -> Result<SequenceDistribution<P>, ApproxError> {
    let sched = DeltaSchedule::constant(delta.clone());
    if net.is_complete() {
        Ok(complete_node_distribution(net, init, &sched, n)?)
    } else {
        Ok(node_sequence_distribution(net, init, &sched, i, n, cap)?)
    }
}

pub fn fit_node<P: Mass>(
    net: &Network,
    init: &UrnInit<P>,
    delta: &P,
    i: usize,
    n: usize,
    search: Option<SearchConfig>,
) -> Result<FitReport, ApproxError> {
    if i >= net.node_count() {
        return Err(ApproxError::InvalidInput(format!("node {i} out of range")));
    }
    if delta.is_negative() {
        return Err(ApproxError::InvalidInput("delta must be ≥ 0".into()));
    }
    let law = node_law(net, init, delta, i, n, DEFAULT_CAP)?;
    let rho = rho_for_node(net, init, i).to_f64();
    let search = search.unwrap_or_else(|| SearchConfig::around(delta_i(net, init, i, delta).to_f64()));
    let fit = model1_fit(&law, rho, &search)?;
    let objective = KlObjective::new(&law, rho)?;
    let delta_prime = model2a_delta(net, init, i, delta).to_f64();
    let delta_star = model2b_delta(net, init, i, delta).to_f64();
    Ok(FitReport {
        node: i,
        rho,
        delta_hat: fit.delta_hat,
        kl: fit.kl,
        worst_grid_kl: fit.worst_grid_kl,
        delta_prime,
        delta_star,
        kl_prime: objective.eval(delta_prime),
        kl_star: objective.eval(delta_star),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{classical_polya_distribution, kl_rate, PolyaParams};
    use crate::graph::{generate, GraphKind};
    use crate::mass::{ratio, Rational};

    #[test]
    fn analytic_deltas() {
        let k2 = generate(&GraphKind::Complete(2)).unwrap();
        let init = UrnInit::uniform(2, ratio(1, 1), ratio(1, 1)).unwrap();
        let one = ratio(1, 1);
        assert_eq!(delta_i(&k2, &init, 0, &one), ratio(1, 2));
        assert_eq!(model2a_delta(&k2, &init, 0, &one), ratio(1, 5));
        assert_eq!(model2b_delta(&k2, &init, 0, &one), ratio(1, 9));

        let single = Network::new(1, &[]).unwrap();
        let init1 = UrnInit::new(vec![ratio(2, 1)], vec![ratio(3, 1)]).unwrap();
        assert_eq!(model2a_delta(&single, &init1, 0, &one), ratio(1, 5));
        assert_eq!(model2b_delta(&single, &init1, 0, &one), ratio(1, 5));
        assert_eq!(rho_for_node(&single, &init1, 0), ratio(2, 5));
    }

    #[test]
    fn star_hub_and_leaf_see_different_proportions() {
        let star = generate(&GraphKind::Star(3)).unwrap();
        let init = UrnInit::new(vec![ratio(3, 1), ratio(1, 1), ratio(1, 1)], vec![ratio(1, 1); 3]).unwrap();
        assert_eq!(rho_for_node(&star, &init, 0), ratio(5, 8));
        assert_eq!(rho_for_node(&star, &init, 1), ratio(4, 6));
    }

    #[test]
    fn objective_matches_direct_kl() {
        let p = classical_polya_distribution(&PolyaParams::new(0.3, 0.4).unwrap(), 6);
        let obj = KlObjective::new(&p, 0.3).unwrap();
        for d in [0.0, 0.1, 0.4, 2.0] {
            let q = classical_polya_distribution(&PolyaParams::new(0.3, d).unwrap(), 6);
            assert!((obj.eval(d) - kl_rate(&p, &q).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn model1_recovers_single_urn() {
        let single = Network::new(1, &[]).unwrap();
        let init = UrnInit::uniform(1, ratio(1, 1), ratio(1, 1)).unwrap();
        let report = fit_node(&single, &init, &ratio(1, 1), 0, 8, None).unwrap();
        assert!((report.delta_hat - 0.5).abs() < 1e-6, "{report:?}");
        assert!(report.kl <= 1e-9);

        let zero = fit_node(&single, &init, &ratio(0, 1), 0, 6, None).unwrap();
        assert_eq!(zero.delta_hat, 0.0);
    }

    #[test]
    fn model2a_gap_is_zero_for_one_node_and_positive_for_two() {
        let single = Network::new(1, &[]).unwrap();
        let init = UrnInit::uniform(1, ratio(1, 1), ratio(2, 1)).unwrap();
        let r = model2a_consistency(&single, &init, &ratio(1, 1), 0, 5).unwrap();
        assert_eq!(r.max_deviation, ratio(0, 1));

        let k2 = generate(&GraphKind::Complete(2)).unwrap();
        let init: UrnInit<Rational> = UrnInit::uniform(2, ratio(1, 1), ratio(1, 1)).unwrap();
        let r = model2a_consistency(&k2, &init, &ratio(2, 1), 0, 3).unwrap();
        assert!(r.max_deviation > ratio(0, 1));
        let r0 = model2a_consistency(&k2, &init, &ratio(0, 1), 0, 3).unwrap();
        assert_eq!(r0.max_deviation, ratio(0, 1));
    }

    #[test]
    fn recommendation_threshold() {
        assert_eq!(recommend_model(5, DEFAULT_MODEL_THRESHOLD), ModelKind::IIb);
        assert_eq!(recommend_model(20, DEFAULT_MODEL_THRESHOLD), ModelKind::IIb);
        assert_eq!(recommend_model(21, DEFAULT_MODEL_THRESHOLD), ModelKind::IIa);
    }
}

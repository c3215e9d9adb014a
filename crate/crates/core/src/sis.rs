//! Deterministic discrete-time SIS recursion and its epidemic threshold.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{largest_eigenvalue, GraphError, Network, PowerIteration};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SisError {
    #[error("{name} = {value} must lie in [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },
    #[error("expected {expected} initial probabilities, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Per-contact infection rate `beta` and cure rate `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SisParams {
    pub beta: f64,
    pub delta: f64,
}

impl SisParams {
    pub fn new(beta: f64, delta: f64) -> Result<Self, SisError> {
        for (name, value) in [("beta", beta), ("delta_sis", delta)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SisError::ParameterOutOfRange { name, value });
            }
        }
        Ok(SisParams { beta, delta })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SisState {
    pub time: usize,
    pub probs: Vec<f64>,
}

impl SisState {
    pub fn new(probs: Vec<f64>) -> Result<Self, SisError> {
        for &p in &probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(SisError::ParameterOutOfRange { name: "P_i(0)", value: p });
            }
        }
        Ok(SisState { time: 0, probs })
    }

    pub fn mean(&self) -> f64 {
        self.probs.iter().sum::<f64>() / self.probs.len() as f64
    }
}

/// `P_i ← P_i(1 − δ) + (1 − P_i)(1 − Π_{j∈N_i}(1 − βP_j))`.
pub fn sis_step(state: &SisState, net: &Network, params: &SisParams) -> SisState {
    let p = &state.probs;
    let probs = (0..net.node_count())
        .map(|i| {
            let escape: f64 = net.neighbors(i).iter().map(|&j| 1.0 - params.beta * p[j]).product();
            p[i] * (1.0 - params.delta) + (1.0 - p[i]) * (1.0 - escape)
        })
        .collect();
    SisState {
        time: state.time + 1,
        probs,
    }
}

/// States at times `0..=horizon`.
pub fn sis_run(
    net: &Network,
    init_probs: &[f64],
    params: &SisParams,
    horizon: usize,
) -> Result<Vec<SisState>, SisError> {
    if init_probs.len() != net.node_count() {
        return Err(SisError::SizeMismatch {
            expected: net.node_count(),
            found: init_probs.len(),
        });
    }
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(SisState::new(init_probs.to_vec())?);
    for _ in 0..horizon {
        let next = sis_step(out.last().expect("non-empty"), net, params);
        out.push(next);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdClass {
    DiesOut,
    Endemic,
    Critical,
}

impl std::fmt::Display for ThresholdClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ThresholdClass::DiesOut => "dies_out",
            ThresholdClass::Endemic => "endemic",
            ThresholdClass::Critical => "critical",
        })
    }
}

pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

/// Compare `delta` with `beta · λ_max`.
pub fn classify_with_lambda(lambda_max: f64, params: &SisParams) -> ThresholdClass {
    let gap = params.delta - params.beta * lambda_max;
    if gap.abs() <= THRESHOLD_TOLERANCE {
        ThresholdClass::Critical
    } else if gap > 0.0 {
        ThresholdClass::DiesOut
    } else {
        ThresholdClass::Endemic
    }
}

pub fn threshold_classify(net: &Network, params: &SisParams) -> Result<(ThresholdClass, f64), SisError> {
    let lambda = largest_eigenvalue(net, PowerIteration::default())?;
    Ok((classify_with_lambda(lambda, params), lambda))
}

//! Exact finite-horizon distributions of the contagion process.
//!
//! Joint laws are computed by walking the full tree of draw vectors with the
//! chain rule, so in rational arithmetic every identity can be checked with
//! `==` rather than a tolerance.

mod beta;
mod complete;
mod enumerate;
mod polya;
mod table;

pub use beta::BetaParams;
pub use complete::{complete_marginal, complete_n1_joint, complete_node_distribution, nonstationarity_witness};
pub use enumerate::{
    average_infection_rate, conditional_expectation, enumerate_joint, enumerate_joint_from,
    for_each_history, joint_probability, node_sequence_distribution, DEFAULT_CAP,
};
pub use polya::{
    classical_polya_distribution, classical_polya_gamma, classical_polya_joint, kl_rate,
    PolyaParams,
};
pub use table::{assignment_bits, bit_index, JointTable, SequenceDistribution};

use thiserror::Error;

use crate::contagion::ContagionError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("enumeration needs {bits} binary draws, above the cap of {cap}")]
    CapExceeded { bits: usize, cap: usize },
    #[error("P has mass on {0} where Q is zero")]
    SupportMismatch(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("the closed form needs a complete network")]
    NotComplete,
    #[error("unsupported schedule: {0}")]
    UnsupportedSchedule(String),
    #[error("invalid window {start}..={end} for horizon {horizon}")]
    InvalidWindow { start: usize, end: usize, horizon: usize },
    #[error(transparent)]
    Contagion(#[from] ContagionError),
}

//! Urn dynamics of the network contagion process.
//!
//! Each node owns an urn of red (infection) and black (health) mass. At
//! every step all nodes draw simultaneously from their *super urn* (the union
//! of their own urn with their neighbours' urns) and the drawn colour is
//! reinforced in the node's own urn.

mod init;
mod martingale;
mod schedule;
mod state;

pub use init::UrnInit;
pub use martingale::{curing_delta_bound, exact_curing_delta, expected_urn_increment};
pub use schedule::DeltaSchedule;
pub use state::{DrawRecord, MemoryMode, NetworkState, StateSnapshot};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ContagionError {
    #[error("expected {expected} per-node values, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("{0}")]
    InvalidMass(String),
    #[error("invalid reinforcement schedule: {0}")]
    InvalidSchedule(String),
    #[error("finite memory window of {memory} steps is not full at time {time}")]
    WindowNotFull { time: usize, memory: usize },
    #[error("state does not use finite memory")]
    NotFiniteMemory,
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("invalid state snapshot: {0}")]
    Snapshot(String),
}

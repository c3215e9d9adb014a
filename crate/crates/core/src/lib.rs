//! Network Polya contagion: urn dynamics on graphs, exact joint
//! distributions, Polya approximations, the SIS comparison model and a
//! reproducible Monte Carlo engine.

pub mod approx;
pub mod contagion;
pub mod exact;
pub mod experiments;
pub mod graph;
pub mod mass;
pub mod montecarlo;
pub mod rng;
pub mod sis;

pub use contagion::{
    ContagionError, DeltaSchedule, DrawRecord, MemoryMode, NetworkState, StateSnapshot, UrnInit,
};
pub use graph::{GraphError, GraphKind, Network, NetworkClass};
pub use mass::{Mass, Rational};
pub use montecarlo::{Collect, MonteCarloError, RunConfig, TrialStatistics};
pub use sis::{SisParams, SisState, ThresholdClass};

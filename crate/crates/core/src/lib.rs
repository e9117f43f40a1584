//! Simulation and optimization of heralded linear-optical gates.
//!
//! Beam-splitter networks act on bosonic modes; fixing the ancilla input
//! and the photon-number pattern registered on the ancilla detectors turns
//! the network into a shifted-diagonal [`ConditionalMap`] on the signal
//! mode. Matrix elements come from permanents of the mode unitary, with a
//! brute-force Fock-space evolution kept alongside as an independent check.
//!
//! On top of that the crate classifies every detection outcome, computes
//! failure statistics and ideal recovery ceilings, and optimizes splitter
//! angles for single gates, syndrome corrections and jointly tuned
//! feed-forward chains.

pub mod analysis;
pub mod commands;
pub mod error;
pub mod evolution;
pub mod fock;
pub mod network;
pub mod optimize;
pub mod permanent;
pub mod report;

pub use analysis::{
    conditional_map, enumerate_outcomes, failure_stats, ideal_recovery_bound, max_success_ceiling,
    ns_target, partial_ceiling, success_probability, Classification, FailureStats, OutcomeRecord,
};
pub use network::NetworkTemplate;
pub use error::{Error, Result};
pub use fock::{ConditionalMap, FockState, PureState, C64, DEFAULT_CUTOFF};
pub use network::{bs_unitary, ns_canonical, su3_template, BeamSplitter, ModeUnitary, NetworkSpec};
pub use permanent::{matrix_element, permanent, ComplexMatrix};

//! Simulation and analysis of topological error correction on an
//! eight-mode Gaussian cluster state.
//!
//! The crate is organized around four stages:
//!
//! * [`gaussian`] — covariance-matrix simulation of multimode Gaussian
//!   states: symplectic transforms, displacements, loss, homodyne
//!   statistics and sampling.
//! * [`network`] — the cluster-generation unitary, its beam-splitter
//!   decomposition, and the graph conditions that certify it.
//! * [`tec`] — cluster preparation, phase-displacement error injection,
//!   syndrome measurement, decoder-table generation, and feedforward
//!   correction.
//! * [`analysis`] — closed-form error rates, the exact 64-pattern
//!   enumeration oracle, Monte Carlo estimation, and parameter sweeps.
//!
//! [`golden`] embeds the reference syndrome tables used to validate the
//! generated decoder.

pub mod analysis;
pub mod error;
pub mod gaussian;
pub mod golden;
pub mod network;
pub mod tec;

pub use analysis::{
    analytic_p1, analytic_p2, analytic_p3, brute_force_rate, monte_carlo_rate, rate_sweep,
    squeezing_sweep, uniform_grid, weight_class_counts, MonteCarloEstimate, RateCurvePoint,
    SweepPoint,
};
pub use error::CoreError;
pub use golden::{diff_against_golden, golden_rows, GoldenMismatch, GoldenRow};
pub use gaussian::{
    db_to_r, r_to_db, symplectic_form, GaussianState, QuadratureCombination,
    SymplecticTransform, VACUUM_VARIANCE,
};
pub use network::{
    compose_network, reference_adjacency, reference_network_spec, reference_unitary,
    verify_cluster_condition, AdjacencyMatrix, BsSign, ClusterReport, ComplexModeMap,
    NetworkElement, NetworkSpec, NETWORK_TOL,
};
pub use tec::{
    apply_correction, build_decoder, classify, corrected_variance, decode, inject,
    measure_syndromes, prepare_cluster, run_trial, ActionKind, AmplitudeModel, ClusterConfig,
    CorrectionAction, DecoderTable, ErrorPattern, MeasureMode, SignMode, Signature, StateSource,
    SyndromeVector, TecResult, Ternary, PROTECTED_PAIRS,
};

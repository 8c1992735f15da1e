//! Simulation of open quantum dynamics through minimal Sz.-Nagy unitary
//! dilations of Kraus operators.
//!
//! A channel `ρ ↦ Σ_k M_k ρ M_k†` is evolved without ever applying a
//! non-unitary matrix to a state: every Kraus operator (a contraction) is
//! embedded in a block unitary whose compression to the system space
//! reproduces it. Populations and observable expectation values are then
//! read from the dilated output vectors, either exactly or through simulated
//! projection measurements.
//!
//! Two pipelines are provided:
//!
//! - the **ensemble method**, which evolves each pure component `|φ_i⟩` of a
//!   known mixture `ρ = Σ_i p_i |φ_i⟩⟨φ_i|` through `n`-dimensional dilations;
//! - the **vectorized method**, which flattens `ρ` row-major and evolves it
//!   through dilations of the Kronecker lifts `M ⊗ I` and `I ⊗ M̄`.
//!
//! The crate is `no_std` (it needs `alloc`). Enable the `std` feature for
//! `std::error::Error` interop in downstream binaries.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod dilation;
pub mod error;
pub mod evolve;
pub mod gatecount;
pub mod grid;
pub mod matrix;
pub mod sampler;

mod eigen;

pub use channel::{
    amplitude_damping_kraus, apply_channel_oracle, ensemble_to_density, validate_kraus,
    DensityMatrix, KrausSet, PureStateEnsemble, ValidationReport,
};
pub use dilation::{defect, dilate, pad_input, project_h, Dilation};
pub use error::{Error, Result};
pub use evolve::{build_observable, BranchId, BranchOutput, Method, Observable};
pub use gatecount::{
    complexity_report, count_lower_nonzeros, two_level_decompose, ComplexityReport, TwoLevelGate,
};
pub use grid::TimeGrid;
pub use matrix::{ComplexMatrix, ComplexVector, C64};
pub use sampler::ShotRecord;

/// Default absolute tolerance for max-norm equality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Pivot tolerance used when factoring positive-semidefinite matrices.
pub const PIVOT_TOL: f64 = 1e-12;

/// Slack allowed on `‖A‖ ≤ 1` before an operator is rejected as a non-contraction.
pub const CONTRACTION_TOL: f64 = 1e-8;

/// Tolerance applied when validating user-supplied density matrices and ensembles.
pub const STATE_TOL: f64 = 1e-9;

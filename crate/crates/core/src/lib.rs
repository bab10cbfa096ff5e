// SPDX-License-Identifier: Apache-2.0

//! Linearized Gaussian model of a driven cavity with a vibrating end mirror
//! and a single two-level atom coupled through the Hermite-Gauss mode
//! structure of the field.
//!
//! The pipeline mirrors the physics:
//!
//! 1. [`params`] turns a user configuration into physical rates.
//! 2. [`steady_state`] finds the semiclassical fixed point of the nonlinear
//!    drift.
//! 3. [`dynamics`] linearizes around it and decides stability.
//! 4. [`gaussian`] solves the Lyapunov equation for the stationary covariance
//!    matrix and evaluates bipartite logarithmic negativities.
//! 5. [`spectrum`] evaluates the mirror displacement spectrum and counts its
//!    normal-mode peaks.
//!
//! [`modes`] holds the cavity-mode geometry and the Lamb-Dicke nonlinearity
//! function; it is independent of the dynamical pipeline.

pub mod config;
pub mod constants;
pub mod dynamics;
pub mod gaussian;
pub mod linalg;
pub mod modes;
pub mod params;
pub mod quadrature;
pub mod spectrum;
pub mod steady_state;

pub use config::{parse_config, read_config, ConfigError};
pub use dynamics::{
    build_drift_matrix, drift_coefficients, stability, DriftCoefficients, DriftMatrix, StabilityVerdict,
};
pub use gaussian::{
    log_negativity, reduce_bipartite, solve_lyapunov, BipartiteCM, CovarianceMatrix,
    DiffusionMatrix, GaussianError, NegativityResult, Pair,
};
pub use modes::{nonlinearity_f, CavityGeometry, ModeIndex, NonlinearityQuery};
pub use params::{derive_parameters, CavityDetuning, InputLevel, ParamsError, SystemConfig, SystemParams};
pub use spectrum::{
    displacement_spectrum, integrate_spectrum, spectral_density, ModeStructure, SpectrumError, SpectrumSeries,
};
pub use steady_state::{
    classical_drift, required_drive, solve_steady_state, steady_state_for_amplitude, Amplitudes, SteadyState,
    SteadyStateError,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

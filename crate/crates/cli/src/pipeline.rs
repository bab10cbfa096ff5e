// SPDX-License-Identifier: Apache-2.0

//! One parameter point through the whole chain: steady state, drift,
//! stability, covariance and the three pairwise negativities.

use optomech::gaussian::{lyapunov_residual, solve_lyapunov_unchecked};
use optomech::linalg::inf_norm;
use optomech::{
    build_drift_matrix, derive_parameters, log_negativity, reduce_bipartite, solve_steady_state, stability,
    steady_state_for_amplitude, CovarianceMatrix, DiffusionMatrix, DriftMatrix, GaussianError, Pair, ParamsError,
    StabilityVerdict, SteadyState, SteadyStateError, SystemConfig, SystemParams, C64,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PointError {
    #[error(transparent)]
    Params(#[from] ParamsError),
    #[error(transparent)]
    Steady(#[from] SteadyStateError),
    #[error(transparent)]
    Gaussian(#[from] GaussianError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Negativities {
    pub mirror_atom: f64,
    pub field_atom: f64,
    pub mirror_field: f64,
}

impl Negativities {
    pub fn get(&self, pair: Pair) -> f64 {
        match pair {
            Pair::MirrorAtom => self.mirror_atom,
            Pair::FieldAtom => self.field_atom,
            Pair::MirrorField => self.mirror_field,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stationary {
    pub diffusion: DiffusionMatrix,
    pub covariance: CovarianceMatrix,
    /// ‖AV + VAᵀ + D‖_∞.
    pub lyapunov_residual: f64,
    pub negativities: Negativities,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointAnalysis {
    pub params: SystemParams,
    pub steady: SteadyState,
    pub drift: DriftMatrix,
    pub verdict: StabilityVerdict,
    /// Present only for stable points.
    pub stationary: Option<Stationary>,
}

/// Fixed point for the drive or pinned field amplitude carried by `params`.
pub fn steady_state(params: &SystemParams) -> Result<SteadyState, SteadyStateError> {
    match params.field_amplitude {
        Some(alpha) => steady_state_for_amplitude(C64::new(alpha, 0.0), params),
        None => solve_steady_state(params, C64::new(params.drive_e, 0.0)),
    }
}

pub fn analyze(config: &SystemConfig) -> Result<PointAnalysis, PointError> {
    analyze_params(&derive_parameters(config)?)
}

pub fn analyze_params(params: &SystemParams) -> Result<PointAnalysis, PointError> {
    let steady = steady_state(params)?;
    let drift = build_drift_matrix(&steady, params);
    let verdict = stability(&drift);
    let stationary = if verdict.stable {
        let diffusion = DiffusionMatrix::new(params);
        let covariance = solve_lyapunov_unchecked(&drift.a, &diffusion.d)?;
        let e_n = |pair| log_negativity(&reduce_bipartite(&covariance, pair)).map(|r| r.e_n);
        Some(Stationary {
            diffusion,
            covariance,
            lyapunov_residual: inf_norm(&lyapunov_residual(&drift.a, &covariance.v, &diffusion.d)),
            negativities: Negativities {
                mirror_atom: e_n(Pair::MirrorAtom)?,
                field_atom: e_n(Pair::FieldAtom)?,
                mirror_field: e_n(Pair::MirrorField)?,
            },
        })
    } else {
        None
    };
    Ok(PointAnalysis {
        params: *params,
        steady,
        drift,
        verdict,
        stationary,
    })
}

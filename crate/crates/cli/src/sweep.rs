// SPDX-License-Identifier: Apache-2.0

//! One-dimensional parameter sweeps over a base configuration.

use std::fmt;
use std::str::FromStr;

use optomech::spectrum::symmetric_grid;
use optomech::{derive_parameters, displacement_spectrum, SystemConfig};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::output::MapCell;
use crate::pipeline::{analyze_params, PointAnalysis};

/// Spectrum grid used when a sweep also counts normal modes.
pub const SPECTRUM_POINTS: usize = 2001;
pub const SPECTRUM_HALF_SPAN: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("sweep needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("sweep range must be finite with start < stop, got [{start}, {stop}]")]
    BadRange { start: f64, stop: f64 },
    #[error("unknown sweep variable `{0}` (expected delta_a, delta_f, eta, temperature, drive or field_amplitude)")]
    UnknownVariable(String),
    #[error("`{0}` cannot be swept in a configuration without an effective block")]
    NotApplicable(&'static str),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    DeltaA,
    DeltaF,
    Eta,
    Temperature,
    Drive,
    FieldAmplitude,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::DeltaA => "delta_a",
            SweepVariable::DeltaF => "delta_f",
            SweepVariable::Eta => "eta",
            SweepVariable::Temperature => "temperature",
            SweepVariable::Drive => "drive",
            SweepVariable::FieldAmplitude => "field_amplitude",
        }
    }

    /// Copy of `base` with this variable set to `value`. Rates are in the
    /// config's own units. The detuning keeps its kind (effective or bare);
    /// setting the drive releases a pinned field amplitude.
    pub fn apply(self, base: &SystemConfig, value: f64) -> Result<SystemConfig, SweepError> {
        let mut cfg = base.clone();
        match self {
            SweepVariable::DeltaA => cfg.delta_a = value,
            SweepVariable::DeltaF => cfg.detuning = cfg.detuning.with_value(value),
            SweepVariable::Eta => {
                let eff = cfg.effective.as_mut().ok_or(SweepError::NotApplicable("eta"))?;
                eff.eta = value;
            }
            SweepVariable::Temperature => cfg.temperature = value,
            SweepVariable::Drive => {
                cfg.drive = Some(value);
                cfg.field_amplitude = None;
            }
            SweepVariable::FieldAmplitude => cfg.field_amplitude = Some(value),
        }
        Ok(cfg)
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "delta_a" => Ok(SweepVariable::DeltaA),
            "delta_f" => Ok(SweepVariable::DeltaF),
            "eta" => Ok(SweepVariable::Eta),
            "temperature" => Ok(SweepVariable::Temperature),
            "drive" => Ok(SweepVariable::Drive),
            "field_amplitude" => Ok(SweepVariable::FieldAmplitude),
            other => Err(SweepError::UnknownVariable(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub base: SystemConfig,
    /// Also classify the displacement spectrum at every stable point.
    pub spectrum: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), SweepError> {
        if self.count < 2 {
            return Err(SweepError::TooFewPoints(self.count));
        }
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(SweepError::BadRange {
                start: self.start,
                stop: self.stop,
            });
        }
        Ok(())
    }

    /// Equally spaced values, both endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub value: f64,
    pub e_n_am: Option<f64>,
    pub e_n_fa: Option<f64>,
    pub e_n_mf: Option<f64>,
    pub stable: bool,
    pub residual_norm: Option<f64>,
    pub lyapunov_residual: Option<f64>,
    pub max_real_eigenvalue: Option<f64>,
    pub method_agreement: Option<bool>,
    pub root_count: Option<usize>,
    pub mode_count: Option<usize>,
    pub error: Option<String>,
}

impl SweepRecord {
    fn failed(value: f64, error: String) -> Self {
        SweepRecord {
            value,
            e_n_am: None,
            e_n_fa: None,
            e_n_mf: None,
            stable: false,
            residual_norm: None,
            lyapunov_residual: None,
            max_real_eigenvalue: None,
            method_agreement: None,
            root_count: None,
            mode_count: None,
            error: Some(error),
        }
    }

    pub fn from_analysis(value: f64, point: &PointAnalysis) -> Self {
        let st = point.stationary.as_ref();
        SweepRecord {
            value,
            e_n_am: st.map(|s| s.negativities.mirror_atom),
            e_n_fa: st.map(|s| s.negativities.field_atom),
            e_n_mf: st.map(|s| s.negativities.mirror_field),
            stable: st.is_some(),
            residual_norm: Some(point.steady.residual_norm),
            lyapunov_residual: st.map(|s| s.lyapunov_residual),
            max_real_eigenvalue: Some(point.verdict.max_real_eigenvalue),
            method_agreement: Some(point.verdict.method_agreement),
            root_count: Some(point.steady.root_count),
            mode_count: None,
            error: None,
        }
    }
}

/// Full analysis of one grid point; every failure stays inside the record.
pub fn evaluate_point(spec: &SweepSpec, value: f64) -> SweepRecord {
    let params = match spec
        .variable
        .apply(&spec.base, value)
        .map_err(|e| e.to_string())
        .and_then(|cfg| derive_parameters(&cfg).map_err(|e| e.to_string()))
    {
        Ok(p) => p,
        Err(e) => return SweepRecord::failed(value, e),
    };
    let point = match analyze_params(&params) {
        Ok(p) => p,
        Err(e) => return SweepRecord::failed(value, e.to_string()),
    };
    let mut record = SweepRecord::from_analysis(value, &point);
    if spec.spectrum {
        if let Some(st) = &point.stationary {
            let grid: Vec<f64> = symmetric_grid(SPECTRUM_HALF_SPAN, SPECTRUM_POINTS)
                .into_iter()
                .map(|x| x * params.omega_m)
                .collect();
            match displacement_spectrum(&point.drift, &st.diffusion, &grid) {
                Ok(series) => record.mode_count = Some(series.mode_count),
                Err(e) => record.error = Some(e.to_string()),
            }
        }
    }
    record
}

/// Evaluates every grid point on `jobs` workers (0 picks the default).
/// Records come back in grid order whatever the scheduling.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<Vec<SweepRecord>, SweepError> {
    spec.validate()?;
    let grid = spec.grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    Ok(pool.install(|| grid.par_iter().map(|&v| evaluate_point(spec, v)).collect()))
}

/// Stability verdicts over the Δ_a grid of `delta_a` crossed with the grid
/// of `second`, row-major in Δ_a. The base configuration is `delta_a.base`.
pub fn stability_map(
    delta_a: &SweepSpec,
    second: &SweepSpec,
    jobs: usize,
) -> Result<Vec<MapCell>, SweepError> {
    delta_a.validate()?;
    second.validate()?;
    let cells: Vec<(f64, f64)> = delta_a
        .grid()
        .into_iter()
        .flat_map(|x| second.grid().into_iter().map(move |y| (x, y)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let eval = |&(x, y): &(f64, f64)| -> MapCell {
        let params = SweepVariable::DeltaA
            .apply(&delta_a.base, x)
            .and_then(|cfg| second.variable.apply(&cfg, y))
            .map_err(|e| e.to_string())
            .and_then(|cfg| derive_parameters(&cfg).map_err(|e| e.to_string()));
        let point = params.and_then(|p| analyze_params(&p).map_err(|e| e.to_string()));
        match point {
            Ok(p) => MapCell {
                delta_a: x,
                second: y,
                stable: p.verdict.stable,
                max_real_eigenvalue: Some(p.verdict.max_real_eigenvalue),
                method_agreement: Some(p.verdict.method_agreement),
                root_count: Some(p.steady.root_count),
                error: None,
            },
            Err(e) => MapCell {
                delta_a: x,
                second: y,
                stable: false,
                max_real_eigenvalue: None,
                method_agreement: None,
                root_count: None,
                error: Some(e),
            },
        }
    };
    Ok(pool.install(|| cells.par_iter().map(eval).collect()))
}

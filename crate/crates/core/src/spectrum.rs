// SPDX-License-Identifier: Apache-2.0

//! Mirror displacement spectrum and its normal-mode peaks.
//!
//! With u(ω) = ∫u(t)e^{iωt}dt the stationary spectrum is
//! S(ω) = (A + iωI)⁻¹ D (A + iωI)⁻ᴴ and V = (1/2π)∫S(ω)dω.

use nalgebra::SVector;
use thiserror::Error;

use crate::constants::TWO_PI;
use crate::dynamics::{stability, DriftMatrix};
use crate::gaussian::DiffusionMatrix;
use crate::linalg::{eigenvalues, CMat6, Mat6};
use crate::quadrature::{integrate, QuadratureNotConverged};
use crate::C64;

/// Minimum peak prominence as a fraction of the global maximum.
pub const PROMINENCE_FRACTION: f64 = 0.05;
/// Half-width of the integration window in units of ω_m.
pub const INTEGRATION_SPAN: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SpectrumError {
    #[error("drift matrix is not stable (max Re λ = {max_real_eigenvalue:e})")]
    UnstableDrift { max_real_eigenvalue: f64 },
    #[error("A + iωI is singular at ω = {0}")]
    Singular(f64),
    #[error("frequency grid must be finite and sorted")]
    InvalidGrid,
    #[error(transparent)]
    Quadrature(#[from] QuadratureNotConverged),
}

fn require_stable(drift: &DriftMatrix) -> Result<(), SpectrumError> {
    let v = stability(drift);
    if v.stable {
        Ok(())
    } else {
        Err(SpectrumError::UnstableDrift {
            max_real_eigenvalue: v.max_real_eigenvalue,
        })
    }
}

fn shifted(a: &Mat6, omega: f64) -> CMat6 {
    a.map(|x| C64::new(x, 0.0)) + CMat6::identity() * C64::new(0.0, omega)
}

fn complex(d: &Mat6) -> CMat6 {
    d.map(|x| C64::new(x, 0.0))
}

/// Full 6×6 spectral matrix at one frequency.
pub fn spectral_density(drift: &DriftMatrix, diffusion: &DiffusionMatrix, omega: f64) -> Result<CMat6, SpectrumError> {
    require_stable(drift)?;
    let lu = shifted(&drift.a, omega).lu();
    let y = lu.solve(&complex(&diffusion.d)).ok_or(SpectrumError::Singular(omega))?;
    let z = lu.solve(&y.adjoint()).ok_or(SpectrumError::Singular(omega))?;
    Ok(z.adjoint())
}

/// S_ii(ω) from the i-th row of (A + iωI)⁻¹, without forming the full matrix.
fn diagonal_element(a: &Mat6, d: &Mat6, index: usize, omega: f64) -> Result<f64, SpectrumError> {
    let mut e = SVector::<C64, 6>::zeros();
    e[index] = C64::new(1.0, 0.0);
    let row = shifted(a, omega)
        .transpose()
        .lu()
        .solve(&e)
        .ok_or(SpectrumError::Singular(omega))?;
    let dy = complex(d) * row.conjugate();
    Ok(row.dot(&dy).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub omega: f64,
    pub height: f64,
    pub prominence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeStructure {
    /// No peak on the non-negative axis.
    Featureless,
    /// One peak per sideband.
    TwoMode,
    /// Split or extra structure per sideband.
    ThreeMode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub omegas: Vec<f64>,
    pub values: Vec<f64>,
    pub peaks: Vec<Peak>,
    /// Peaks with ω ≥ 0.
    pub mode_count: usize,
}

impl SpectrumSeries {
    pub fn structure(&self) -> ModeStructure {
        match self.mode_count {
            0 => ModeStructure::Featureless,
            1 => ModeStructure::TwoMode,
            _ => ModeStructure::ThreeMode,
        }
    }
}

/// `points` equally spaced frequencies on [−half_span, half_span].
pub fn symmetric_grid(half_span: f64, points: usize) -> Vec<f64> {
    let n = points.max(2);
    (0..n)
        .map(|k| -half_span + 2.0 * half_span * k as f64 / (n - 1) as f64)
        .collect()
}

/// Local maxima with their topographic prominence. A flat top counts once,
/// at its middle sample.
pub fn find_peaks(xs: &[f64], ys: &[f64], min_prominence: f64) -> Vec<Peak> {
    let n = ys.len();
    let mut peaks = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if ys[i] > ys[i - 1] {
            let mut j = i;
            while j + 1 < n && ys[j + 1] == ys[i] {
                j += 1;
            }
            if j + 1 < n && ys[j + 1] < ys[i] {
                let mid = (i + j) / 2;
                let h = ys[mid];
                let left = ys[..i].iter().rev().take_while(|&&y| y <= h).fold(h, |m, &y| m.min(y));
                let right = ys[j + 1..].iter().take_while(|&&y| y <= h).fold(h, |m, &y| m.min(y));
                let prominence = h - left.max(right);
                if prominence >= min_prominence {
                    peaks.push(Peak {
                        omega: xs[mid],
                        height: h,
                        prominence,
                    });
                }
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    peaks
}

/// S_q(ω) on `grid` with its peaks and normal-mode count.
pub fn displacement_spectrum(
    drift: &DriftMatrix,
    diffusion: &DiffusionMatrix,
    grid: &[f64],
) -> Result<SpectrumSeries, SpectrumError> {
    if grid.iter().any(|w| !w.is_finite()) || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpectrumError::InvalidGrid);
    }
    require_stable(drift)?;
    let values = grid
        .iter()
        .map(|&w| diagonal_element(&drift.a, &diffusion.d, 0, w).map(|s| s.max(0.0)))
        .collect::<Result<Vec<_>, _>>()?;
    let top = values.iter().copied().fold(0.0, f64::max);
    let peaks = find_peaks(grid, &values, PROMINENCE_FRACTION * top);
    let mode_count = peaks.iter().filter(|p| p.omega >= 0.0).count();
    Ok(SpectrumSeries {
        omegas: grid.to_vec(),
        values,
        peaks,
        mode_count,
    })
}

/// (1/2π)∫S_ii(ω)dω over the real line: adaptive quadrature on
/// [−40ω_m, 40ω_m], split at the resonances of A, plus a 1/ω² tail.
pub fn integrate_diagonal(drift: &DriftMatrix, diffusion: &DiffusionMatrix, index: usize) -> Result<f64, SpectrumError> {
    require_stable(drift)?;
    let span = INTEGRATION_SPAN * drift.omega_m;
    let mut cuts = vec![-span, span, 0.0];
    for z in eigenvalues(&drift.a).unwrap_or_default() {
        let (center, width) = (z.im.abs(), z.re.abs());
        for s in [-1.0, 1.0] {
            for k in [0.0, -1.0, 1.0, -10.0, 10.0, -100.0, 100.0] {
                cuts.push(s * (center + k * width));
            }
        }
    }
    cuts.retain(|w| w.abs() <= span);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * span);

    let mut failure = None;
    let mut f = |w: f64| match diagonal_element(&drift.a, &diffusion.d, index, w) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (v, _) = integrate(&mut f, seg[0], seg[1], 0.0, 1e-8, 4000)?;
        total += v;
    }
    // S ~ C/ω² beyond the window on both sides.
    let tail = (f(span) + f(-span)) * span;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((total + tail) / TWO_PI)
}

/// (1/2π)∫S_q(ω)dω, to be compared with V₁₁.
pub fn integrate_spectrum(drift: &DriftMatrix, diffusion: &DiffusionMatrix) -> Result<f64, SpectrumError> {
    integrate_diagonal(drift, diffusion, 0)
}

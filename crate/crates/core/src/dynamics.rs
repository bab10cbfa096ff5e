// SPDX-License-Identifier: Apache-2.0

//! Linearized fluctuation dynamics around a fixed point.
//!
//! Quadratures are ordered `[δq, δp, δX_a, δY_a, δX_c, δY_c]`: mirror,
//! cavity field, atom.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::linalg::{characteristic_polynomial, eigenvalues, routh_hurwitz, Mat6};
use crate::params::SystemParams;
use crate::steady_state::{classical_drift, real_jacobian, wirtinger_partials, Amplitudes, SteadyState};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DynamicsError {
    #[error("drift matrix has a non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
}

/// The 6×6 drift matrix A together with the mechanical frequency that sets
/// the stability margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub a: Mat6,
    pub omega_m: f64,
}

impl DriftMatrix {
    pub fn new(a: Mat6, omega_m: f64) -> Result<Self, DynamicsError> {
        if let Some(k) = a.iter().position(|x| !x.is_finite()) {
            return Err(DynamicsError::NonFinite(k % 6, k / 6));
        }
        Ok(DriftMatrix { a, omega_m })
    }

    /// Stability margin ε = 1e−9·ω_m.
    pub fn margin(&self) -> f64 {
        1e-9 * self.omega_m
    }
}

/// A at a certified steady state, by analytic linearization.
pub fn build_drift_matrix(ss: &SteadyState, params: &SystemParams) -> DriftMatrix {
    let partials = wirtinger_partials(&ss.amplitudes(), params, ss.delta_0f);
    DriftMatrix {
        a: real_jacobian(&partials),
        omega_m: params.omega_m,
    }
}

/// Central-difference Jacobian of the drift at the fixed point, with one
/// level of Richardson extrapolation and steps h = 1e−6·(1 + |u_i|).
pub fn finite_difference_jacobian(ss: &SteadyState, params: &SystemParams) -> Mat6 {
    let pinned = params.with_bare_detuning(ss.delta_0f);
    let x = ss.amplitudes().to_real();
    let f = |v: &nalgebra::SVector<f64, 6>| classical_drift(&Amplitudes::from_real(v), &pinned, ss.drive_e).to_real();
    let mut j = Mat6::zeros();
    for col in 0..6 {
        let central = |h: f64| {
            let mut up = x;
            let mut dn = x;
            up[col] += h;
            dn[col] -= h;
            (f(&up) - f(&dn)) / (2.0 * h)
        };
        let h = 1e-6 * (1.0 + x[col].abs());
        let coarse = central(h);
        let fine = central(0.5 * h);
        j.set_column(col, &((4.0 * fine - coarse) / 3.0));
    }
    j
}

/// Named coefficients of the closed-form drift table, evaluated at a fixed
/// point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftCoefficients {
    pub gamma_1m: f64,
    pub gamma_2m: f64,
    pub omega_1m: f64,
    pub omega_2m: f64,
    pub g1: C64,
    pub g2: C64,
    pub g3: C64,
    pub m1: C64,
    pub m2: C64,
    /// First of the two expressions labelled M_3.
    pub m3: C64,
    /// Second expression labelled M_3, used for the atom entries of the
    /// δp row.
    pub m3_alt: C64,
    pub m4: C64,
    pub m5: C64,
    /// N_i without the overall G.
    pub n1: C64,
    pub n2: C64,
    pub n3: C64,
    pub xi: C64,
}

pub fn drift_coefficients(ss: &SteadyState, params: &SystemParams) -> DriftCoefficients {
    let (a, b, c) = (ss.alpha_s, ss.b_s, ss.c_s);
    let g = params.g_eff;
    let eta2 = params.eta * params.eta;
    let h = 1.0 - eta2 * b.norm_sqr();
    let half = 0.5 * eta2;
    let m4 = -g * eta2 * a * (b.conj() * c.conj() + c * b - c.conj() * b);
    let m5 = -g * eta2 * a * (b.conj() * c.conj() + c * b + c.conj() * b);
    DriftCoefficients {
        gamma_1m: params.gamma_m + m4.im,
        gamma_2m: params.gamma_m + m5.im,
        omega_1m: params.omega_m + m4.re,
        omega_2m: params.omega_m + m5.re,
        g1: g * (c.conj() * h + half * c * b * b),
        g2: g * b.conj() * (1.0 - half * b.norm_sqr()),
        g3: g * (c.conj() * h - half * c * b * b),
        m1: -g * a * (h + half * (b * b).conj()),
        m2: g * a * (h - half * (b * b).conj()),
        m3: g * c * (h + half * b * b),
        m3_alt: g * c * (h - half * b * b),
        m4,
        m5,
        n1: b * (1.0 - half * b.norm_sqr()),
        n2: -a * (h + half * b * b),
        n3: a * (h - half * b * b),
        xi: ss.xi,
    }
}

impl DriftCoefficients {
    /// The closed-form 6×6 layout filled from these coefficients, with Δ_f and
    /// the bare rates taken from `ss` and `params`. N_i enter multiplied by G.
    pub fn render(&self, ss: &SteadyState, params: &SystemParams) -> Mat6 {
        let g = params.g_eff;
        let (k, df, ga, da) = (params.kappa, ss.delta_f, params.gamma_a, params.delta_a);
        let (n1, n2, n3) = (self.n1 * g, self.n2 * g, self.n3 * g);
        let s = self;
        #[rustfmt::skip]
        let rows = [
            -s.gamma_1m, s.omega_1m, -s.m2.im, s.m2.re, -s.m1.im, s.m1.re,
            -s.omega_2m, -s.gamma_2m, -s.m2.re, -s.m2.im, -s.m3_alt.re, -s.m3_alt.im,
            -s.g1.im, s.g1.re, -k, df, -s.g2.im, s.g2.re,
            s.xi.re - s.g3.re, -s.g3.im, -df, -k, -s.g2.re, -s.g2.im,
            -n2.im, n2.re, -n1.im, n1.re, -ga, da,
            -n3.re, -n3.im, -n1.re, -n1.im, -da, -ga,
        ];
        Mat6::from_row_slice(&rows)
    }
}

/// One entry where the closed-form layout and the linearization disagree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntryMismatch {
    pub row: usize,
    pub col: usize,
    pub closed_form: f64,
    pub linearized: f64,
}

/// Entries (zero-based) of the closed-form layout that differ from A by more
/// than `rel_tol·‖A‖_max`.
pub fn layout_mismatches(
    ss: &SteadyState,
    params: &SystemParams,
    drift: &DriftMatrix,
    rel_tol: f64,
) -> Vec<EntryMismatch> {
    let table = drift_coefficients(ss, params).render(ss, params);
    let scale = drift.a.amax().max(f64::MIN_POSITIVE);
    (0..6)
        .flat_map(|row| (0..6).map(move |col| (row, col)))
        .filter(|&(r, c)| (table[(r, c)] - drift.a[(r, c)]).abs() > rel_tol * scale)
        .map(|(row, col)| EntryMismatch {
            row,
            col,
            closed_form: table[(row, col)],
            linearized: drift.a[(row, col)],
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub max_real_eigenvalue: f64,
    /// Routh-Hurwitz and eigenvalue verdicts coincide.
    pub method_agreement: bool,
    /// Routh-Hurwitz verdict, absent when its table broke down.
    pub routh_hurwitz: Option<bool>,
}

/// Stable when every eigenvalue has real part below −ε (ε = 1e−9·ω_m),
/// judged both from the eigenvalues and from the Routh-Hurwitz table of
/// the characteristic polynomial of A + εI. When one method breaks down the
/// other decides alone and `method_agreement` is false; when both do, the
/// point is reported unstable.
pub fn stability(drift: &DriftMatrix) -> StabilityVerdict {
    let eps = drift.margin();
    let max_re = eigenvalues(&drift.a)
        .map(|ev| ev.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max))
        .unwrap_or(f64::NAN);
    let by_eigen = (!max_re.is_nan()).then_some(max_re < -eps);

    let shifted = drift.a + Mat6::identity() * eps;
    let scale = shifted.amax();
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let normalized = DMatrix::from_iterator(6, 6, shifted.iter().map(|x| x / scale));
    let routh = routh_hurwitz(&characteristic_polynomial(&normalized)).ok();

    let (stable, method_agreement) = match (by_eigen, routh) {
        (Some(e), Some(r)) => (e && r, e == r),
        (Some(v), None) | (None, Some(v)) => (v, false),
        (None, None) => (false, false),
    };
    StabilityVerdict {
        stable,
        max_real_eigenvalue: max_re,
        method_agreement,
        routh_hurwitz: routh,
    }
}

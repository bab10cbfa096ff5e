// SPDX-License-Identifier: Apache-2.0

//! Semiclassical fixed points of the truncated drift.
//!
//! Amplitudes are packed into real 6-vectors in the order
//! `[Re b, Im b, Re α, Im α, Re c, Im c]` (mirror, field, atom), the same
//! order used for the quadrature fluctuations.

use nalgebra::{DMatrix, DVector, SMatrix, SVector};
use num_complex::ComplexFloat;
use thiserror::Error;

use crate::linalg::try_eigenvalues;
use crate::params::{CavityDetuning, SystemParams};
use crate::C64;

type Vec6 = SVector<f64, 6>;
type Vec4 = SVector<f64, 4>;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Amplitudes {
    /// Cavity field α.
    pub field: C64,
    /// Mirror b.
    pub mirror: C64,
    /// Atomic polarization c.
    pub atom: C64,
}

impl Amplitudes {
    pub fn new(field: C64, mirror: C64, atom: C64) -> Self {
        Amplitudes { field, mirror, atom }
    }

    pub fn to_real(&self) -> Vec6 {
        Vec6::new(
            self.mirror.re,
            self.mirror.im,
            self.field.re,
            self.field.im,
            self.atom.re,
            self.atom.im,
        )
    }

    pub fn from_real(v: &Vec6) -> Self {
        Amplitudes {
            mirror: C64::new(v[0], v[1]),
            field: C64::new(v[2], v[3]),
            atom: C64::new(v[4], v[5]),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.field.norm_sqr() + self.mirror.norm_sqr() + self.atom.norm_sqr()).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum SteadyStateError {
    #[error("fixed point not reached after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("amplitude diverged to {norm:e}")]
    DivergedAmplitude { norm: f64 },
    #[error("non-finite {0}")]
    NonFinite(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Residual tolerance relative to max(1, ‖state‖·ω_m).
    pub rel_tol: f64,
    pub max_iterations: usize,
    pub homotopy_steps: usize,
    pub divergence_bound: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rel_tol: 1e-12,
            max_iterations: 10_000,
            homotopy_steps: 20,
            divergence_bound: 1e12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub alpha_s: C64,
    pub b_s: C64,
    pub c_s: C64,
    /// Effective detuning Δ_f = Δ_0f − 2ξ_0 Re b_s.
    pub delta_f: f64,
    /// Laser detuning Δ_0f.
    pub delta_0f: f64,
    /// ξ = 2ξ_0 α_s.
    pub xi: C64,
    pub drive_e: C64,
    pub residual_norm: f64,
    /// Number of distinct fixed points found at this drive.
    pub root_count: usize,
    pub iterations: usize,
}

impl SteadyState {
    pub fn amplitudes(&self) -> Amplitudes {
        Amplitudes::new(self.alpha_s, self.b_s, self.c_s)
    }

    pub fn bistable(&self) -> bool {
        self.root_count > 1
    }
}

/// Δ_0f seen by a field when the mirror sits at `b`.
pub fn bare_detuning(params: &SystemParams, b: C64) -> f64 {
    match params.detuning {
        CavityDetuning::Bare(d) => d,
        CavityDetuning::Effective(d) => d + 2.0 * params.xi0 * b.re,
    }
}

/// Time derivatives of the classical amplitudes. With an effective
/// detuning in `params`, Δ_0f follows the mirror; pin it with
/// [`SystemParams::with_bare_detuning`] to linearize around a fixed point.
pub fn classical_drift(state: &Amplitudes, params: &SystemParams, drive: C64) -> Amplitudes {
    let Amplitudes { field: a, mirror: b, atom: c } = *state;
    let (g, xi0) = (params.g_eff, params.xi0);
    let eta2 = params.eta * params.eta;
    let nb = b.norm_sqr();
    let f = 1.0 - 0.5 * eta2 * nb;
    let delta_0f = bare_detuning(params, b);

    let dc = -C64::new(params.gamma_a, params.delta_a) * c - I * g * f * a * b.conj();
    let da = -C64::new(params.kappa, delta_0f) * a + I * xi0 * a * (b + b.conj()) - I * g * f * b * c + drive;
    let db = -C64::new(params.gamma_m, params.omega_m) * b + I * xi0 * a.norm_sqr()
        - I * g * ((1.0 - eta2 * nb) * a * c.conj() - 0.5 * eta2 * a.conj() * c * b * b);
    Amplitudes { field: da, mirror: db, atom: dc }
}

/// Wirtinger derivatives (∂F/∂z, ∂F/∂z*) at a fixed laser detuning.
/// Rows are equations and columns amplitudes, both ordered mirror, field, atom.
pub(crate) type Partials = [[(C64, C64); 3]; 3];

pub(crate) fn wirtinger_partials(state: &Amplitudes, params: &SystemParams, delta_0f: f64) -> Partials {
    let Amplitudes { field: a, mirror: b, atom: c } = *state;
    let (g, xi0) = (params.g_eff, params.xi0);
    let eta2 = params.eta * params.eta;
    let nb = b.norm_sqr();
    let f = 1.0 - 0.5 * eta2 * nb;
    let h = 1.0 - eta2 * nb;
    let zero = C64::new(0.0, 0.0);

    let mirror = [
        (
            -C64::new(params.gamma_m, params.omega_m) + I * g * eta2 * (a * c.conj() * b.conj() + a.conj() * c * b),
            I * g * eta2 * a * b * c.conj(),
        ),
        (
            I * xi0 * a.conj() - I * g * h * c.conj(),
            I * xi0 * a + I * g * 0.5 * eta2 * c * b * b,
        ),
        (I * g * 0.5 * eta2 * a.conj() * b * b, -I * g * h * a),
    ];
    let field = [
        (I * xi0 * a - I * g * h * c, I * xi0 * a + I * g * 0.5 * eta2 * c * b * b),
        (-C64::new(params.kappa, delta_0f) + I * xi0 * (b + b.conj()), zero),
        (-I * g * f * b, zero),
    ];
    let atom = [
        (I * g * 0.5 * eta2 * a * b.conj() * b.conj(), -I * g * h * a),
        (-I * g * f * b.conj(), zero),
        (-C64::new(params.gamma_a, params.delta_a), zero),
    ];
    [mirror, field, atom]
}

/// Real 6×6 Jacobian in the packed ordering.
pub(crate) fn real_jacobian(partials: &Partials) -> SMatrix<f64, 6, 6> {
    let mut j = SMatrix::<f64, 6, 6>::zeros();
    for (r, row) in partials.iter().enumerate() {
        for (s, &(p, q)) in row.iter().enumerate() {
            let (sum, diff) = (p + q, p - q);
            j[(2 * r, 2 * s)] = sum.re;
            j[(2 * r, 2 * s + 1)] = -diff.im;
            j[(2 * r + 1, 2 * s)] = sum.im;
            j[(2 * r + 1, 2 * s + 1)] = diff.re;
        }
    }
    j
}

/// Jacobian of the drift as the solver sees it, including the motion of
/// Δ_0f with the mirror when the effective detuning is held fixed.
fn solver_jacobian(state: &Amplitudes, params: &SystemParams) -> SMatrix<f64, 6, 6> {
    let mut partials = wirtinger_partials(state, params, bare_detuning(params, state.mirror));
    if let CavityDetuning::Effective(_) = params.detuning {
        let shift = -I * params.xi0 * state.field;
        partials[1][0].0 += shift;
        partials[1][0].1 += shift;
    }
    real_jacobian(&partials)
}

fn residual(x: &Vec6, params: &SystemParams, drive: C64) -> Vec6 {
    classical_drift(&Amplitudes::from_real(x), params, drive).to_real()
}

fn tolerance(x: &Vec6, params: &SystemParams, opts: &SolverOptions) -> f64 {
    opts.rel_tol * (x.norm() * params.omega_m).max(1.0)
}

/// One damped sweep: refresh b and c at fixed α, then relax α toward the
/// value that zeroes its own equation.
fn fixed_point_sweep(x: &Vec6, params: &SystemParams, drive: C64, damping: f64) -> Vec6 {
    let Amplitudes { field: a, mut mirror, mut atom } = Amplitudes::from_real(x);
    let eta2 = params.eta * params.eta;
    let g = params.g_eff;
    for _ in 0..3 {
        let nb = mirror.norm_sqr();
        let f = 1.0 - 0.5 * eta2 * nb;
        atom = -I * g * f * a * mirror.conj() / C64::new(params.gamma_a, params.delta_a);
        mirror = (I * params.xi0 * a.norm_sqr()
            - I * g * ((1.0 - eta2 * nb) * a * atom.conj() - 0.5 * eta2 * a.conj() * atom * mirror * mirror))
            / C64::new(params.gamma_m, params.omega_m);
    }
    let f = 1.0 - 0.5 * eta2 * mirror.norm_sqr();
    let delta_eff = bare_detuning(params, mirror) - 2.0 * params.xi0 * mirror.re;
    let target = (drive - I * g * f * mirror * atom) / C64::new(params.kappa, delta_eff);
    Amplitudes::new(a + damping * (target - a), mirror, atom).to_real()
}

/// Damped Newton with backtracking on an N-dimensional real system.
/// Returns the point and its residual norm once `tol(x)` is met.
fn newton<const N: usize>(
    mut x: SVector<f64, N>,
    residual: impl Fn(&SVector<f64, N>) -> SVector<f64, N>,
    jacobian: impl Fn(&SVector<f64, N>) -> SMatrix<f64, N, N>,
    tol: impl Fn(&SVector<f64, N>) -> f64,
    opts: &SolverOptions,
    iterations: &mut usize,
) -> Result<(SVector<f64, N>, f64), SteadyStateError> {
    let mut r = residual(&x);
    let mut rn = r.norm();
    loop {
        let norm = x.norm();
        if !rn.is_finite() || norm.is_nan() || norm > opts.divergence_bound {
            return Err(SteadyStateError::DivergedAmplitude { norm });
        }
        if rn <= tol(&x) {
            return Ok((x, rn));
        }
        if *iterations >= opts.max_iterations {
            return Err(SteadyStateError::NoConvergence {
                iterations: *iterations,
                residual: rn,
            });
        }
        *iterations += 1;
        let j = jacobian(&x);
        let step = DMatrix::from_column_slice(N, N, j.as_slice())
            .lu()
            .solve(&DVector::from_column_slice((-r).as_slice()))
            .map(|d| SVector::<f64, N>::from_column_slice(d.as_slice()))
            .ok_or(SteadyStateError::NoConvergence {
                iterations: *iterations,
                residual: rn,
            })?;
        let mut t = 1.0;
        loop {
            let trial = x + step * t;
            let tr = residual(&trial);
            let trn = tr.norm();
            if trn.is_finite() && (trn <= (1.0 - 1e-4 * t) * rn || t < 1e-3) {
                x = trial;
                r = tr;
                rn = trn;
                break;
            }
            t *= 0.5;
        }
    }
}

fn converge(
    start: Vec6,
    params: &SystemParams,
    drive: C64,
    opts: &SolverOptions,
    iterations: &mut usize,
) -> Result<(Vec6, f64), SteadyStateError> {
    let mut x = start;
    let mut rn = residual(&x, params, drive).norm();
    for _ in 0..50 {
        if rn <= tolerance(&x, params, opts) {
            break;
        }
        let y = fixed_point_sweep(&x, params, drive, 0.5);
        let yn = residual(&y, params, drive).norm();
        if yn.partial_cmp(&rn) != Some(std::cmp::Ordering::Less) {
            break;
        }
        *iterations += 1;
        x = y;
        rn = yn;
    }
    newton(
        x,
        |v| residual(v, params, drive),
        |v| solver_jacobian(&Amplitudes::from_real(v), params),
        |v| tolerance(v, params, opts),
        opts,
        iterations,
    )
}

pub fn solve_steady_state(params: &SystemParams, drive: C64) -> Result<SteadyState, SteadyStateError> {
    solve_steady_state_with(params, drive, &SolverOptions::default())
}

/// Fixed point on the branch that grows continuously from α = 0 as the
/// drive ramps up from zero.
pub fn solve_steady_state_with(
    params: &SystemParams,
    drive: C64,
    opts: &SolverOptions,
) -> Result<SteadyState, SteadyStateError> {
    if !(drive.re.is_finite() && drive.im.is_finite()) {
        return Err(SteadyStateError::NonFinite("drive"));
    }
    let mut iterations = 0;
    let mut x = Vec6::zeros();
    let mut rn = 0.0;
    let steps = opts.homotopy_steps.max(1);
    for k in 1..=steps {
        let e = drive * (k as f64 / steps as f64);
        (x, rn) = converge(x, params, e, opts, &mut iterations)?;
    }
    let state = Amplitudes::from_real(&x);
    let root_count = count_roots(params, drive, &x, opts);
    Ok(assemble(state, params, drive, rn, root_count, iterations))
}

fn assemble(
    s: Amplitudes,
    params: &SystemParams,
    drive: C64,
    residual_norm: f64,
    root_count: usize,
    iterations: usize,
) -> SteadyState {
    let delta_0f = bare_detuning(params, s.mirror);
    SteadyState {
        alpha_s: s.field,
        b_s: s.mirror,
        c_s: s.atom,
        delta_f: delta_0f - 2.0 * params.xi0 * s.mirror.re,
        delta_0f,
        xi: 2.0 * params.xi0 * s.field,
        drive_e: drive,
        residual_norm,
        root_count,
        iterations,
    }
}

/// Photon numbers n solving the atom-free intensity relation
/// n[κ² + (Δ − βn)²] = |E|², which seed the search for further roots.
fn intensity_seeds(params: &SystemParams, drive: C64) -> Vec<f64> {
    let e2 = drive.norm_sqr();
    if e2 == 0.0 {
        return vec![0.0];
    }
    let (delta, beta) = match params.detuning {
        CavityDetuning::Bare(d) => {
            let w = params.omega_m;
            (d, 2.0 * params.xi0 * params.xi0 * w / (w * w + params.gamma_m * params.gamma_m))
        }
        CavityDetuning::Effective(d) => (d, 0.0),
    };
    let k2 = params.kappa * params.kappa;
    if beta == 0.0 {
        return vec![e2 / (k2 + delta * delta)];
    }
    // β²n³ − 2Δβn² + (κ²+Δ²)n − |E|² via its companion matrix.
    let c2 = -2.0 * delta / beta;
    let c1 = (k2 + delta * delta) / (beta * beta);
    let c0 = -e2 / (beta * beta);
    let companion = SMatrix::<f64, 3, 3>::new(-c2, -c1, -c0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0);
    try_eigenvalues(&companion)
        .unwrap_or_default()
        .iter()
        .filter(|z| z.im.abs() <= 1e-8 * z.re.abs().max(1e-300) && z.re > 0.0)
        .map(|z| z.re)
        .collect()
}

fn count_roots(params: &SystemParams, drive: C64, found: &Vec6, opts: &SolverOptions) -> usize {
    let mut roots = vec![*found];
    let probe = SolverOptions {
        max_iterations: 200,
        ..*opts
    };
    for n in intensity_seeds(params, drive) {
        let b = I * params.xi0 * n / C64::new(params.gamma_m, params.omega_m);
        let delta_eff = bare_detuning(params, b) - 2.0 * params.xi0 * b.re;
        let a = drive / C64::new(params.kappa, delta_eff);
        let seed = Amplitudes::new(a, b, C64::new(0.0, 0.0)).to_real();
        let mut iterations = 0;
        let Ok((x, _)) = newton(
            seed,
            |v| residual(v, params, drive),
            |v| solver_jacobian(&Amplitudes::from_real(v), params),
            |v| tolerance(v, params, &probe),
            &probe,
            &mut iterations,
        ) else {
            continue;
        };
        let distinct = roots
            .iter()
            .all(|r| (r - x).norm() > 1e-6 * (1.0 + r.norm().max(x.norm())));
        if distinct {
            roots.push(x);
        }
    }
    roots.len()
}

fn inner_residual(y: &Vec4, alpha: C64, params: &SystemParams) -> Vec4 {
    let s = Amplitudes::new(alpha, C64::new(y[0], y[1]), C64::new(y[2], y[3]));
    let d = classical_drift(&s, params, C64::new(0.0, 0.0));
    Vec4::new(d.mirror.re, d.mirror.im, d.atom.re, d.atom.im)
}

fn inner_jacobian(y: &Vec4, alpha: C64, params: &SystemParams) -> SMatrix<f64, 4, 4> {
    let s = Amplitudes::new(alpha, C64::new(y[0], y[1]), C64::new(y[2], y[3]));
    let full = real_jacobian(&wirtinger_partials(&s, params, 0.0));
    let keep = [0, 1, 4, 5];
    SMatrix::<f64, 4, 4>::from_fn(|i, j| full[(keep[i], keep[j])])
}

/// Fixed point with the intracavity amplitude pinned at `alpha`; the drive
/// is whatever closes the field equation.
pub fn steady_state_for_amplitude(alpha: C64, params: &SystemParams) -> Result<SteadyState, SteadyStateError> {
    steady_state_for_amplitude_with(alpha, params, &SolverOptions::default())
}

pub fn steady_state_for_amplitude_with(
    alpha: C64,
    params: &SystemParams,
    opts: &SolverOptions,
) -> Result<SteadyState, SteadyStateError> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(SteadyStateError::NonFinite("field amplitude"));
    }
    let mut iterations = 0;
    let mut y = Vec4::zeros();
    let steps = opts.homotopy_steps.max(1);
    for k in 1..=steps {
        let a = alpha * (k as f64 / steps as f64);
        let scale = (a.abs() * params.omega_m).max(1.0);
        (y, _) = newton(
            y,
            |v| inner_residual(v, a, params),
            |v| inner_jacobian(v, a, params),
            |v| opts.rel_tol * scale.max(v.norm() * params.omega_m),
            opts,
            &mut iterations,
        )?;
    }
    let state = Amplitudes::new(alpha, C64::new(y[0], y[1]), C64::new(y[2], y[3]));
    let drive = -classical_drift(&state, params, C64::new(0.0, 0.0)).field;
    let residual_norm = classical_drift(&state, params, drive).to_real().norm();
    let root_count = count_roots(params, drive, &state.to_real(), opts);
    Ok(assemble(state, params, drive, residual_norm, root_count, iterations))
}

/// Drive E that holds the cavity at amplitude `alpha`, with b and c
/// solved self-consistently.
pub fn required_drive(alpha: C64, params: &SystemParams) -> Result<C64, SteadyStateError> {
    steady_state_for_amplitude(alpha, params).map(|s| s.drive_e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::InputLevel;
    use approx::assert_relative_eq;

    pub(crate) fn base(g: f64, xi0: f64, eta: f64) -> SystemParams {
        SystemParams {
            input_level: InputLevel::Dimensionless,
            x_zpf: None,
            xi0,
            eta,
            g_mu: g,
            g_eff: g,
            gamma_m: 1e-3,
            drive_e: 0.0,
            field_amplitude: None,
            n_th: 0.0,
            kappa: 0.3,
            gamma_a: 0.25,
            delta_a: 1.0,
            detuning: CavityDetuning::Effective(-1.0),
            omega_m: 1.0,
            rate_unit: 1.0,
        }
    }

    #[test]
    fn origin_is_fixed_without_drive() {
        let p = base(0.01, 1e-3, 0.05);
        let d = classical_drift(&Amplitudes::default(), &p, C64::new(0.0, 0.0));
        assert_eq!(d, Amplitudes::default());
    }

    #[test]
    fn empty_cavity() {
        let mut p = base(0.0, 0.0, 0.0);
        p.kappa = 1.0;
        p.detuning = CavityDetuning::Bare(0.0);
        let ss = solve_steady_state(&p, C64::new(2.0, 0.0)).unwrap();
        assert_relative_eq!(ss.alpha_s.re, 2.0, max_relative = 1e-12);
        assert!(ss.alpha_s.im.abs() < 1e-12);
        assert_eq!(ss.b_s, C64::new(0.0, 0.0));
        assert_eq!(ss.c_s, C64::new(0.0, 0.0));
        assert_eq!(ss.root_count, 1);
    }

    #[test]
    fn radiation_pressure_only() {
        let mut p = base(0.0, 0.1, 0.0);
        p.gamma_m = 0.01;
        p.kappa = 1.0;
        p.detuning = CavityDetuning::Bare(1.0);
        let ss = solve_steady_state(&p, C64::new(1.0, 0.0)).unwrap();
        let b = I * 0.1 * ss.alpha_s.norm_sqr() / C64::new(0.01, 1.0);
        assert!((ss.b_s - b).norm() <= 1e-12);
        assert!(ss.residual_norm <= 1e-12);
        let e = ss.alpha_s * C64::new(1.0, ss.delta_f);
        assert!((e - 1.0).norm() <= 1e-12);
    }

    #[test]
    fn real_jacobian_matches_differences() {
        let p = base(0.02, 2e-3, 0.1).with_bare_detuning(-0.7);
        let s = Amplitudes::new(C64::new(30.0, -4.0), C64::new(2.0, 3.0), C64::new(-0.5, 0.8));
        let j = real_jacobian(&wirtinger_partials(&s, &p, -0.7));
        let x = s.to_real();
        let e = C64::new(0.4, 0.1);
        for col in 0..6 {
            let h = 1e-6 * (1.0 + x[col].abs());
            let mut up = x;
            let mut dn = x;
            up[col] += h;
            dn[col] -= h;
            let fd = (residual(&up, &p, e) - residual(&dn, &p, e)) / (2.0 * h);
            for row in 0..6 {
                assert_relative_eq!(j[(row, col)], fd[row], epsilon = 1e-6, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn solver_jacobian_tracks_effective_detuning() {
        let p = base(0.02, 2e-3, 0.1);
        let s = Amplitudes::new(C64::new(30.0, -4.0), C64::new(2.0, 3.0), C64::new(-0.5, 0.8));
        let j = solver_jacobian(&s, &p);
        let x = s.to_real();
        let e = C64::new(0.4, 0.1);
        for col in 0..6 {
            let h = 1e-6 * (1.0 + x[col].abs());
            let mut up = x;
            let mut dn = x;
            up[col] += h;
            dn[col] -= h;
            let fd = (residual(&up, &p, e) - residual(&dn, &p, e)) / (2.0 * h);
            for row in 0..6 {
                assert_relative_eq!(j[(row, col)], fd[row], epsilon = 1e-6, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn eliminated_relations_hold_at_the_fixed_point() {
        let p = base(0.004, 2e-4, 0.04);
        let e = C64::new(180.0, 40.0);
        let ss = solve_steady_state(&p, e).unwrap();
        let (a, b, c) = (ss.alpha_s, ss.b_s, ss.c_s);
        let eta2 = p.eta * p.eta;
        let f = 1.0 - 0.5 * eta2 * b.norm_sqr();
        let h = 1.0 - eta2 * b.norm_sqr();
        let g2 = p.g_eff * f * b.conj();

        let atom = g2 * a / C64::new(-p.delta_a, p.gamma_a);
        assert!((c - atom).norm() <= 1e-10 * c.norm());

        let g3 = p.g_eff * (h * a * c.conj() - 0.5 * eta2 * a.conj() * c * b * b);
        let mirror = I * (p.xi0 * a.norm_sqr() - g3) / C64::new(p.gamma_m, p.omega_m);
        assert!((b - mirror).norm() <= 1e-10 * b.norm());

        // Field equation after eliminating c: the atom adds damping and shifts the detuning.
        let lorentz = g2.norm_sqr() / (p.gamma_a * p.gamma_a + p.delta_a * p.delta_a);
        let drive = a * C64::new(p.kappa + lorentz * p.gamma_a, ss.delta_f - lorentz * p.delta_a);
        assert!((drive - e).norm() <= 1e-10 * e.norm());
    }

    #[test]
    fn pinned_amplitude_round_trip() {
        let p = base(0.004, 2e-4, 0.04);
        let alpha = C64::new(300.0, 0.0);
        let pinned = steady_state_for_amplitude(alpha, &p).unwrap();
        assert!(pinned.residual_norm <= 1e-12 * (pinned.amplitudes().norm()).max(1.0));
        let solved = solve_steady_state(&p, pinned.drive_e).unwrap();
        assert!((solved.alpha_s - alpha).norm() <= 1e-9 * alpha.norm());
    }

    #[test]
    fn bistable_bare_detuning_reports_several_roots() {
        let mut p = base(0.0, 0.05, 0.0);
        p.kappa = 0.1;
        p.detuning = CavityDetuning::Bare(1.0);
        // n(κ² + (Δ − βn)²) = |E|² has three positive roots near n ≈ 10..200.
        let ss = solve_steady_state(&p, C64::new(2.0, 0.0)).unwrap();
        assert!(ss.root_count >= 2, "root count {}", ss.root_count);
    }

    #[test]
    fn divergence_is_reported() {
        let mut p = base(0.0, 0.0, 0.0);
        p.kappa = 1e-14;
        p.detuning = CavityDetuning::Bare(0.0);
        let err = solve_steady_state(&p, C64::new(1.0, 0.0)).unwrap_err();
        assert!(matches!(err, SteadyStateError::DivergedAmplitude { .. }), "{err:?}");
    }

    #[test]
    fn non_finite_drive() {
        let p = base(0.0, 0.0, 0.0);
        assert_eq!(
            solve_steady_state(&p, C64::new(f64::NAN, 0.0)),
            Err(SteadyStateError::NonFinite("drive"))
        );
    }
}

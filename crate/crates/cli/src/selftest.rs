// SPDX-License-Identifier: Apache-2.0

//! Invariant suite run by `optomech selftest`.

use std::fmt;

use optomech::dynamics::finite_difference_jacobian;
use optomech::gaussian::{lyapunov_residual, solve_lyapunov_unchecked};
use optomech::linalg::{inf_norm, Mat6};
use optomech::{
    derive_parameters, integrate_spectrum, log_negativity, modes::truncated_nonlinearity, nonlinearity_f,
    reduce_bipartite, stability, BipartiteCM, DriftMatrix, NonlinearityQuery, Pair, SystemParams,
};

use crate::oracles::{brute_force_eta_minus, laguerre, random_drift_matrices, rising_ratio, two_mode_squeezed};
use crate::pipeline::{analyze_params, PointAnalysis};
use crate::presets::{base, SET_A, SET_B};

/// Deliberate corruption used to show that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Fault {
    #[default]
    None,
    /// Adds 1e−3·‖A‖_∞ to one entry of every drift matrix.
    PerturbDrift,
    /// Replaces D by −D before solving for the covariance.
    FlipDiffusion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{} {:<16} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Parameter points spanning both cavity detunings, three Lamb-Dicke
/// parameters and the atomic detuning window.
pub fn reference_params() -> Vec<SystemParams> {
    let mut out = Vec::new();
    for (set, temperature) in [(SET_A, 0.4), (SET_B, 1.2)] {
        for delta_f in [-1.0, 1.0] {
            for eta in [0.016, 0.04, 0.08] {
                for k in 0..9 {
                    let mut cfg = base(set, eta, delta_f, temperature);
                    cfg.delta_a = 0.5 + 0.125 * f64::from(k);
                    out.push(derive_parameters(&cfg).expect("reference configs are valid"));
                }
            }
        }
    }
    out
}

/// Analyses of the reference points that are certified and stable.
pub fn stable_reference_points() -> Vec<PointAnalysis> {
    reference_params()
        .iter()
        .filter_map(|p| analyze_params(p).ok())
        .filter(|a| a.stationary.is_some())
        .collect()
}

fn inject(drift: &DriftMatrix, fault: Fault) -> Mat6 {
    let mut a = drift.a;
    if fault == Fault::PerturbDrift {
        a[(2, 3)] += 1e-3 * inf_norm(&drift.a);
    }
    a
}

pub fn check_nonlinearity() -> Check {
    let mut worst = 0.0_f64;
    let mut exact = true;
    let mut bound_ok = true;
    for j in 0..=5u32 {
        let inv_fact = 1.0 / (1..=j).map(f64::from).product::<f64>();
        for n_b in 0..=100u32 {
            exact &= nonlinearity_f(NonlinearityQuery { j, n_b, eta: 0.0 }) == inv_fact;
            for eta in [0.01, 0.05, 0.1, 0.5] {
                let f = nonlinearity_f(NonlinearityQuery { j, n_b, eta });
                let l = laguerre(j, n_b, eta * eta);
                let rel = (f * rising_ratio(j, n_b) - l).abs() / l.abs().max(f64::MIN_POSITIVE);
                worst = worst.max(rel);
            }
        }
    }
    for n_b in 0..=50u32 {
        for k in 1..=20 {
            let eta = 0.01 * f64::from(k);
            let nb = f64::from(n_b);
            let f = nonlinearity_f(NonlinearityQuery { j: 1, n_b, eta });
            let bound = eta.powi(4) * nb * (nb - 1.0).max(0.0) / 6.0;
            bound_ok &= (f - truncated_nonlinearity(eta, nb)).abs() <= bound + 1e-15;
        }
    }
    Check {
        name: "nonlinearity",
        passed: exact && bound_ok && worst <= 1e-10,
        detail: format!("η=0 exact: {exact}, truncation bound: {bound_ok}, worst Laguerre rel. error {worst:.2e}"),
    }
}

pub fn check_jacobian(points: &[PointAnalysis], fault: Fault) -> Check {
    let worst = points
        .iter()
        .map(|p| {
            let a = inject(&p.drift, fault);
            let fd = finite_difference_jacobian(&p.steady, &p.params);
            inf_norm(&(a - fd)) / inf_norm(&a)
        })
        .fold(0.0, f64::max);
    Check {
        name: "jacobian",
        passed: !points.is_empty() && worst <= 1e-6,
        detail: format!("{} points, worst ‖A − J_fd‖/‖A‖ = {worst:.2e}", points.len()),
    }
}

pub fn check_lyapunov(points: &[PointAnalysis], fault: Fault) -> Check {
    let mut worst_residual = 0.0_f64;
    let mut worst_margin = f64::INFINITY;
    let mut failures = 0;
    for p in points {
        let st = p.stationary.as_ref().expect("stable points carry a covariance");
        let d = if fault == Fault::FlipDiffusion { -st.diffusion.d } else { st.diffusion.d };
        let a = inject(&p.drift, fault);
        match solve_lyapunov_unchecked(&a, &d) {
            Ok(cm) => {
                worst_residual = worst_residual.max(inf_norm(&lyapunov_residual(&a, &cm.v, &d)) / inf_norm(&d));
                worst_margin = worst_margin.min(cm.uncertainty_margin());
            }
            Err(_) => failures += 1,
        }
    }
    Check {
        name: "lyapunov",
        passed: !points.is_empty() && failures == 0 && worst_residual <= 1e-10 && worst_margin >= -1e-9,
        detail: format!(
            "{} points, {failures} uncertified, worst residual/‖D‖ = {worst_residual:.2e}, min eig(V + iΩ/2) = {worst_margin:.3e}",
            points.len()
        ),
    }
}

pub fn check_negativity(points: &[PointAnalysis]) -> Check {
    let vacuum = log_negativity(&BipartiteCM::new(optomech::linalg::Mat4::identity() * 0.5))
        .map(|r| r.e_n == 0.0)
        .unwrap_or(false);
    let squeezed = [0.5, 1.0, 2.0]
        .iter()
        .map(|&r| {
            log_negativity(&BipartiteCM::new(two_mode_squeezed(r)))
                .map(|n| (n.e_n - 2.0 * r).abs())
                .unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    let mut brute = 0.0_f64;
    for p in points {
        let cm = p.stationary.as_ref().expect("stable").covariance;
        for pair in Pair::ALL {
            let bp = reduce_bipartite(&cm, pair);
            brute = match log_negativity(&bp) {
                Ok(n) => brute.max((n.eta_minus - brute_force_eta_minus(&bp.v)).abs()),
                Err(_) => f64::INFINITY,
            };
        }
    }
    Check {
        name: "negativity",
        passed: vacuum && squeezed <= 1e-9 && brute <= 1e-9,
        detail: format!("vacuum zero: {vacuum}, squeezed |E_N − 2r| ≤ {squeezed:.1e}, closed form vs brute force ≤ {brute:.1e}"),
    }
}

/// Parseval check on every `stride`-th point.
pub fn check_parseval(points: &[PointAnalysis], stride: usize) -> Check {
    let mut worst = 0.0_f64;
    let mut count = 0;
    for p in points.iter().step_by(stride.max(1)) {
        let st = p.stationary.as_ref().expect("stable");
        let v11 = st.covariance.v[(0, 0)];
        worst = match integrate_spectrum(&p.drift, &st.diffusion) {
            Ok(s) => worst.max((s - v11).abs() / v11),
            Err(_) => f64::INFINITY,
        };
        count += 1;
    }
    Check {
        name: "parseval",
        passed: count > 0 && worst <= 0.01,
        detail: format!("{count} points, worst |∫S/2π − V₁₁|/V₁₁ = {worst:.2e}"),
    }
}

/// Eigenvalues within this distance of the imaginary axis (in units of
/// ω_m) are treated as marginal and excluded from the comparison.
pub const MARGINAL_BAND: f64 = 1e-6;

pub fn check_routh_hurwitz(points: &[PointAnalysis], random: usize) -> Check {
    let mut compared = 0;
    let mut disagreements = 0;
    let drifts = random_drift_matrices(0x5eed, random)
        .into_iter()
        .map(|a| DriftMatrix::new(a, 1.0).expect("finite"))
        .chain(points.iter().map(|p| p.drift));
    for d in drifts {
        let v = stability(&d);
        if (v.max_real_eigenvalue + d.margin()).abs() <= MARGINAL_BAND * d.omega_m {
            continue;
        }
        compared += 1;
        if !v.method_agreement {
            disagreements += 1;
        }
    }
    Check {
        name: "routh-hurwitz",
        passed: compared > 0 && disagreements == 0,
        detail: format!("{compared} non-marginal matrices, {disagreements} disagreements"),
    }
}

pub fn run(fault: Fault) -> Report {
    let points = stable_reference_points();
    Report {
        checks: vec![
            check_nonlinearity(),
            check_jacobian(&points, fault),
            check_lyapunov(&points, fault),
            check_negativity(&points),
            check_parseval(&points, 2),
            check_routh_hurwitz(&points, 1000),
        ],
    }
}

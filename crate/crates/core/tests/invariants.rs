// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Matrix2;
use optomech::linalg::{min_hermitian_eigenvalue, Mat4};
use optomech::params::{CavityDetuning, EffectiveBlock, TripartiteCoupling};
use optomech::spectrum::spectral_density;
use optomech::{
    build_drift_matrix, derive_parameters, log_negativity, nonlinearity_f, reduce_bipartite, solve_lyapunov,
    solve_steady_state, stability, BipartiteCM, CovarianceMatrix, DiffusionMatrix, NonlinearityQuery, Pair,
    SystemConfig, SystemParams, C64,
};
use proptest::prelude::*;

fn config(eta: f64, delta_a: f64, temperature: f64) -> SystemConfig {
    let mut cfg = SystemConfig::dimensionless(
        2.0 * PI * 1e7,
        EffectiveBlock {
            eta,
            coupling: TripartiteCoupling::Rate(3.91e-3),
            xi0: 2.17e-4,
        },
    );
    cfg.quality_factor = 1.1e6;
    cfg.kappa = 0.07;
    cfg.gamma_a = 2.0 * PI * 0.04;
    cfg.delta_a = delta_a;
    cfg.detuning = CavityDetuning::Effective(-1.0);
    cfg.temperature = temperature;
    cfg.drive = Some(250.0);
    cfg
}

fn params(eta: f64, delta_a: f64) -> SystemParams {
    derive_parameters(&config(eta, delta_a, 0.4)).unwrap()
}

fn rotation(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Thermal two-mode squeezed state, a generic entangled two-mode CM.
fn noisy_squeezed(r: f64, n: f64) -> Mat4 {
    let c = (2.0 * r).cosh() * (n + 0.5);
    let s = (2.0 * r).sinh() * (n + 0.5);
    let mut v = Mat4::identity() * c;
    v[(0, 2)] = s;
    v[(2, 0)] = s;
    v[(1, 3)] = -s;
    v[(3, 1)] = -s;
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn drive_phase_rotates_field_and_atom(phi in -PI..PI, delta_a in 0.6..1.4_f64) {
        let p = params(0.04, delta_a);
        let e = C64::new(250.0, 0.0);
        let base = solve_steady_state(&p, e).unwrap();
        let turned = solve_steady_state(&p, e * C64::from_polar(1.0, phi)).unwrap();
        let u = C64::from_polar(1.0, phi);
        let tol = 1e-7;
        prop_assert!((turned.alpha_s - base.alpha_s * u).norm() <= tol * base.alpha_s.norm());
        prop_assert!((turned.c_s - base.c_s * u).norm() <= tol * base.c_s.norm().max(1.0));
        prop_assert!((turned.b_s - base.b_s).norm() <= tol * base.b_s.norm().max(1.0));

        // Negativities do not see the global phase.
        let dp = DiffusionMatrix::new(&p);
        let (d0, d1) = (build_drift_matrix(&base, &p), build_drift_matrix(&turned, &p));
        prop_assume!(stability(&d0).stable && stability(&d1).stable);
        let (v0, v1) = (solve_lyapunov(&d0, &dp).unwrap(), solve_lyapunov(&d1, &dp).unwrap());
        for pair in Pair::ALL {
            let e0 = log_negativity(&reduce_bipartite(&v0, pair)).unwrap().e_n;
            let e1 = log_negativity(&reduce_bipartite(&v1, pair)).unwrap().e_n;
            prop_assert!((e0 - e1).abs() <= 1e-6 * e0.max(1e-3), "{pair}: {e0} vs {e1}");
        }
    }

    #[test]
    fn negativity_ignores_local_rotations(r in 0.0..2.0_f64, n in 0.0..3.0_f64, t1 in -PI..PI, t2 in -PI..PI) {
        let v = noisy_squeezed(r, n);
        let mut local = Mat4::zeros();
        local.fixed_view_mut::<2, 2>(0, 0).copy_from(&rotation(t1));
        local.fixed_view_mut::<2, 2>(2, 2).copy_from(&rotation(t2));
        let a = log_negativity(&BipartiteCM::new(v)).unwrap();
        let b = log_negativity(&BipartiteCM::new(local * v * local.transpose())).unwrap();
        prop_assert!((a.e_n - b.e_n).abs() <= 1e-9);
        prop_assert!((a.eta_minus - b.eta_minus).abs() <= 1e-9 * a.eta_minus.max(1.0));
        // Closed form: η⁻ = (n + 1/2) e^{−2r}.
        prop_assert!((a.eta_minus - (n + 0.5) * (-2.0 * r).exp()).abs() <= 1e-9 * (n + 0.5));
    }

    #[test]
    fn thermal_occupation_grows_with_temperature(t in 1e-3..10.0_f64, dt in 1e-3..5.0_f64) {
        let cold = derive_parameters(&config(0.04, 1.0, t)).unwrap();
        let hot = derive_parameters(&config(0.04, 1.0, t + dt)).unwrap();
        prop_assert!(hot.n_th > cold.n_th);
    }

    #[test]
    fn first_order_factor_decreases(eta in 0.005..0.1_f64) {
        let top = (1.0 / (eta * eta)).floor() as u32;
        let f = |n_b| nonlinearity_f(NonlinearityQuery { j: 1, n_b, eta });
        let mut prev = f(0);
        for n_b in 1..=top.min(400) {
            let cur = f(n_b);
            prop_assert!(cur < prev, "n_b = {n_b}: {cur} ≥ {prev}");
            prev = cur;
        }
    }

    #[test]
    fn spectral_matrix_is_hermitian_psd(omega in -3.0..3.0_f64, delta_a in 0.6..1.4_f64) {
        let p = params(0.04, delta_a);
        let ss = solve_steady_state(&p, C64::new(250.0, 0.0)).unwrap();
        let drift = build_drift_matrix(&ss, &p);
        prop_assume!(stability(&drift).stable);
        let s = spectral_density(&drift, &DiffusionMatrix::new(&p), omega).unwrap();
        let scale = s.iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        prop_assert!((s - s.adjoint()).iter().all(|z| z.norm() <= 1e-12 * scale));
        prop_assert!(min_hermitian_eigenvalue(&s) >= -1e-10 * scale);
    }
}

#[test]
fn reductions_cover_every_mode_twice() {
    let mut seen = BTreeMap::new();
    for pair in Pair::ALL {
        let idx = pair.indices();
        assert_eq!(idx[0] % 2, 0);
        assert_eq!(idx[1], idx[0] + 1);
        assert_eq!(idx[3], idx[2] + 1);
        assert!(idx[1] < idx[2]);
        for i in idx {
            *seen.entry(i).or_insert(0) += 1;
        }
    }
    assert_eq!(seen.keys().copied().collect::<Vec<_>>(), (0..6).collect::<Vec<_>>());
    assert!(seen.values().all(|&c| c == 2));

    let v = optomech::linalg::Mat6::from_fn(|i, j| (1 + i.min(j) * 7 + i.max(j)) as f64);
    let cm = CovarianceMatrix { v };
    for pair in Pair::ALL {
        let bp = reduce_bipartite(&cm, pair);
        let idx = pair.indices();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(bp.v[(a, b)], v[(idx[a], idx[b])]);
            }
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

//! Stationary Gaussian covariance and bipartite logarithmic negativity.
//!
//! Quadratures follow X = (a + a†)/√2, so the vacuum variance is 1/2.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::dynamics::{stability, DriftMatrix};
use crate::linalg::{inf_norm, min_hermitian_eigenvalue, symplectic_form, Mat4, Mat6};
use crate::params::SystemParams;
use crate::C64;

/// Negative discriminants above this value are rounded up to zero.
pub const DISCRIMINANT_CLAMP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum GaussianError {
    #[error("drift matrix is not stable (max Re λ = {max_real_eigenvalue:e})")]
    UnstableDrift { max_real_eigenvalue: f64 },
    #[error("Lyapunov system is singular")]
    SingularSystem,
    #[error("Lyapunov residual {residual:e} exceeds {bound:e}")]
    Uncertified { residual: f64, bound: f64 },
    #[error("covariance is unphysical (discriminant {discriminant:e}, Σ = {sigma:e})")]
    UnphysicalCM { discriminant: f64, sigma: f64 },
}

/// Diagonal noise matrix diag[γ_m(2n_th+1) ×2, κ ×2, γ_a ×2].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionMatrix {
    pub d: Mat6,
}

impl DiffusionMatrix {
    pub fn new(params: &SystemParams) -> Self {
        let m = params.gamma_m * (2.0 * params.n_th + 1.0);
        let diag = [m, m, params.kappa, params.kappa, params.gamma_a, params.gamma_a];
        DiffusionMatrix {
            d: Mat6::from_diagonal(&diag.into()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    pub v: Mat6,
}

impl CovarianceMatrix {
    /// Smallest eigenvalue of V + (i/2)Ω; negative values signal a violation
    /// of the uncertainty principle.
    pub fn uncertainty_margin(&self) -> f64 {
        let omega = symplectic_form::<6>();
        let h = self.v.map(|x| C64::new(x, 0.0)) + omega.map(|x| C64::new(0.0, 0.5 * x));
        min_hermitian_eigenvalue(&h)
    }

    pub fn is_physical(&self) -> bool {
        self.uncertainty_margin() >= -1e-9
    }
}

/// AV + VAᵀ + D.
pub fn lyapunov_residual(a: &Mat6, v: &Mat6, d: &Mat6) -> Mat6 {
    a * v + v * a.transpose() + d
}

/// Solves AV + VAᵀ = −D through the vectorized 36×36 system, with one step
/// of iterative refinement, and certifies the residual.
pub fn solve_lyapunov(drift: &DriftMatrix, diffusion: &DiffusionMatrix) -> Result<CovarianceMatrix, GaussianError> {
    let verdict = stability(drift);
    if !verdict.stable {
        return Err(GaussianError::UnstableDrift {
            max_real_eigenvalue: verdict.max_real_eigenvalue,
        });
    }
    solve_lyapunov_unchecked(&drift.a, &diffusion.d)
}

/// Same as [`solve_lyapunov`] without the stability gate.
pub fn solve_lyapunov_unchecked(a: &Mat6, d: &Mat6) -> Result<CovarianceMatrix, GaussianError> {
    const N: usize = 6;
    // Column-major vec: vec(AV) = (I⊗A) vec V, vec(VAᵀ) = (A⊗I) vec V.
    let mut k = DMatrix::<f64>::zeros(N * N, N * N);
    for j in 0..N {
        for i in 0..N {
            let row = j * N + i;
            for m in 0..N {
                k[(row, j * N + m)] += a[(i, m)];
                k[(row, m * N + i)] += a[(j, m)];
            }
        }
    }
    let lu = k.lu();
    let rhs = DVector::from_iterator(N * N, d.iter().map(|x| -x));
    let mut x = lu.solve(&rhs).ok_or(GaussianError::SingularSystem)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(GaussianError::SingularSystem);
    }
    let unvec = |x: &DVector<f64>| Mat6::from_iterator(x.iter().copied());
    let r = lyapunov_residual(a, &unvec(&x), d);
    if let Some(dx) = lu.solve(&DVector::from_iterator(N * N, r.iter().map(|v| -v))) {
        x += dx;
    }
    let v = unvec(&x);
    let v = (v + v.transpose()) * 0.5;
    let residual = inf_norm(&lyapunov_residual(a, &v, d));
    let bound = 1e-10 * inf_norm(d);
    if residual.is_nan() || residual > bound {
        return Err(GaussianError::Uncertified { residual, bound });
    }
    Ok(CovarianceMatrix { v })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    MirrorField,
    MirrorAtom,
    FieldAtom,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::MirrorField, Pair::MirrorAtom, Pair::FieldAtom];

    /// Rows and columns of V kept for this pair.
    pub fn indices(self) -> [usize; 4] {
        match self {
            Pair::MirrorField => [0, 1, 2, 3],
            Pair::MirrorAtom => [0, 1, 4, 5],
            Pair::FieldAtom => [2, 3, 4, 5],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::MirrorField => "mirror-field",
            Pair::MirrorAtom => "mirror-atom",
            Pair::FieldAtom => "field-atom",
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Two-mode reduction [[B, C], [Cᵀ, B′]].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteCM {
    pub v: Mat4,
    pub pair: Option<Pair>,
}

impl BipartiteCM {
    pub fn new(v: Mat4) -> Self {
        BipartiteCM { v, pair: None }
    }

    pub fn b(&self) -> nalgebra::Matrix2<f64> {
        self.v.fixed_view::<2, 2>(0, 0).into_owned()
    }

    pub fn b_prime(&self) -> nalgebra::Matrix2<f64> {
        self.v.fixed_view::<2, 2>(2, 2).into_owned()
    }

    pub fn c(&self) -> nalgebra::Matrix2<f64> {
        self.v.fixed_view::<2, 2>(0, 2).into_owned()
    }

    pub fn uncertainty_margin(&self) -> f64 {
        let omega = symplectic_form::<4>();
        let h = self.v.map(|x| C64::new(x, 0.0)) + omega.map(|x| C64::new(0.0, 0.5 * x));
        min_hermitian_eigenvalue(&h)
    }
}

pub fn reduce_bipartite(cm: &CovarianceMatrix, pair: Pair) -> BipartiteCM {
    let idx = pair.indices();
    BipartiteCM {
        v: Mat4::from_fn(|i, j| cm.v[(idx[i], idx[j])]),
        pair: Some(pair),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    /// Logarithmic negativity in nats.
    pub e_n: f64,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub eta_minus: f64,
    pub sigma: f64,
}

pub fn log_negativity(bp: &BipartiteCM) -> Result<NegativityResult, GaussianError> {
    let sigma = bp.b().determinant() + bp.b_prime().determinant() - 2.0 * bp.c().determinant();
    let discriminant = sigma * sigma - 4.0 * bp.v.determinant();
    if discriminant < -DISCRIMINANT_CLAMP {
        return Err(GaussianError::UnphysicalCM { discriminant, sigma });
    }
    let inner = sigma - discriminant.max(0.0).sqrt();
    if inner.is_nan() || inner <= 0.0 {
        return Err(GaussianError::UnphysicalCM { discriminant, sigma });
    }
    let eta_minus = (0.5 * inner).sqrt();
    let raw = -(2.0 * eta_minus).ln();
    Ok(NegativityResult {
        e_n: if raw > 0.0 { raw } else { 0.0 },
        eta_minus,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn scaled_identity() {
        let cm = solve_lyapunov_unchecked(&(-Mat6::identity()), &(Mat6::identity() * 2.0)).unwrap();
        assert!((cm.v - Mat6::identity()).amax() < 1e-14);
    }

    #[test]
    fn uncoupled_thermal_modes() {
        let nth = 7.5;
        let mut a = Mat6::zeros();
        let rates = [(1e-3, 1.0), (0.2, -1.0), (0.25, 1.0)];
        for (k, &(g, w)) in rates.iter().enumerate() {
            a[(2 * k, 2 * k)] = -g;
            a[(2 * k + 1, 2 * k + 1)] = -g;
            a[(2 * k, 2 * k + 1)] = w;
            a[(2 * k + 1, 2 * k)] = -w;
        }
        let m = 1e-3 * (2.0 * nth + 1.0);
        let d = Mat6::from_diagonal(&[m, m, 0.2, 0.2, 0.25, 0.25].into());
        let cm = solve_lyapunov(&DriftMatrix::new(a, 1.0).unwrap(), &DiffusionMatrix { d }).unwrap();
        let expected = Mat6::from_diagonal(&[nth + 0.5, nth + 0.5, 0.5, 0.5, 0.5, 0.5].into());
        assert!((cm.v - expected).amax() < 1e-10);
        assert!(cm.is_physical());
        for pair in Pair::ALL {
            assert_eq!(log_negativity(&reduce_bipartite(&cm, pair)).unwrap().e_n, 0.0);
        }
    }

    #[test]
    fn refuses_unstable_drift() {
        let drift = DriftMatrix::new(Mat6::identity(), 1.0).unwrap();
        let d = DiffusionMatrix { d: Mat6::identity() };
        assert!(matches!(solve_lyapunov(&drift, &d), Err(GaussianError::UnstableDrift { .. })));
    }

    #[test]
    fn singular_system() {
        // A with eigenvalues λ and −λ makes I⊗A + A⊗I singular.
        let a = Mat6::from_diagonal(&[1.0, -1.0, -2.0, -2.0, -3.0, -3.0].into());
        assert_eq!(
            solve_lyapunov_unchecked(&a, &Mat6::identity()),
            Err(GaussianError::SingularSystem)
        );
    }

    #[test]
    fn vacuum_pair() {
        let r = log_negativity(&BipartiteCM::new(Mat4::identity() * 0.5)).unwrap();
        assert_eq!(r.e_n, 0.0);
        assert_relative_eq!(r.sigma, 0.5);
        assert_relative_eq!(r.eta_minus, 0.5);
    }

    #[test]
    fn unphysical_pair() {
        let r = log_negativity(&BipartiteCM::new(Mat4::identity() * 0.1));
        assert!(r.is_ok_and(|n| n.e_n > 0.0));
        let mut v = Mat4::identity() * 0.5;
        v[(0, 2)] = 2.0;
        v[(2, 0)] = 2.0;
        assert!(matches!(
            log_negativity(&BipartiteCM::new(v)),
            Err(GaussianError::UnphysicalCM { .. })
        ));
    }

    #[test]
    fn reduction_blocks() {
        let v = Mat6::from_fn(|i, j| (10 * i + j) as f64);
        let cm = CovarianceMatrix { v: (v + v.transpose()) * 0.5 };
        let bp = reduce_bipartite(&cm, Pair::FieldAtom);
        assert_eq!(bp.v[(0, 0)], cm.v[(2, 2)]);
        assert_eq!(bp.c()[(1, 1)], cm.v[(3, 5)]);
        assert_eq!(bp.b_prime()[(0, 1)], cm.v[(4, 5)]);
    }
}

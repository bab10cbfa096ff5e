// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers: characteristic polynomials, the Routh-Hurwitz test,
//! and eigenvalue wrappers around nalgebra.

use nalgebra::linalg::Schur;
use nalgebra::{DMatrix, SMatrix};
use thiserror::Error;

use crate::C64;

pub type Mat6 = SMatrix<f64, 6, 6>;
pub type CMat6 = SMatrix<C64, 6, 6>;
pub type Mat4 = SMatrix<f64, 4, 4>;

/// Pivot magnitude below which the Routh table is abandoned.
pub const ROUTH_PIVOT_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RouthError {
    #[error("Routh table pivot {pivot:e} in row {row} is numerically zero")]
    IllConditioned { row: usize, pivot: f64 },
}

/// Coefficients [1, c_{n−1}, …, c_0] of det(λI − A), highest power first,
/// by the Faddeev-LeVerrier recurrence.
pub fn characteristic_polynomial(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let identity = DMatrix::<f64>::identity(n, n);
    let mut coeffs = vec![0.0; n + 1];
    coeffs[0] = 1.0;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &identity * coeffs[k - 1];
        let am = a * &m;
        coeffs[k] = -am.trace() / k as f64;
    }
    coeffs
}

/// Routh-Hurwitz test on a real polynomial given highest power first.
///
/// Returns `Ok(true)` when every root lies in the open left half-plane.
pub fn routh_hurwitz(coeffs: &[f64]) -> Result<bool, RouthError> {
    let lead = coeffs[0];
    let p: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let degree = p.len() - 1;
    // Necessary condition: every coefficient strictly positive.
    if p.iter().any(|&c| c <= 0.0) {
        return Ok(false);
    }
    let width = degree / 2 + 1;
    let mut prev: Vec<f64> = (0..width).map(|i| p.get(2 * i).copied().unwrap_or(0.0)).collect();
    let mut cur: Vec<f64> = (0..width).map(|i| p.get(2 * i + 1).copied().unwrap_or(0.0)).collect();
    let mut stable = true;
    for row in 1..=degree {
        let pivot = cur[0];
        if pivot.abs() < ROUTH_PIVOT_FLOOR {
            return Err(RouthError::IllConditioned { row, pivot });
        }
        if pivot < 0.0 {
            stable = false;
        }
        if row == degree {
            break;
        }
        let next: Vec<f64> = (0..width)
            .map(|i| {
                let up = prev.get(i + 1).copied().unwrap_or(0.0);
                let here = cur.get(i + 1).copied().unwrap_or(0.0);
                (pivot * up - prev[0] * here) / pivot
            })
            .collect();
        prev = cur;
        cur = next;
    }
    Ok(stable)
}

/// QR sweeps allowed before the real Schur iteration is abandoned.
pub const SCHUR_MAX_SWEEPS: usize = 10_000;

/// Eigenvalues of a real square matrix via a bounded real Schur
/// iteration, retried on the transpose. `None` when neither converges.
pub fn try_eigenvalues<const N: usize>(a: &SMatrix<f64, N, N>) -> Option<Vec<C64>> {
    let m = DMatrix::from_column_slice(N, N, a.as_slice());
    [m.clone(), m.transpose()].into_iter().find_map(|m| {
        Schur::try_new(m, f64::EPSILON, SCHUR_MAX_SWEEPS).map(|s| s.complex_eigenvalues().iter().copied().collect())
    })
}

pub fn eigenvalues(a: &Mat6) -> Option<Vec<C64>> {
    try_eigenvalues(a)
}

/// Smallest eigenvalue of a complex Hermitian matrix.
pub fn min_hermitian_eigenvalue<const N: usize>(h: &SMatrix<C64, N, N>) -> f64 {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    DMatrix::from_column_slice(N, N, sym.as_slice())
        .symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
}

/// Block-diagonal symplectic form with blocks [[0, 1], [−1, 0]].
pub fn symplectic_form<const N: usize>() -> SMatrix<f64, N, N> {
    let mut omega = SMatrix::<f64, N, N>::zeros();
    for k in (0..N).step_by(2) {
        omega[(k, k + 1)] = 1.0;
        omega[(k + 1, k)] = -1.0;
    }
    omega
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

/// Infinity norm (maximum absolute row sum).
pub fn inf_norm<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> f64 {
    (0..R)
        .map(|i| (0..C).map(|j| m[(i, j)].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

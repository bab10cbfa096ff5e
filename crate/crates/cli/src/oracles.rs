// SPDX-License-Identifier: Apache-2.0

//! Independent reference computations, deliberately sharing no code path
//! with the library routines they check.

use nalgebra::Matrix4;
use optomech::linalg::{symplectic_form, Mat4, Mat6};
use optomech::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Associated Laguerre polynomial L^j_n(x) by the three-term recurrence.
pub fn laguerre(j: u32, n: u32, x: f64) -> f64 {
    let a = f64::from(j);
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for k in 1..n {
        let k = f64::from(k);
        let next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// (n+j)!/n! as a float.
pub fn rising_ratio(j: u32, n: u32) -> f64 {
    (1..=j).map(|k| f64::from(n + k)).product()
}

/// Smallest symplectic eigenvalue of the partial transpose Ṽ = PVP with
/// P = diag(1, 1, 1, −1). The symplectic spectrum ±ν_k is the spectrum of
/// the Hermitian matrix Ṽ^{1/2}(iΩ)Ṽ^{1/2}; Ṽ must be positive definite.
pub fn brute_force_eta_minus(v: &Mat4) -> f64 {
    let p = Matrix4::from_diagonal(&[1.0, 1.0, 1.0, -1.0].into());
    let pt = p * v * p;
    let eig = pt.symmetric_eigen();
    let root = eig.eigenvectors
        * Matrix4::from_diagonal(&eig.eigenvalues.map(|x| x.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let root = root.map(|x| C64::new(x, 0.0));
    let i_omega = symplectic_form::<4>().map(|x| C64::new(0.0, x));
    let h = root * i_omega * root;
    let h = (h + h.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .fold(f64::INFINITY, f64::min)
}

/// Two-mode squeezed vacuum with squeezing r, vacuum variance 1/2.
pub fn two_mode_squeezed(r: f64) -> Mat4 {
    let c = (2.0 * r).cosh() / 2.0;
    let s = (2.0 * r).sinh() / 2.0;
    let mut v = Mat4::identity() * c;
    v[(0, 2)] = s;
    v[(2, 0)] = s;
    v[(1, 3)] = -s;
    v[(3, 1)] = -s;
    v
}

/// Reproducible random 6×6 matrices whose spectra straddle the imaginary
/// axis: a random matrix shifted so its eigenvalue real parts spread over
/// roughly [−2, 1].
pub fn random_drift_matrices(seed: u64, count: usize) -> Vec<Mat6> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let scale = rng.gen_range(0.1..2.0);
            let shift = rng.gen_range(-2.5..0.5);
            Mat6::from_fn(|_, _| rng.gen_range(-1.0..1.0) * scale) + Mat6::identity() * shift
        })
        .collect()
}

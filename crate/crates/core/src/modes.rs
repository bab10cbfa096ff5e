// SPDX-License-Identifier: Apache-2.0

//! Hermite-Gauss cavity modes, the position-dependent atom-field coupling,
//! and the Lamb-Dicke nonlinearity function f_j(n_b).

use std::f64::consts::{FRAC_PI_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive, Zero};

/// Largest phonon number evaluated with exact rational arithmetic.
pub const EXACT_LIMIT: u32 = 170;

/// Physicists' Hermite polynomial H_n(x) by upward recurrence.
pub fn hermite(n: u32, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    /// Beam waist w_0 (m).
    pub w0: f64,
    /// Wavenumber k_0 (1/m).
    pub k0: f64,
    /// Cavity length L (m).
    pub length: f64,
}

impl CavityGeometry {
    pub fn new(w0: f64, k0: f64, length: f64) -> Option<Self> {
        (w0 > 0.0 && k0 > 0.0 && length > 0.0).then_some(CavityGeometry { w0, k0, length })
    }

    /// Rayleigh range w_0² k_0 / 2.
    pub fn rayleigh_range(&self) -> f64 {
        self.w0 * self.w0 * self.k0 / 2.0
    }

    /// Beam radius w(x) = w_0 √(1 + (x/x_R)²).
    pub fn beam_radius(&self, x: f64) -> f64 {
        let xr = self.rayleigh_range();
        self.w0 * (1.0 + (x / xr).powi(2)).sqrt()
    }

    /// Inverse wavefront curvature 1/R(x) = x / (x² + x_R²); zero at the waist.
    pub fn inverse_curvature(&self, x: f64) -> f64 {
        let xr = self.rayleigh_range();
        x / (x * x + xr * xr)
    }

    /// Gouy phase arctan(x/x_R).
    pub fn gouy_phase(&self, x: f64) -> f64 {
        (x / self.rayleigh_range()).atan()
    }
}

/// Transverse indices (m, n) and longitudinal index l ≥ 1.
///
/// `n` labels the Hermite factor in y and `m` the one in z.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeIndex {
    pub m: u32,
    pub n: u32,
    pub l: u32,
}

impl ModeIndex {
    pub fn new(m: u32, n: u32, l: u32) -> Option<Self> {
        (l >= 1).then_some(ModeIndex { m, n, l })
    }

    pub const FUNDAMENTAL: ModeIndex = ModeIndex { m: 0, n: 0, l: 1 };
}

/// Amplitude factor K (1/m^{3/2}) and phase ψ (rad) of a Hermite-Gauss mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub amplitude: f64,
    pub phase: f64,
}

pub fn mode_profile(idx: ModeIndex, point: [f64; 3], geom: &CavityGeometry) -> ModeProfile {
    let [x, y, z] = point;
    let w = geom.beam_radius(x);
    let rho2 = y * y + z * z;
    let s2 = std::f64::consts::SQRT_2;
    let norm = w
        * (PI * 2f64.powi(idx.n as i32 + idx.m as i32 - 2) * factorial(idx.m) * factorial(idx.n) * geom.length)
            .sqrt();
    let amplitude = hermite(idx.n, s2 * y / w) * hermite(idx.m, s2 * z / w) * (-rho2 / (w * w)).exp() / norm;
    let k = geom.k0;
    let phase = k * x - geom.gouy_phase(x) * f64::from(idx.m + idx.n + 1) + k * rho2 * geom.inverse_curvature(x) / 2.0;
    ModeProfile { amplitude, phase }
}

/// χ_mnl = g_0 K_mnl sin(ψ_mnl − lπ/2).
pub fn coupling_rate(idx: ModeIndex, point: [f64; 3], geom: &CavityGeometry, g0: f64) -> f64 {
    let p = mode_profile(idx, point, geom);
    g0 * p.amplitude * (p.phase - f64::from(idx.l) * FRAC_PI_2).sin()
}

/// Closed form of the fundamental-mode coupling for an atom on the ring
/// y² + z² = μ w(x_0)² at axial position x_0.
pub fn fundamental_coupling(x0: f64, mu: f64, geom: &CavityGeometry, g0: f64) -> f64 {
    let w = geom.beam_radius(x0);
    let k = geom.k0;
    let phase = k * x0 - geom.gouy_phase(x0) - FRAC_PI_2 + 2.0 * mu * x0 / (k * geom.w0 * geom.w0);
    2.0 * g0 / (mu.exp() * w * (PI * geom.length).sqrt()) * phase.sin()
}

/// Static phase θ = (1 + 2μ/(w_0² k_0²)) k_0 x_0 − φ(x_0) − π/2.
pub fn coupling_phase(x0: f64, mu: f64, geom: &CavityGeometry) -> f64 {
    let k0 = geom.k0;
    (1.0 + 2.0 * mu / (geom.w0 * geom.w0 * k0 * k0)) * k0 * x0 - geom.gouy_phase(x0) - FRAC_PI_2
}

/// Sideband order j, phonon number n_b and Lamb-Dicke parameter η.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearityQuery {
    pub j: u32,
    pub n_b: u32,
    pub eta: f64,
}

/// f_j(n_b) = Σ_{m=0}^{n_b} (−η²)^m n_b! / (m! (m+j)! (n_b−m)!).
///
/// For n_b ≤ [`EXACT_LIMIT`] the sum is formed exactly: η² is a dyadic
/// rational, so every term is an integer over a common power of two and the
/// only rounding is the final conversion. Larger n_b uses log-gamma
/// magnitudes with explicit signs.
pub fn nonlinearity_f(q: NonlinearityQuery) -> f64 {
    let x = q.eta * q.eta;
    if x == 0.0 {
        return 1.0 / factorial(q.j);
    }
    if q.n_b <= EXACT_LIMIT {
        exact_series(q.j, q.n_b, x)
    } else {
        log_gamma_series(q.j, q.n_b, x)
    }
}

/// Low-order truncation 1 − η² n_b / 2 of f_1.
pub fn truncated_nonlinearity(eta: f64, n_b: f64) -> f64 {
    1.0 - eta * eta * n_b / 2.0
}

fn exact_series(j: u32, n: u32, x: f64) -> f64 {
    let (mantissa, exponent, _) = x.integer_decode();
    // x = mantissa · 2^exponent; pull out 2^{-shift} with shift ≥ 0.
    let shift = (-i32::from(exponent)).max(0) as usize;
    let mut y = -BigInt::from(mantissa);
    if exponent > 0 {
        y <<= exponent as usize;
    }
    // Horner over N = Σ c_m y^m 2^{shift (n−m)}, c_m = C(n,m) (n+j)!/(m+j)!.
    let mut c = BigInt::one();
    let mut acc = BigInt::one();
    for m in (1..=n).rev() {
        // c_{m−1} = c_m · m (m+j) / (n−m+1), always an exact division.
        c = c * BigInt::from(m) * BigInt::from(m + j) / BigInt::from(n - m + 1);
        acc = acc * &y + (&c << (shift * (n - m + 1) as usize));
    }
    let mut den = BigInt::one();
    for k in 2..=(n + j) {
        den *= BigInt::from(k);
    }
    den <<= shift * n as usize;
    if acc.is_zero() {
        return 0.0;
    }
    BigRational::new_raw(acc, den).to_f64().unwrap_or(f64::NAN)
}

fn log_gamma_series(j: u32, n: u32, x: f64) -> f64 {
    let ln_x = x.ln();
    let ln_n_fact = libm::lgamma(f64::from(n) + 1.0);
    // Neumaier summation.
    let mut sum = 0.0;
    let mut comp = 0.0;
    for m in 0..=n {
        let mf = f64::from(m);
        let ln_mag = ln_n_fact - libm::lgamma(mf + 1.0) - libm::lgamma(f64::from(n - m) + 1.0)
            - libm::lgamma(mf + f64::from(j) + 1.0)
            + mf * ln_x;
        let term = if m % 2 == 0 { ln_mag.exp() } else { -ln_mag.exp() };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

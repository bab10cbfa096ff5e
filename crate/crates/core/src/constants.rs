// SPDX-License-Identifier: Apache-2.0

//! CODATA 2018 physical constants (SI).

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Boltzmann constant, J/K (exact).
pub const K_B: f64 = 1.380_649e-23;

/// Speed of light in vacuum, m/s (exact).
pub const C_LIGHT: f64 = 299_792_458.0;

/// 2π, for `*_hz` inputs.
pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

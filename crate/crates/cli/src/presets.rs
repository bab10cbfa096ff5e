// SPDX-License-Identifier: Apache-2.0

//! Reference configurations in the dimensionless tier (rates in units of
//! ω_m, intracavity amplitude pinned).

use optomech::constants::TWO_PI;
use optomech::params::{CavityDetuning, EffectiveBlock, TripartiteCoupling};
use optomech::SystemConfig;

pub const OMEGA_M_SI: f64 = TWO_PI * 10.0e6;
pub const QUALITY_FACTOR: f64 = 1.1e6;
pub const KAPPA: f64 = 0.07;
/// 0.04·ω_m as an ordinary frequency.
pub const GAMMA_A: f64 = TWO_PI * 0.04;

/// Coupling set used for the detuning sweeps and the spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingSet {
    pub field_amplitude: f64,
    pub xi0: f64,
    pub g: f64,
}

pub const SET_A: CouplingSet = CouplingSet {
    field_amplitude: 332.7,
    xi0: 2.17e-4,
    g: 3.91e-3,
};

pub const SET_B: CouplingSet = CouplingSet {
    field_amplitude: 255.66,
    xi0: 2.5107e-4,
    g: 5.5414e-3,
};

pub fn base(set: CouplingSet, eta: f64, delta_f: f64, temperature: f64) -> SystemConfig {
    let mut cfg = SystemConfig::dimensionless(
        OMEGA_M_SI,
        EffectiveBlock {
            eta,
            coupling: TripartiteCoupling::Rate(set.g),
            xi0: set.xi0,
        },
    );
    cfg.quality_factor = QUALITY_FACTOR;
    cfg.kappa = KAPPA;
    cfg.gamma_a = GAMMA_A;
    cfg.delta_a = 1.0;
    cfg.detuning = CavityDetuning::Effective(delta_f);
    cfg.temperature = temperature;
    cfg.drive = None;
    cfg.field_amplitude = Some(set.field_amplitude);
    cfg
}

/// Red-detuned cavity, Δ_a to be swept over [0.5, 1.5].
pub fn detuning_sweep(eta: f64) -> SystemConfig {
    base(SET_A, eta, -1.0, 0.4)
}

/// Red-detuned cavity at a given bath temperature (K).
pub fn temperature_sweep(temperature: f64) -> SystemConfig {
    base(SET_B, 0.04, -1.0, temperature)
}

/// Blue-detuned cavity with a resonant atom, for the mirror spectrum.
pub fn spectrum_point(eta: f64) -> SystemConfig {
    base(SET_A, eta, 1.0, 0.4)
}

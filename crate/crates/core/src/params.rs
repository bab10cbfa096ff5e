// SPDX-License-Identifier: Apache-2.0

//! User configuration and the physical rates derived from it.
//!
//! Three input tiers are supported:
//!
//! * [`InputLevel::Geometric`]: cavity geometry, atom position and bare
//!   dipole coupling; the Lamb-Dicke parameter, radiation-pressure rate and
//!   tripartite coupling are computed.
//! * [`InputLevel::EffectiveRates`]: the Lamb-Dicke parameter and the
//!   couplings are given directly, all rates in rad/s.
//! * [`InputLevel::Dimensionless`]: as `EffectiveRates`, but every rate is a
//!   multiple of the mechanical frequency, which is then 1 internally. The
//!   physical `omega_m` is still needed to turn a temperature into a thermal
//!   phonon number.
//!
//! All frequencies are angular. The config reader converts `*_hz` keys.

use thiserror::Error;

use crate::constants::{C_LIGHT, HBAR, K_B};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamsError {
    #[error("{0} must be positive")]
    NonPositiveFrequency(&'static str),
    #[error("{field} is required for the {tier:?} input level")]
    MissingTierField {
        field: &'static str,
        tier: InputLevel,
    },
    #[error("temperature must be non-negative, got {0}")]
    TemperatureUnderflow(f64),
    #[error("invalid value for {field}: {reason}")]
    InvalidValue { field: &'static str, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputLevel {
    Geometric,
    EffectiveRates,
    Dimensionless,
}

/// How the cavity detuning is specified.
///
/// `Effective` fixes Δ_f = Δ_0f − 2ξ_0 Re(b_s), the detuning seen by the
/// fluctuations, and lets the laser detuning Δ_0f follow the mirror
/// displacement. `Bare` fixes the laser detuning Δ_0f = ω_c − ω_l.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CavityDetuning {
    Effective(f64),
    Bare(f64),
}

impl CavityDetuning {
    pub fn value(self) -> f64 {
        match self {
            CavityDetuning::Effective(d) | CavityDetuning::Bare(d) => d,
        }
    }

    pub fn with_value(self, value: f64) -> Self {
        match self {
            CavityDetuning::Effective(_) => CavityDetuning::Effective(value),
            CavityDetuning::Bare(_) => CavityDetuning::Bare(value),
        }
    }
}

/// Tripartite coupling in the effective tiers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TripartiteCoupling {
    /// G given directly.
    Rate(f64),
    /// G = prefactor · η · exp(−η²/2), so that G tracks the Lamb-Dicke
    /// parameter the way the geometric coupling g_μ does.
    EtaScaled { prefactor: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricBlock {
    /// Beam waist w_0 (m).
    pub waist: f64,
    /// Transverse position as a fraction of the local beam radius.
    pub mu: f64,
    /// Axial index, k_0 x_0 = επ.
    pub epsilon: f64,
    /// Bare dipole coupling g_0 (rad/s).
    pub g0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveBlock {
    pub eta: f64,
    pub coupling: TripartiteCoupling,
    /// Single-photon radiation-pressure rate ξ_0.
    pub xi0: f64,
}

/// Everything a user supplies. Optional fields are required or ignored
/// depending on the tier; [`derive_parameters`] checks which.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub input_level: InputLevel,
    /// Mechanical angular frequency, always in rad/s.
    pub omega_m: f64,
    pub quality_factor: f64,
    /// Effective mirror mass (kg).
    pub mass: Option<f64>,
    /// Cavity length (m).
    pub cavity_length: Option<f64>,
    pub kappa: f64,
    pub gamma_a: f64,
    pub delta_a: f64,
    pub detuning: CavityDetuning,
    /// Bath temperature (K).
    pub temperature: f64,
    /// Input laser power (W).
    pub laser_power: Option<f64>,
    /// Laser wavenumber k_0 (1/m).
    pub laser_wavenumber: Option<f64>,
    /// Drive amplitude |E|; takes precedence over `laser_power`.
    pub drive: Option<f64>,
    /// Target intracavity amplitude α_s (real). When present the drive is
    /// whatever holds the field at this amplitude.
    pub field_amplitude: Option<f64>,
    pub geometric: Option<GeometricBlock>,
    pub effective: Option<EffectiveBlock>,
}

impl SystemConfig {
    /// A dimensionless configuration with every optional block empty except
    /// the effective one. Handy for tests and for building configs in code.
    pub fn dimensionless(omega_m_si: f64, effective: EffectiveBlock) -> Self {
        SystemConfig {
            input_level: InputLevel::Dimensionless,
            omega_m: omega_m_si,
            quality_factor: 1.0e6,
            mass: None,
            cavity_length: None,
            kappa: 1.0,
            gamma_a: 1.0,
            delta_a: 0.0,
            detuning: CavityDetuning::Effective(0.0),
            temperature: 0.0,
            laser_power: None,
            laser_wavenumber: None,
            drive: Some(0.0),
            field_amplitude: None,
            geometric: None,
            effective: Some(effective),
        }
    }
}

/// Physical rates consumed by the dynamical pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub input_level: InputLevel,
    /// Zero-point length √(ħ/(m ω_m)) in metres, when the mass is known.
    pub x_zpf: Option<f64>,
    pub xi0: f64,
    pub eta: f64,
    /// g_μ, the tripartite coupling for a ground-state atom.
    pub g_mu: f64,
    /// G = g_μ √|⟨σ^z⟩| with |⟨σ^z⟩| = 1.
    pub g_eff: f64,
    pub gamma_m: f64,
    pub drive_e: f64,
    /// Pinned intracavity amplitude, see [`SystemConfig::field_amplitude`].
    pub field_amplitude: Option<f64>,
    pub n_th: f64,
    pub kappa: f64,
    pub gamma_a: f64,
    pub delta_a: f64,
    pub detuning: CavityDetuning,
    /// Mechanical frequency in internal rate units (1 in the dimensionless tier).
    pub omega_m: f64,
    /// rad/s per internal rate unit.
    pub rate_unit: f64,
}

impl SystemParams {
    /// Copy with the laser detuning pinned to `delta_0f`.
    pub fn with_bare_detuning(&self, delta_0f: f64) -> Self {
        SystemParams {
            detuning: CavityDetuning::Bare(delta_0f),
            ..*self
        }
    }

    /// Copy with every rate expressed as a multiple of ω_m.
    pub fn to_dimensionless(&self) -> Self {
        let w = self.omega_m;
        SystemParams {
            input_level: InputLevel::Dimensionless,
            xi0: self.xi0 / w,
            g_mu: self.g_mu / w,
            g_eff: self.g_eff / w,
            gamma_m: self.gamma_m / w,
            drive_e: self.drive_e / w,
            kappa: self.kappa / w,
            gamma_a: self.gamma_a / w,
            delta_a: self.delta_a / w,
            detuning: self.detuning.with_value(self.detuning.value() / w),
            omega_m: 1.0,
            rate_unit: self.rate_unit * w,
            ..*self
        }
    }
}

/// Mean thermal phonon number 1/(exp(ħω/k_B T) − 1); zero at T = 0 and
/// whenever the exponential would overflow.
pub fn thermal_occupation(omega_si: f64, temperature: f64) -> Result<f64, ParamsError> {
    if temperature < 0.0 || temperature.is_nan() {
        return Err(ParamsError::TemperatureUnderflow(temperature));
    }
    if temperature == 0.0 {
        return Ok(0.0);
    }
    let x = HBAR * omega_si / (K_B * temperature);
    if x > 700.0 {
        return Ok(0.0);
    }
    Ok(1.0 / x.exp_m1())
}

/// Zero-point fluctuation length √(ħ/(m ω_m)).
pub fn zero_point_length(mass: f64, omega_m_si: f64) -> f64 {
    (HBAR / (mass * omega_m_si)).sqrt()
}

fn require(value: Option<f64>, field: &'static str, tier: InputLevel) -> Result<f64, ParamsError> {
    value.ok_or(ParamsError::MissingTierField { field, tier })
}

fn non_negative(value: f64, field: &'static str) -> Result<f64, ParamsError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(ParamsError::InvalidValue {
            field,
            reason: format!("expected a finite non-negative number, got {value}"),
        })
    }
}

fn positive(value: f64, field: &'static str) -> Result<f64, ParamsError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(ParamsError::NonPositiveFrequency(field))
    }
}

fn finite(value: f64, field: &'static str) -> Result<f64, ParamsError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ParamsError::InvalidValue {
            field,
            reason: "must be finite".into(),
        })
    }
}

/// Lamb-Dicke parameter 2πμε/(w_0² k_0² L) · x_zpf.
pub fn lamb_dicke_parameter(geo: &GeometricBlock, k0: f64, length: f64, x_zpf: f64) -> f64 {
    let pi = std::f64::consts::PI;
    2.0 * pi * geo.mu * geo.epsilon / (geo.waist * geo.waist * k0 * k0 * length) * x_zpf
}

/// Geometric tripartite coupling g_0 e^{−η²/2} η / (e^μ w(x_0) √(πL)).
pub fn geometric_coupling(geo: &GeometricBlock, k0: f64, length: f64, eta: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let x0 = geo.epsilon * pi / k0;
    let x_r = geo.waist * geo.waist * k0 / 2.0;
    let w_x0 = geo.waist * (1.0 + (x0 / x_r).powi(2)).sqrt();
    geo.g0 * (-eta * eta / 2.0).exp() * eta / (geo.mu.exp() * w_x0 * (pi * length).sqrt())
}

pub fn derive_parameters(config: &SystemConfig) -> Result<SystemParams, ParamsError> {
    let tier = config.input_level;
    let omega_m_si = positive(config.omega_m, "omega_m")?;
    let q = positive(config.quality_factor, "quality_factor")?;
    let kappa = non_negative(config.kappa, "kappa")?;
    let gamma_a = non_negative(config.gamma_a, "gamma_a")?;
    let delta_a = finite(config.delta_a, "delta_a")?;
    finite(config.detuning.value(), "delta_f")?;
    let n_th = thermal_occupation(omega_m_si, config.temperature)?;

    let x_zpf = match config.mass {
        Some(m) => Some(zero_point_length(positive(m, "mass")?, omega_m_si)),
        None => None,
    };

    // Internal rate unit and the mechanical frequency expressed in it.
    let (rate_unit, omega_m) = match tier {
        InputLevel::Dimensionless => (omega_m_si, 1.0),
        _ => (1.0, omega_m_si),
    };
    let gamma_m = omega_m / q;

    let (xi0, eta, g_mu) = match tier {
        InputLevel::Geometric => {
            let geo = config
                .geometric
                .ok_or(ParamsError::MissingTierField { field: "geometric", tier })?;
            positive(geo.waist, "geometric.waist")?;
            positive(geo.epsilon, "geometric.epsilon")?;
            non_negative(geo.g0, "geometric.g0")?;
            if !(0.0..=1.0).contains(&geo.mu) {
                return Err(ParamsError::InvalidValue {
                    field: "geometric.mu",
                    reason: format!("must lie in [0, 1], got {}", geo.mu),
                });
            }
            let x_zpf = x_zpf.ok_or(ParamsError::MissingTierField { field: "mass", tier })?;
            let length = positive(require(config.cavity_length, "cavity_length", tier)?, "cavity_length")?;
            let k0 = positive(require(config.laser_wavenumber, "laser_wavenumber", tier)?, "laser_wavenumber")?;
            let omega_c = C_LIGHT * k0;
            let xi0 = omega_c / length * x_zpf;
            let eta = lamb_dicke_parameter(&geo, k0, length, x_zpf);
            (xi0, eta, geometric_coupling(&geo, k0, length, eta))
        }
        InputLevel::EffectiveRates | InputLevel::Dimensionless => {
            let eff = config
                .effective
                .ok_or(ParamsError::MissingTierField { field: "effective", tier })?;
            let eta = non_negative(eff.eta, "effective.eta")?;
            let xi0 = non_negative(eff.xi0, "effective.xi0")?;
            let g = match eff.coupling {
                TripartiteCoupling::Rate(g) => non_negative(g, "effective.g")?,
                TripartiteCoupling::EtaScaled { prefactor } => {
                    non_negative(prefactor, "effective.g_prefactor")? * eta * (-eta * eta / 2.0).exp()
                }
            };
            (xi0, eta, g)
        }
    };

    let drive_e = match (config.drive, config.laser_power) {
        (Some(e), _) => non_negative(e, "drive")?,
        (None, Some(p)) => {
            let p = non_negative(p, "laser_power")?;
            let k0 = positive(require(config.laser_wavenumber, "laser_wavenumber", tier)?, "laser_wavenumber")?;
            // ω_l ≈ ω_c = c k_0; the amplitude is computed in rad/s.
            let omega_l = C_LIGHT * k0;
            (2.0 * kappa * rate_unit * p / (HBAR * omega_l)).sqrt() / rate_unit
        }
        (None, None) if config.field_amplitude.is_some() => 0.0,
        (None, None) => return Err(ParamsError::MissingTierField { field: "drive", tier }),
    };
    let field_amplitude = match config.field_amplitude {
        Some(a) => Some(finite(a, "field_amplitude")?),
        None => None,
    };

    Ok(SystemParams {
        input_level: tier,
        x_zpf,
        xi0,
        eta,
        g_mu,
        g_eff: g_mu,
        gamma_m,
        drive_e,
        field_amplitude,
        n_th,
        kappa,
        gamma_a,
        delta_a,
        detuning: config.detuning,
        omega_m,
        rate_unit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn reference_si() -> SystemConfig {
        SystemConfig {
            input_level: InputLevel::EffectiveRates,
            omega_m: 2.0 * PI * 10.0e6,
            quality_factor: 1.1e6,
            mass: Some(10.0e-15),
            cavity_length: Some(1.0e-6),
            kappa: 0.07 * 2.0 * PI * 10.0e6,
            gamma_a: 0.04 * 2.0 * PI * 2.0 * PI * 10.0e6,
            delta_a: 2.0 * PI * 10.0e6,
            detuning: CavityDetuning::Effective(-2.0 * PI * 10.0e6),
            temperature: 0.4,
            laser_power: None,
            laser_wavenumber: Some(1.0e6),
            drive: Some(1.0e8),
            field_amplitude: None,
            geometric: None,
            effective: Some(EffectiveBlock {
                eta: 0.04,
                coupling: TripartiteCoupling::Rate(1.0e5),
                xi0: 1.0e3,
            }),
        }
    }

    #[test]
    fn zero_temperature_has_no_phonons() {
        assert_eq!(thermal_occupation(1.0e7, 0.0).unwrap(), 0.0);
        assert_eq!(thermal_occupation(1.0e7, 1.0e-12).unwrap(), 0.0);
    }

    #[test]
    fn unit_ratio_gives_inverse_e_minus_one() {
        let omega = 1.0e9;
        let t = HBAR * omega / K_B;
        let n = thermal_occupation(omega, t).unwrap();
        assert_relative_eq!(n, 1.0 / (std::f64::consts::E - 1.0), max_relative = 1e-12);
        assert_relative_eq!(n, 0.581_976_706_869_326_4, max_relative = 1e-12);
    }

    #[test]
    fn negative_temperature_is_rejected() {
        assert!(matches!(
            thermal_occupation(1.0, -0.1),
            Err(ParamsError::TemperatureUnderflow(_))
        ));
    }

    #[test]
    fn reference_mechanics() {
        let p = derive_parameters(&reference_si()).unwrap();
        // γ_m = ω_m/Q, x_zpf = √(ħ/mω_m), n_th at 0.4 K: recomputed with CODATA 2018.
        assert_relative_eq!(p.gamma_m, 57.119_866_428_905_33, max_relative = 1e-12);
        assert_relative_eq!(p.x_zpf.unwrap(), 1.295_532_004_7e-14, max_relative = 1e-9);
        assert_relative_eq!(p.n_th, 832.964_865_4, max_relative = 1e-9);
        assert_eq!(p.g_eff, p.g_mu);
    }

    #[test]
    fn n_th_increases_with_temperature() {
        let omega = 2.0 * PI * 10.0e6;
        let mut last = -1.0;
        for i in 0..200 {
            let t = 1.0e-4 * 1.05_f64.powi(i);
            let n = thermal_occupation(omega, t).unwrap();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn dimensionless_ratios_are_scale_free() {
        let base = derive_parameters(&reference_si()).unwrap().to_dimensionless();
        for scale in [0.3, 2.0, 17.0] {
            let mut cfg = reference_si();
            cfg.omega_m *= scale;
            cfg.kappa *= scale;
            cfg.gamma_a *= scale;
            cfg.delta_a *= scale;
            cfg.detuning = cfg.detuning.with_value(cfg.detuning.value() * scale);
            cfg.temperature *= scale;
            cfg.drive = cfg.drive.map(|d| d * scale);
            let eff = cfg.effective.as_mut().unwrap();
            eff.xi0 *= scale;
            eff.coupling = match eff.coupling {
                TripartiteCoupling::Rate(g) => TripartiteCoupling::Rate(g * scale),
                other => other,
            };
            let p = derive_parameters(&cfg).unwrap().to_dimensionless();
            for (a, b) in [
                (p.kappa, base.kappa),
                (p.gamma_a, base.gamma_a),
                (p.gamma_m, base.gamma_m),
                (p.delta_a, base.delta_a),
                (p.detuning.value(), base.detuning.value()),
                (p.g_eff, base.g_eff),
                (p.xi0, base.xi0),
                (p.drive_e, base.drive_e),
                (p.n_th, base.n_th),
            ] {
                assert_relative_eq!(a, b, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn geometric_eta_stays_below_one() {
        // k_0 ≈ 1e6 /m, m = 10 pg, ω_m/2π = 10 MHz, L = 1 μm, w_0 ≥ 1 nm.
        let omega = 2.0 * PI * 10.0e6;
        let x_zpf = zero_point_length(10.0e-15, omega);
        for &w0 in &[1.0e-9, 1.0e-8, 1.0e-7, 1.0e-6] {
            for &mu in &[0.0, 0.25, 0.5, 1.0] {
                for &eps in &[0.5, 1.0, 1.5, 2.0] {
                    let geo = GeometricBlock { waist: w0, mu, epsilon: eps, g0: 2.0 * PI * 1.0e3 };
                    let eta = lamb_dicke_parameter(&geo, 1.0e6, 1.0e-6, x_zpf);
                    assert!((0.0..1.0).contains(&eta), "eta = {eta} for w0 = {w0}");
                }
            }
        }
    }

    #[test]
    fn geometric_tier_is_consistent() {
        let mut cfg = reference_si();
        cfg.input_level = InputLevel::Geometric;
        cfg.drive = None;
        cfg.laser_power = Some(800.0e-6);
        cfg.geometric = Some(GeometricBlock {
            waist: 1.0e-8,
            mu: 0.5,
            epsilon: 1.0,
            g0: 2.0 * PI * 1.0e3,
        });
        let p = derive_parameters(&cfg).unwrap();
        let x_zpf = p.x_zpf.unwrap();
        let omega_c = C_LIGHT * 1.0e6;
        assert_relative_eq!(p.xi0, omega_c / 1.0e-6 * x_zpf, max_relative = 1e-14);
        let geo = cfg.geometric.unwrap();
        let eta = 2.0 * PI * 0.5 / (1.0e-16 * 1.0e12 * 1.0e-6) * x_zpf;
        assert_relative_eq!(p.eta, eta, max_relative = 1e-12);
        assert_relative_eq!(p.g_mu, geometric_coupling(&geo, 1.0e6, 1.0e-6, eta), max_relative = 1e-14);
        let e = (2.0 * cfg.kappa * 800.0e-6 / (HBAR * omega_c)).sqrt();
        assert_relative_eq!(p.drive_e, e, max_relative = 1e-12);
    }

    #[test]
    fn missing_geometric_block() {
        let mut cfg = reference_si();
        cfg.input_level = InputLevel::Geometric;
        assert!(matches!(
            derive_parameters(&cfg),
            Err(ParamsError::MissingTierField { field: "geometric", .. })
        ));
    }

    #[test]
    fn rejects_bad_inputs() {
        let mut cfg = reference_si();
        cfg.omega_m = 0.0;
        assert_eq!(
            derive_parameters(&cfg),
            Err(ParamsError::NonPositiveFrequency("omega_m"))
        );
        let mut cfg = reference_si();
        cfg.kappa = -1.0;
        assert!(matches!(derive_parameters(&cfg), Err(ParamsError::InvalidValue { field: "kappa", .. })));
        let mut cfg = reference_si();
        cfg.temperature = -1.0;
        assert!(matches!(derive_parameters(&cfg), Err(ParamsError::TemperatureUnderflow(_))));
    }

    #[test]
    fn eta_scaled_coupling() {
        let mut cfg = SystemConfig::dimensionless(
            2.0 * PI * 1.0e7,
            EffectiveBlock { eta: 0.08, coupling: TripartiteCoupling::EtaScaled { prefactor: 2.0 }, xi0: 1.0e-4 },
        );
        cfg.drive = Some(10.0);
        let p = derive_parameters(&cfg).unwrap();
        assert_relative_eq!(p.g_eff, 2.0 * 0.08 * (-0.0032_f64).exp(), max_relative = 1e-14);
        assert_eq!(p.omega_m, 1.0);
        assert_relative_eq!(p.gamma_m, 1.0e-6);
    }
}

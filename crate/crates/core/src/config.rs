// SPDX-License-Identifier: Apache-2.0

//! Flat `key = value` configuration files.
//!
//! ```text
//! # comment
//! input_level = dimensionless
//! omega_m_hz = 10e6
//! kappa = 0.07
//! effective.eta = 0.04
//! ```
//!
//! Keys ending in `_hz` are ordinary frequencies and are multiplied by 2π.
//! Unknown and repeated keys are errors. Keys belonging to a tier other
//! than the active one are accepted and ignored.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::constants::TWO_PI;
use crate::params::{
    CavityDetuning, EffectiveBlock, GeometricBlock, InputLevel, SystemConfig, TripartiteCoupling,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{key}` given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: `{value}` is not a number")]
    InvalidNumber { line: usize, value: String },
    #[error("`{0}` is required")]
    Missing(String),
    #[error("{0}")]
    Conflict(String),
    #[error("unknown input level `{0}` (expected geometric, effective_rates or dimensionless)")]
    InvalidLevel(String),
    #[error("cannot read config: {0}")]
    Io(String),
}

/// Frequency-like keys that also accept a `_hz` suffix.
const RATE_KEYS: &[&str] = &[
    "omega_m",
    "kappa",
    "gamma_a",
    "delta_a",
    "delta_f",
    "delta_0f",
    "drive",
    "geometric.g0",
    "effective.g",
    "effective.g_prefactor",
    "effective.xi0",
];

const PLAIN_KEYS: &[&str] = &[
    "quality_factor",
    "mass",
    "cavity_length",
    "temperature",
    "laser_power",
    "laser_wavenumber",
    "field_amplitude",
    "geometric.waist",
    "geometric.mu",
    "geometric.epsilon",
    "effective.eta",
];

/// Canonical key (without `_hz`) and the multiplier to apply.
fn canonical(key: &str) -> Option<(&'static str, f64)> {
    if let Some(k) = RATE_KEYS.iter().find(|k| **k == key) {
        return Some((k, 1.0));
    }
    if let Some(stem) = key.strip_suffix("_hz") {
        if let Some(k) = RATE_KEYS.iter().find(|k| **k == stem) {
            return Some((k, TWO_PI));
        }
    }
    PLAIN_KEYS.iter().find(|k| **k == key).map(|k| (*k, 1.0))
}

fn parse_level(s: &str) -> Result<InputLevel, ConfigError> {
    match s.to_ascii_lowercase().as_str() {
        "geometric" => Ok(InputLevel::Geometric),
        "effective_rates" | "effective" => Ok(InputLevel::EffectiveRates),
        "dimensionless" => Ok(InputLevel::Dimensionless),
        _ => Err(ConfigError::InvalidLevel(s.to_string())),
    }
}

pub fn parse_config(text: &str) -> Result<SystemConfig, ConfigError> {
    let mut level = None;
    let mut values: BTreeMap<&'static str, f64> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or(ConfigError::Syntax { line })?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax { line });
        }
        if key == "input_level" {
            if level.is_some() {
                return Err(ConfigError::DuplicateKey { line, key: key.into() });
            }
            level = Some(parse_level(value)?);
            continue;
        }
        let (name, factor) = canonical(key).ok_or_else(|| ConfigError::UnknownKey {
            line,
            key: key.to_string(),
        })?;
        let number: f64 = value.parse().map_err(|_| ConfigError::InvalidNumber {
            line,
            value: value.to_string(),
        })?;
        if values.insert(name, number * factor).is_some() {
            return Err(ConfigError::DuplicateKey { line, key: name.into() });
        }
    }

    let level = level.ok_or_else(|| ConfigError::Missing("input_level".into()))?;
    let get = |k: &str| values.get(k).copied();
    let need = |k: &str| get(k).ok_or_else(|| ConfigError::Missing(k.to_string()));

    let detuning = match (get("delta_f"), get("delta_0f")) {
        (Some(d), None) => CavityDetuning::Effective(d),
        (None, Some(d)) => CavityDetuning::Bare(d),
        (None, None) => return Err(ConfigError::Missing("delta_f".into())),
        (Some(_), Some(_)) => {
            return Err(ConfigError::Conflict(
                "give either delta_f or delta_0f, not both".into(),
            ))
        }
    };

    let geometric = match level {
        InputLevel::Geometric => Some(GeometricBlock {
            waist: need("geometric.waist")?,
            mu: need("geometric.mu")?,
            epsilon: need("geometric.epsilon")?,
            g0: need("geometric.g0")?,
        }),
        _ => None,
    };
    let effective = match level {
        InputLevel::Geometric => None,
        _ => {
            let coupling = match (get("effective.g"), get("effective.g_prefactor")) {
                (Some(g), None) => TripartiteCoupling::Rate(g),
                (None, Some(p)) => TripartiteCoupling::EtaScaled { prefactor: p },
                (None, None) => return Err(ConfigError::Missing("effective.g".into())),
                (Some(_), Some(_)) => {
                    return Err(ConfigError::Conflict(
                        "give either effective.g or effective.g_prefactor, not both".into(),
                    ))
                }
            };
            Some(EffectiveBlock {
                eta: need("effective.eta")?,
                coupling,
                xi0: need("effective.xi0")?,
            })
        }
    };

    Ok(SystemConfig {
        input_level: level,
        omega_m: need("omega_m")?,
        quality_factor: need("quality_factor")?,
        mass: get("mass"),
        cavity_length: get("cavity_length"),
        kappa: need("kappa")?,
        gamma_a: need("gamma_a")?,
        delta_a: need("delta_a")?,
        detuning,
        temperature: need("temperature")?,
        laser_power: get("laser_power"),
        laser_wavenumber: get("laser_wavenumber"),
        drive: get("drive"),
        field_amplitude: get("field_amplitude"),
        geometric,
        effective,
    })
}

pub fn read_config(path: &std::path::Path) -> Result<SystemConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

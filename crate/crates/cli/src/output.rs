// SPDX-License-Identifier: Apache-2.0

//! Flat-file renderings. Floats carry 17 significant digits, lines end in
//! `\n`, and nothing depends on the environment, so reruns are
//! byte-identical.

use std::fmt::Write as _;

use optomech::spectrum::Peak;
use optomech::{nonlinearity_f, NonlinearityQuery, SpectrumSeries};
use serde::Serialize;

use crate::sweep::{SweepRecord, SweepVariable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt_float(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Quotes a field when it contains a separator, quote or newline.
fn text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub const SWEEP_COLUMNS: [&str; 11] = [
    "E_N_am",
    "E_N_fa",
    "E_N_mf",
    "stable",
    "residual_norm",
    "lyapunov_residual",
    "max_real_eigenvalue",
    "method_agreement",
    "root_count",
    "mode_count",
    "error",
];

pub fn sweep_csv(variable: SweepVariable, records: &[SweepRecord]) -> String {
    let mut out = String::new();
    out.push_str(variable.name());
    for c in SWEEP_COLUMNS {
        out.push(',');
        out.push_str(c);
    }
    out.push('\n');
    for r in records {
        let cells = [
            float(r.value),
            opt_float(r.e_n_am),
            opt_float(r.e_n_fa),
            opt_float(r.e_n_mf),
            r.stable.to_string(),
            opt_float(r.residual_norm),
            opt_float(r.lyapunov_residual),
            opt_float(r.max_real_eigenvalue),
            opt(r.method_agreement),
            opt(r.root_count),
            opt(r.mode_count),
            r.error.as_deref().map(text).unwrap_or_default(),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize)]
struct SweepDocument<'a> {
    variable: &'a str,
    records: &'a [SweepRecord],
}

pub fn sweep_json(variable: SweepVariable, records: &[SweepRecord]) -> String {
    let doc = SweepDocument {
        variable: variable.name(),
        records,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("records serialize");
    s.push('\n');
    s
}

/// One cell of a two-parameter stability map.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapCell {
    pub delta_a: f64,
    pub second: f64,
    pub stable: bool,
    pub max_real_eigenvalue: Option<f64>,
    pub method_agreement: Option<bool>,
    pub root_count: Option<usize>,
    pub error: Option<String>,
}

pub fn map_csv(second: SweepVariable, cells: &[MapCell]) -> String {
    let mut out = format!(
        "delta_a,{},stable,max_real_eigenvalue,method_agreement,root_count,error\n",
        second.name()
    );
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            float(c.delta_a),
            float(c.second),
            c.stable,
            opt_float(c.max_real_eigenvalue),
            opt(c.method_agreement),
            opt(c.root_count),
            c.error.as_deref().map(text).unwrap_or_default()
        );
    }
    out
}

#[derive(Serialize)]
struct MapDocument<'a> {
    second_variable: &'a str,
    cells: &'a [MapCell],
}

pub fn map_json(second: SweepVariable, cells: &[MapCell]) -> String {
    let mut s = serde_json::to_string_pretty(&MapDocument {
        second_variable: second.name(),
        cells,
    })
    .expect("cells serialize");
    s.push('\n');
    s
}

/// `omega_over_omega_m,S_q` rows.
pub fn spectrum_csv(series: &SpectrumSeries, omega_m: f64) -> String {
    let mut out = String::from("omega_over_omega_m,S_q\n");
    for (w, s) in series.omegas.iter().zip(&series.values) {
        let _ = writeln!(out, "{},{}", float(w / omega_m), float(*s));
    }
    out
}

#[derive(Serialize)]
struct PeakEntry {
    omega_over_omega_m: f64,
    height: f64,
    prominence: f64,
}

#[derive(Serialize)]
struct PeakDocument {
    mode_count: usize,
    structure: &'static str,
    prominence_threshold: f64,
    peaks: Vec<PeakEntry>,
}

/// Peak annotations accompanying a spectrum table.
pub fn peaks_json(series: &SpectrumSeries, omega_m: f64) -> String {
    let top = series.values.iter().copied().fold(0.0, f64::max);
    let entry = |p: &Peak| PeakEntry {
        omega_over_omega_m: p.omega / omega_m,
        height: p.height,
        prominence: p.prominence,
    };
    let doc = PeakDocument {
        mode_count: series.mode_count,
        structure: match series.structure() {
            optomech::ModeStructure::Featureless => "featureless",
            optomech::ModeStructure::TwoMode => "two-mode",
            optomech::ModeStructure::ThreeMode => "three-mode",
        },
        prominence_threshold: optomech::spectrum::PROMINENCE_FRACTION * top,
        peaks: series.peaks.iter().map(entry).collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("peaks serialize");
    s.push('\n');
    s
}

/// Axis of an f_j table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FAxis {
    /// n_b = 0..=max at fixed η.
    PhononNumber { eta: f64, max: u32 },
    /// η on an even grid at fixed n_b.
    LambDicke { n_b: u32, from: f64, to: f64, points: usize },
}

/// Table of f_1..f_J along one axis.
pub fn ftable_csv(axis: FAxis, orders: u32) -> String {
    let mut out = String::new();
    let (label, rows): (&str, Vec<(f64, u32, f64)>) = match axis {
        FAxis::PhononNumber { eta, max } => ("n_b", (0..=max).map(|n| (f64::from(n), n, eta)).collect()),
        FAxis::LambDicke { n_b, from, to, points } => {
            let n = points.max(2);
            let rows = (0..n)
                .map(|k| {
                    let eta = if k + 1 == n { to } else { from + (to - from) * k as f64 / (n - 1) as f64 };
                    (eta, n_b, eta)
                })
                .collect();
            ("eta", rows)
        }
    };
    out.push_str(label);
    for j in 1..=orders {
        let _ = write!(out, ",f_{j}");
    }
    out.push('\n');
    for (x, n_b, eta) in rows {
        out.push_str(&if label == "n_b" { n_b.to_string() } else { float(x) });
        for j in 1..=orders {
            let _ = write!(out, ",{}", float(nonlinearity_f(NonlinearityQuery { j, n_b, eta })));
        }
        out.push('\n');
    }
    out
}

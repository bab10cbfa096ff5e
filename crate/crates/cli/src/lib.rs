// SPDX-License-Identifier: Apache-2.0

//! Sweeps, tables and the invariant self-test behind the `optomech` binary.

pub mod oracles;
pub mod output;
pub mod pipeline;
pub mod presets;
pub mod selftest;
pub mod sweep;

pub use output::Format;
pub use pipeline::{analyze, analyze_params, PointAnalysis, PointError};
pub use sweep::{run_sweep, stability_map, SweepError, SweepRecord, SweepSpec, SweepVariable};

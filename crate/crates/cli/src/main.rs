// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use optomech::spectrum::symmetric_grid;
use optomech::{derive_parameters, displacement_spectrum, read_config, SpectrumError, SystemConfig};
use optomech_cli::output::{self, FAxis, Format};
use optomech_cli::pipeline::{analyze_params, PointError};
use optomech_cli::selftest::{self, Fault};
use optomech_cli::sweep::{run_sweep, stability_map, SweepError, SweepSpec, SweepVariable};
use serde_json::json;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "optomech", version, about = "Steady state, entanglement and spectra of an atom-field-mirror system")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed point, stability and pairwise entanglement at one parameter point.
    Steady {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Logarithmic negativities along a one-parameter sweep.
    EntangleSweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// delta_a, delta_f, eta, temperature, drive or field_amplitude.
        #[arg(long)]
        var: SweepVariable,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also count normal modes in the displacement spectrum.
        #[arg(long)]
        modes: bool,
    },
    /// Mirror displacement spectrum with peak annotations.
    Spectrum {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; peaks go to `<out>.peaks.json`.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
        /// Half-width of the frequency window in units of ω_m.
        #[arg(long, default_value_t = 2.0)]
        span: f64,
    },
    /// Stability verdicts over Δ_a and the drive (or pinned field amplitude).
    StabilityMap {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Δ_a range.
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 41)]
        points: usize,
        #[arg(long, value_enum, default_value_t = DriveAxis::Drive)]
        var: DriveAxis,
        #[arg(long)]
        drive_from: f64,
        #[arg(long)]
        drive_to: f64,
        #[arg(long, default_value_t = 41)]
        drive_points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Table of the nonlinearity functions f_1..f_J.
    Ftable {
        #[arg(long, value_enum, default_value_t = FtableAxis::Nb)]
        axis: FtableAxis,
        /// Lamb-Dicke parameter for the n_b axis.
        #[arg(long, default_value_t = 0.08)]
        eta: f64,
        /// Largest n_b on the n_b axis.
        #[arg(long, default_value_t = 100)]
        max: u32,
        /// Phonon number for the η axis.
        #[arg(long, default_value_t = 10)]
        nb: u32,
        #[arg(long, default_value_t = 0.0)]
        from: f64,
        #[arg(long, default_value_t = 0.5)]
        to: f64,
        #[arg(long, default_value_t = 101)]
        points: usize,
        #[arg(long, default_value_t = 3)]
        orders: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite; exits with 2 when any check fails.
    Selftest {
        #[arg(long, value_enum, default_value_t = Fault::None, hide = true)]
        fault: Fault,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DriveAxis {
    Drive,
    FieldAmplitude,
}

#[derive(Clone, Copy, ValueEnum)]
enum FtableAxis {
    Nb,
    Eta,
}

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Config(#[from] optomech::ConfigError),
    #[error(transparent)]
    Params(#[from] optomech::ParamsError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
    #[error("point is unstable (max Re λ = {0:e}); no spectrum")]
    Unstable(f64),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn load(path: &Path) -> Result<SystemConfig, CliError> {
    Ok(read_config(path)?)
}

fn steady(config: &Path, out: Option<&Path>, format: Format) -> Result<(), CliError> {
    let params = derive_parameters(&load(config)?)?;
    let p = analyze_params(&params)?;
    let ss = &p.steady;
    let cx = |z: optomech::C64| json!([z.re, z.im]);
    let doc = json!({
        "alpha_s": cx(ss.alpha_s),
        "b_s": cx(ss.b_s),
        "c_s": cx(ss.c_s),
        "delta_f": ss.delta_f,
        "delta_0f": ss.delta_0f,
        "drive": cx(ss.drive_e),
        "residual_norm": ss.residual_norm,
        "root_count": ss.root_count,
        "iterations": ss.iterations,
        "stable": p.verdict.stable,
        "max_real_eigenvalue": p.verdict.max_real_eigenvalue,
        "method_agreement": p.verdict.method_agreement,
        "e_n_am": p.stationary.map(|s| s.negativities.mirror_atom),
        "e_n_fa": p.stationary.map(|s| s.negativities.field_atom),
        "e_n_mf": p.stationary.map(|s| s.negativities.mirror_field),
        "lyapunov_residual": p.stationary.map(|s| s.lyapunov_residual),
    });
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("json value") + "\n",
        Format::Csv => {
            let obj = doc.as_object().expect("object");
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let vals: Vec<String> = obj
                .values()
                .map(|v| match v {
                    serde_json::Value::Array(a) => a
                        .iter()
                        .map(|x| output::float(x.as_f64().unwrap_or(f64::NAN)))
                        .collect::<Vec<_>>()
                        .join(";"),
                    serde_json::Value::Number(n) if n.is_f64() => output::float(n.as_f64().expect("f64")),
                    serde_json::Value::Null => String::new(),
                    other => other.to_string(),
                })
                .collect();
            format!("{}\n{}\n", keys.join(","), vals.join(","))
        }
    };
    emit(out, &text)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Steady { config, out, format } => steady(&config, out.as_deref(), format)?,
        Command::EntangleSweep {
            config,
            out,
            var,
            from,
            to,
            points,
            format,
            jobs,
            modes,
        } => {
            let spec = SweepSpec {
                variable: var,
                start: from,
                stop: to,
                count: points,
                base: load(&config)?,
                spectrum: modes,
            };
            let records = run_sweep(&spec, jobs)?;
            let text = match format {
                Format::Csv => output::sweep_csv(var, &records),
                Format::Json => output::sweep_json(var, &records),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Spectrum {
            config,
            out,
            points,
            span,
        } => {
            if points < 2001 || !(span >= 2.0 && span.is_finite()) {
                return Err(CliError::Usage("spectrum needs at least 2001 points spanning at least ±2 ω_m".into()));
            }
            let params = derive_parameters(&load(&config)?)?;
            let p = analyze_params(&params)?;
            let st = p.stationary.ok_or(CliError::Unstable(p.verdict.max_real_eigenvalue))?;
            let grid: Vec<f64> = symmetric_grid(span, points).into_iter().map(|x| x * params.omega_m).collect();
            let series = displacement_spectrum(&p.drift, &st.diffusion, &grid)?;
            let peaks = output::peaks_json(&series, params.omega_m);
            emit(out.as_deref(), &output::spectrum_csv(&series, params.omega_m))?;
            match out {
                Some(path) => {
                    let mut sidecar = path.into_os_string();
                    sidecar.push(".peaks.json");
                    emit(Some(Path::new(&sidecar)), &peaks)?;
                }
                None => eprint!("{peaks}"),
            }
        }
        Command::StabilityMap {
            config,
            out,
            from,
            to,
            points,
            var,
            drive_from,
            drive_to,
            drive_points,
            format,
            jobs,
        } => {
            let base = load(&config)?;
            let second = match var {
                DriveAxis::Drive => SweepVariable::Drive,
                DriveAxis::FieldAmplitude => SweepVariable::FieldAmplitude,
            };
            let rows = SweepSpec {
                variable: SweepVariable::DeltaA,
                start: from,
                stop: to,
                count: points,
                base: base.clone(),
                spectrum: false,
            };
            let cols = SweepSpec {
                variable: second,
                start: drive_from,
                stop: drive_to,
                count: drive_points,
                base,
                spectrum: false,
            };
            let cells = stability_map(&rows, &cols, jobs)?;
            let text = match format {
                Format::Csv => output::map_csv(second, &cells),
                Format::Json => output::map_json(second, &cells),
            };
            emit(out.as_deref(), &text)?;
        }
        Command::Ftable {
            axis,
            eta,
            max,
            nb,
            from,
            to,
            points,
            orders,
            out,
        } => {
            let axis = match axis {
                FtableAxis::Nb => FAxis::PhononNumber { eta, max },
                FtableAxis::Eta => FAxis::LambDicke {
                    n_b: nb,
                    from,
                    to,
                    points,
                },
            };
            if orders == 0 {
                return Err(CliError::Usage("--orders must be at least 1".into()));
            }
            emit(out.as_deref(), &output::ftable_csv(axis, orders))?;
        }
        Command::Selftest { fault } => {
            let report = selftest::run(fault);
            print!("{report}");
            return Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

//! Subcommand definitions and execution.
//!
//! Every run resolves to one or more *units* (a preset may fan out into
//! several panel cases). A unit knows its file-name stem and its fully
//! resolved configuration; executing it writes trace artifacts plus one
//! `.run.json` sidecar listing the resolved configuration and the files
//! written, so every artifact is reproducible from its own metadata.

use crate::config::{
    self, parse_model_tag, resolve, CommandKind, GridKind, Length, OutputFormat, PartialConfig,
    ResolvedConfig,
};
use crate::output::{
    self, number_tag, read_trace_artifact, to_json_document, trace_csv, trace_json, write_atomic,
    ComparisonReport, LobeReport, LobeSideReport, RunRecord, SCHEMA_VERSION,
};
use crate::presets::{self, PRESET_NAMES};
use crate::CliError;
use clap::{Args, Parser, Subcommand};
use nearfocus::field::FocusedArray;
use nearfocus::geometry::{ArrayConfig, FocusScenario};
use nearfocus::lobe::main_lobe_extent;
use nearfocus::pathloss::{CiPathLossParams, MeasurementModel};
use nearfocus::sweep::{
    closed_form_trace, compare_traces, deviated_taylor_trace, deviated_trace, emulated_trace,
    exact_trace, find_lobe_minima, linear_grid, log_grid, noisy_expectation_trace, noisy_mc_trace,
    sensitivity_table, ModelTag, PowerTrace,
};
use serde::Serialize;
use std::path::{Path, PathBuf};

/// Near-field focusing simulator for sparse planar arrays.
#[derive(Debug, Parser)]
#[command(name = "nearfocus", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep received power along the boresight axis (exact and/or closed-form models).
    Zsweep(ZsweepArgs),
    /// Sweep expected power under Gaussian phase noise (analytic or Monte Carlo).
    Noise(NoiseArgs),
    /// Sweep power with the panel rigidly shifted in its own plane.
    Deviation(DeviationArgs),
    /// Tabulate normalized focal power against shift magnitude for several panels.
    Sensitivity(SensitivityArgs),
    /// Report closed-form main-lobe extents next to minima measured on a fine sweep.
    Lobes(LobesArgs),
    /// Emulate a measurement run: CI path-loss amplitudes, optional jitter, peak-normalized.
    Emulate(EmulateArgs),
    /// Compare two JSON trace artifacts and print the error metrics to stdout.
    Compare(CompareArgs),
}

fn parse_length(s: &str) -> Result<Length, String> {
    s.parse()
}

fn parse_grid_kind(s: &str) -> Result<GridKind, String> {
    s.parse()
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

/// Options shared by every run command. Lengths accept meters or `lam`
/// multiples (e.g. `700lam`). Precedence: flags > config file > preset.
#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Named preset supplying scenario defaults (fig2a, fig2b, fig2a-dense,
    /// fig2b-dense, fig2c, fig5, fig6, fig7).
    #[arg(long, value_name = "NAME")]
    pub preset: Option<String>,

    /// Configuration file with `key = value` lines.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub out: PathBuf,

    /// Trace artifact format: csv or json.
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutputFormat>,

    /// Master seed; required whenever the run draws random numbers.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Elements per panel side.
    #[arg(long)]
    pub side: Option<usize>,

    /// Element spacing (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub spacing: Option<Length>,

    /// Carrier frequency in Hz (sets the wavelength via c = 2.998e8 m/s).
    #[arg(long)]
    pub frequency: Option<f64>,

    /// Focal distance (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub focal: Option<Length>,

    /// Transmit power in watts.
    #[arg(long)]
    pub power: Option<f64>,

    /// Grid spacing rule: log or linear.
    #[arg(long = "grid", value_parser = parse_grid_kind)]
    pub grid_kind: Option<GridKind>,

    /// First grid distance (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub grid_start: Option<Length>,

    /// Last grid distance (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub grid_stop: Option<Length>,

    /// Number of grid points.
    #[arg(long)]
    pub grid_points: Option<usize>,
}

impl CommonArgs {
    fn to_partial(&self) -> PartialConfig {
        PartialConfig {
            side: self.side,
            spacing: self.spacing,
            frequency_hz: self.frequency,
            focal: self.focal,
            power_w: self.power,
            grid_kind: self.grid_kind,
            grid_start: self.grid_start,
            grid_stop: self.grid_stop,
            grid_points: self.grid_points,
            seed: self.seed,
            format: self.format,
            ..PartialConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct ZsweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Models to sweep: exact, closed_form (comma-separated).
    #[arg(long, value_delimiter = ',', value_parser = parse_model_tag)]
    pub models: Option<Vec<ModelTag>>,
}

#[derive(Debug, Args)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Phase-noise standard deviations in radians (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub sigma_list: Option<Vec<f64>>,

    /// Single phase-noise standard deviation in radians.
    #[arg(long)]
    pub sigma: Option<f64>,

    /// Estimate by Monte Carlo instead of the analytic expectation.
    #[arg(long)]
    pub mc: bool,

    /// Monte Carlo trials per grid point.
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DeviationArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Shift magnitudes, each applied as dx = dy (comma-separated, meters or `lam`).
    #[arg(long, value_delimiter = ',', value_parser = parse_length)]
    pub deviations: Option<Vec<Length>>,

    /// Explicit x-shift (meters or `lam`); replaces the deviations list.
    #[arg(long, value_parser = parse_length)]
    pub dx: Option<Length>,

    /// Explicit y-shift (meters or `lam`); replaces the deviations list.
    #[arg(long, value_parser = parse_length)]
    pub dy: Option<Length>,

    /// Shift model: deviated (exact) or deviated_taylor (first order).
    #[arg(long, value_parser = parse_model_tag)]
    pub deviation_model: Option<ModelTag>,
}

#[derive(Debug, Args)]
pub struct SensitivityArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Panel sides to tabulate (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub sens_sides: Option<Vec<usize>>,

    /// Element spacings to tabulate (comma-separated, meters or `lam`).
    #[arg(long, value_delimiter = ',', value_parser = parse_length)]
    pub sens_spacings: Option<Vec<Length>>,

    /// First shift magnitude (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub delta_start: Option<Length>,

    /// Last shift magnitude (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub delta_stop: Option<Length>,

    /// Number of shift magnitudes.
    #[arg(long)]
    pub delta_points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LobesArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct EmulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Path-loss exponent of the close-in model.
    #[arg(long)]
    pub ple: Option<f64>,

    /// Close-in reference distance (meters or `lam`).
    #[arg(long, value_parser = parse_length)]
    pub ref_distance: Option<Length>,

    /// Shadow-fading standard deviation in dB.
    #[arg(long)]
    pub shadow_sigma: Option<f64>,

    /// Per-element phase jitter standard deviation in radians.
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Reference JSON trace artifact.
    pub reference: PathBuf,

    /// Candidate JSON trace artifact (resampled onto the reference grid).
    pub candidate: PathBuf,

    /// Peak-normalize both traces before differencing.
    #[arg(long)]
    pub normalize: bool,
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Zsweep(args) => run_zsweep(args),
        Command::Noise(args) => run_noise(args),
        Command::Deviation(args) => run_deviation(args),
        Command::Sensitivity(args) => run_sensitivity(args),
        Command::Lobes(args) => run_lobes(args),
        Command::Emulate(args) => run_emulate(args),
        Command::Compare(args) => run_compare(args),
    }
}

/// One resolved run: file-name stem, configuration, artifact format.
#[derive(Debug)]
struct RunUnit {
    stem: String,
    config: ResolvedConfig,
    format: OutputFormat,
}

/// Layers preset, config file and flags, then expands preset cases.
fn resolve_units(
    common: &CommonArgs,
    command_flags: PartialConfig,
    kind: CommandKind,
) -> Result<Vec<RunUnit>, CliError> {
    let preset = match &common.preset {
        Some(name) => Some(presets::lookup(name).ok_or_else(|| {
            CliError::Validation(format!(
                "unknown preset `{name}` (available: {})",
                PRESET_NAMES.join(", ")
            ))
        })?),
        None => None,
    };

    let file_layer = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Some(config::parse_config_file(path, &text)?)
        }
        None => None,
    };

    let base_name = match (&common.preset, &common.config) {
        (Some(name), _) => name.clone(),
        (None, Some(path)) => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into()),
        (None, None) => "run".into(),
    };

    let flags_layer = common.to_partial().merged_with(&command_flags);

    let cases: Vec<(Option<String>, PartialConfig)> = match &preset {
        Some(p) if !p.cases.is_empty() => p
            .cases
            .iter()
            .map(|(label, overlay)| (Some(label.clone()), p.base.merged_with(overlay)))
            .collect(),
        Some(p) => vec![(None, p.base.clone())],
        None => vec![(None, PartialConfig::default())],
    };

    cases
        .into_iter()
        .map(|(label, case_base)| {
            let mut merged = case_base;
            if let Some(file) = &file_layer {
                merged = merged.merged_with(file);
            }
            merged = merged.merged_with(&flags_layer);
            let format = merged.format.unwrap_or(OutputFormat::Csv);
            let config = resolve(&merged, kind)?;
            let stem = match &label {
                Some(label) => format!("{base_name}_{label}"),
                None => base_name.clone(),
            };
            Ok(RunUnit {
                stem,
                config,
                format,
            })
        })
        .collect()
}

fn build_engine(config: &ResolvedConfig) -> Result<FocusedArray, CliError> {
    let array = ArrayConfig::new(config.side, config.spacing_m, config.wavelength_m)?;
    let scenario = FocusScenario::new(config.focal_m, config.power_w)?;
    Ok(FocusedArray::new(array, scenario))
}

fn build_grid(config: &ResolvedConfig) -> Result<Vec<f64>, CliError> {
    let grid = match config.grid {
        GridKind::Log => log_grid(config.grid_start_m, config.grid_stop_m, config.grid_points)?,
        GridKind::Linear => {
            linear_grid(config.grid_start_m, config.grid_stop_m, config.grid_points)?
        }
    };
    Ok(grid)
}

/// Writes one trace artifact and returns its file name.
fn write_trace_file(
    out_dir: &Path,
    file_stem: &str,
    format: OutputFormat,
    config: &ResolvedConfig,
    trace: &PowerTrace,
) -> Result<String, CliError> {
    let (name, contents) = match format {
        OutputFormat::Csv => (format!("{file_stem}.csv"), trace_csv(trace)),
        OutputFormat::Json => (format!("{file_stem}.json"), trace_json(config, trace)?),
    };
    let path = out_dir.join(&name);
    write_atomic(&path, &contents)?;
    let peak = trace.peak();
    println!("wrote {}", path.display());
    println!(
        "  peak: l = {} m ({} lambda), value = {}",
        peak.distance,
        peak.distance / config.wavelength_m,
        peak.value
    );
    Ok(name)
}

/// Writes the per-unit sidecar recording configuration and files.
fn write_sidecar(
    out_dir: &Path,
    stem: &str,
    command: CommandKind,
    config: &ResolvedConfig,
    files: Vec<String>,
) -> Result<(), CliError> {
    let record = RunRecord {
        schema_version: SCHEMA_VERSION,
        command: command.name(),
        config,
        files,
    };
    let path = out_dir.join(format!("{stem}.run.json"));
    write_atomic(&path, &to_json_document(&record)?)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run_zsweep(args: ZsweepArgs) -> Result<(), CliError> {
    let kind = CommandKind::Zsweep;
    let command_flags = PartialConfig {
        models: args.models.clone(),
        ..PartialConfig::default()
    };
    for unit in resolve_units(&args.common, command_flags, kind)? {
        let engine = build_engine(&unit.config)?;
        let grid = build_grid(&unit.config)?;
        let mut files = Vec::new();
        for model in &unit.config.models {
            let trace = match model {
                ModelTag::Exact => exact_trace(&engine, &grid)?,
                ModelTag::ClosedForm => closed_form_trace(&engine, &grid)?,
                other => unreachable!("validation admits exact/closed_form only, got {other}"),
            };
            let stem = format!("{}_{model}", unit.stem);
            files.push(write_trace_file(
                &args.common.out,
                &stem,
                unit.format,
                &unit.config,
                &trace,
            )?);
        }
        write_sidecar(&args.common.out, &unit.stem, kind, &unit.config, files)?;
    }
    Ok(())
}

fn run_noise(args: NoiseArgs) -> Result<(), CliError> {
    let kind = CommandKind::Noise;
    let command_flags = PartialConfig {
        sigma_list: args.sigma_list.clone(),
        sigma: args.sigma,
        mc: if args.mc { Some(true) } else { None },
        trials: args.trials,
        ..PartialConfig::default()
    };
    for unit in resolve_units(&args.common, command_flags, kind)? {
        let engine = build_engine(&unit.config)?;
        let grid = build_grid(&unit.config)?;
        let mut files = Vec::new();
        for &sigma in &unit.config.sigma_list {
            let trace = if unit.config.mc {
                let seed = unit.config.seed.expect("validation requires a seed");
                // The same master seed serves every sigma: substreams depend
                // only on (seed, grid index), so each artifact reproduces
                // from its own embedded configuration alone.
                noisy_mc_trace(&engine, &grid, sigma, unit.config.trials, seed)?
            } else {
                noisy_expectation_trace(&engine, &grid, sigma)?
            };
            let mut artifact_config = unit.config.clone();
            artifact_config.sigma = sigma;
            artifact_config.sigma_list = vec![sigma];
            let stem = format!("{}_sigma{}_{}", unit.stem, number_tag(sigma), trace.model());
            files.push(write_trace_file(
                &args.common.out,
                &stem,
                unit.format,
                &artifact_config,
                &trace,
            )?);
        }
        write_sidecar(&args.common.out, &unit.stem, kind, &unit.config, files)?;
    }
    Ok(())
}

fn run_deviation(args: DeviationArgs) -> Result<(), CliError> {
    let kind = CommandKind::Deviation;
    let command_flags = PartialConfig {
        deviations: args.deviations.clone(),
        dx: args.dx,
        dy: args.dy,
        deviation_model: args.deviation_model,
        ..PartialConfig::default()
    };
    for unit in resolve_units(&args.common, command_flags, kind)? {
        let engine = build_engine(&unit.config)?;
        let grid = build_grid(&unit.config)?;
        let wavelength = unit.config.wavelength_m;

        // Either one explicit (dx, dy) pair or the symmetric list.
        let explicit_pair = unit.config.dx_m.is_some() || unit.config.dy_m.is_some();
        let shifts: Vec<(f64, f64, String)> = if explicit_pair {
            let dx = unit.config.dx_m.unwrap_or(0.0);
            let dy = unit.config.dy_m.unwrap_or(0.0);
            vec![(
                dx,
                dy,
                format!(
                    "dx{}lam_dy{}lam",
                    number_tag(dx / wavelength),
                    number_tag(dy / wavelength)
                ),
            )]
        } else {
            unit.config
                .deviations_m
                .iter()
                .map(|&d| (d, d, format!("dev{}lam", number_tag(d / wavelength))))
                .collect()
        };

        let half_pitch = 0.5 * unit.config.spacing_m;
        if shifts
            .iter()
            .any(|(dx, dy, _)| dx.abs() > half_pitch || dy.abs() > half_pitch)
        {
            eprintln!(
                "warning: a shift exceeds half the element spacing; the first-order model \
                 degrades for such large deviations"
            );
        }

        let mut files = Vec::new();
        for (dx, dy, tag) in shifts {
            let trace = match unit.config.deviation_model {
                ModelTag::Deviated => deviated_trace(&engine, &grid, dx, dy)?,
                ModelTag::DeviatedTaylor => deviated_taylor_trace(&engine, &grid, dx, dy)?,
                other => unreachable!("validation admits deviation models only, got {other}"),
            };
            let mut artifact_config = unit.config.clone();
            if explicit_pair {
                artifact_config.dx_m = Some(dx);
                artifact_config.dy_m = Some(dy);
                artifact_config.deviations_m = Vec::new();
            } else {
                artifact_config.deviations_m = vec![dx];
            }
            let stem = format!("{}_{}_{}", unit.stem, tag, trace.model());
            files.push(write_trace_file(
                &args.common.out,
                &stem,
                unit.format,
                &artifact_config,
                &trace,
            )?);
        }
        write_sidecar(&args.common.out, &unit.stem, kind, &unit.config, files)?;
    }
    Ok(())
}

/// Sensitivity-table artifact (JSON form).
#[derive(Serialize)]
struct SensitivityArtifact<'a> {
    schema_version: u32,
    config: &'a ResolvedConfig,
    deltas_m: &'a [f64],
    labels: Vec<&'a str>,
    /// Rows in label order; each row has one normalized power per delta.
    rows: Vec<&'a [f64]>,
}

fn run_sensitivity(args: SensitivityArgs) -> Result<(), CliError> {
    let kind = CommandKind::Sensitivity;
    let command_flags = PartialConfig {
        sens_sides: args.sens_sides.clone(),
        sens_spacings: args.sens_spacings.clone(),
        delta_start: args.delta_start,
        delta_stop: args.delta_stop,
        delta_points: args.delta_points,
        ..PartialConfig::default()
    };
    for unit in resolve_units(&args.common, command_flags, kind)? {
        let config = &unit.config;
        if config.delta_points < 2 {
            return Err(CliError::Validation(format!(
                "delta_points must be at least 2 (got {})",
                config.delta_points
            )));
        }
        if !(config.delta_start_m >= 0.0 && config.delta_stop_m > config.delta_start_m) {
            return Err(CliError::Validation(format!(
                "delta range needs 0 <= start < stop (got {}..{})",
                config.delta_start_m, config.delta_stop_m
            )));
        }
        // Plain linspace: unlike distance grids, the delta grid may start at
        // zero (the normalization column).
        let step = (config.delta_stop_m - config.delta_start_m) / (config.delta_points - 1) as f64;
        let mut deltas: Vec<f64> = (0..config.delta_points)
            .map(|i| config.delta_start_m + i as f64 * step)
            .collect();
        *deltas.last_mut().expect("at least 2 points") = config.delta_stop_m;

        let scenario = FocusScenario::new(config.focal_m, config.power_w)?;
        let mut cases = Vec::new();
        for &side in &config.sens_sides {
            for &spacing in &config.sens_spacings_m {
                let label = format!(
                    "side{side}_d{}lam",
                    number_tag(spacing / config.wavelength_m)
                );
                let array = ArrayConfig::new(side, spacing, config.wavelength_m)?;
                cases.push((label, array, scenario));
            }
        }
        let table = sensitivity_table(&cases, &deltas)?;

        let (name, contents) = match unit.format {
            OutputFormat::Csv => (
                format!("{}_sensitivity.csv", unit.stem),
                output::sensitivity_csv(&table, config.wavelength_m),
            ),
            OutputFormat::Json => {
                let artifact = SensitivityArtifact {
                    schema_version: SCHEMA_VERSION,
                    config,
                    deltas_m: &table.deltas,
                    labels: table.rows.iter().map(|r| r.label.as_str()).collect(),
                    rows: table
                        .rows
                        .iter()
                        .map(|r| r.normalized_power.as_slice())
                        .collect(),
                };
                (
                    format!("{}_sensitivity.json", unit.stem),
                    to_json_document(&artifact)?,
                )
            }
        };
        let path = args.common.out.join(&name);
        write_atomic(&path, &contents)?;
        println!("wrote {}", path.display());
        write_sidecar(&args.common.out, &unit.stem, kind, config, vec![name])?;
    }
    Ok(())
}

fn run_lobes(args: LobesArgs) -> Result<(), CliError> {
    let kind = CommandKind::Lobes;
    for unit in resolve_units(&args.common, PartialConfig::default(), kind)? {
        let config = &unit.config;
        let engine = build_engine(config)?;
        let extent = main_lobe_extent(engine.array(), engine.scenario());
        let focal = config.focal_m;

        // Fine linear grid (step <= 2 lambda) across three predicted lobe
        // widths on each side, so the true minima cannot escape the window
        // even where the closed form is off by tens of percent.
        let back_span = extent.backward_offset.abs();
        let forward_span = extent.forward_offset.unwrap_or(back_span);
        let window_lo = (focal - 3.0 * back_span).max(0.05 * focal);
        let window_hi = (focal + 3.0 * forward_span).min(6.0 * focal);
        let step = 2.0 * config.wavelength_m;
        let points = (((window_hi - window_lo) / step).ceil() as usize + 1).clamp(3, 200_001);
        let grid = linear_grid(window_lo, window_hi, points)?;
        let trace = exact_trace(&engine, &grid)?;

        let (measured, note) = match find_lobe_minima(&trace) {
            Ok(minima) => (
                Some((
                    minima.backward.distance - focal,
                    minima.forward.distance - focal,
                )),
                None,
            ),
            Err(e) => (None, Some(e.to_string())),
        };

        let side_report = |predicted: Option<f64>, measured_offset: Option<f64>| {
            let relative_gap = match (predicted, measured_offset) {
                (Some(p), Some(m)) if p != 0.0 => Some(((m - p) / p).abs()),
                _ => None,
            };
            LobeSideReport {
                predicted_offset_m: predicted,
                measured_offset_m: measured_offset,
                relative_gap,
            }
        };
        let report = LobeReport {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            strength: extent.strength,
            backward: side_report(Some(extent.backward_offset), measured.map(|m| m.0)),
            forward: side_report(extent.forward_offset, measured.map(|m| m.1)),
            grid_step_m: (window_hi - window_lo) / (points - 1) as f64,
            note,
        };
        let name = format!("{}_lobes.json", unit.stem);
        let path = args.common.out.join(&name);
        write_atomic(&path, &to_json_document(&report)?)?;
        println!("wrote {}", path.display());
        write_sidecar(&args.common.out, &unit.stem, kind, config, vec![name])?;
    }
    Ok(())
}

fn run_emulate(args: EmulateArgs) -> Result<(), CliError> {
    let kind = CommandKind::Emulate;
    let command_flags = PartialConfig {
        ple: args.ple,
        ref_distance: args.ref_distance,
        shadow_sigma_db: args.shadow_sigma,
        sigma: args.sigma,
        ..PartialConfig::default()
    };
    for unit in resolve_units(&args.common, command_flags, kind)? {
        let config = &unit.config;
        let engine = build_engine(config)?;
        let grid = build_grid(config)?;
        let params = CiPathLossParams::new(config.ple, config.ref_distance_m)?;
        let model = MeasurementModel::new(params, config.sigma, config.shadow_sigma_db)?;
        let trace = emulated_trace(&engine, &model, &grid, config.seed)?;
        let stem = format!("{}_{}", unit.stem, trace.model());
        let file = write_trace_file(&args.common.out, &stem, unit.format, config, &trace)?;
        write_sidecar(&args.common.out, &unit.stem, kind, config, vec![file])?;
    }
    Ok(())
}

fn run_compare(args: CompareArgs) -> Result<(), CliError> {
    let reference = read_trace_artifact(&args.reference)?;
    let candidate = read_trace_artifact(&args.candidate)?;
    let reference_trace = reference.to_trace()?;
    let candidate_trace = candidate.to_trace()?;
    let comparison = compare_traces(&reference_trace, &candidate_trace, args.normalize)?;
    let report = ComparisonReport {
        schema_version: SCHEMA_VERSION,
        reference_tag: reference_trace.model(),
        candidate_tag: candidate_trace.model(),
        normalized: args.normalize,
        comparison,
    };
    print!("{}", to_json_document(&report)?);
    Ok(())
}

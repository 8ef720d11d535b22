//! Run configuration: layered merging of defaults, presets, config files and
//! command-line flags into one fully resolved, serializable snapshot.
//!
//! Precedence, lowest to highest: command defaults < preset < config file <
//! flags. Lengths accept either plain meters (`0.0105`) or wavelength
//! multiples with a `lam` suffix (`10.5lam`); the wavelength itself always
//! comes from the carrier frequency via c = 2.998e8 m/s, so `lam` values can
//! only be resolved after the merge.

use crate::CliError;
use nearfocus::sweep::ModelTag;
use nearfocus::SPEED_OF_LIGHT;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// A length that may still be expressed in wavelength multiples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Length {
    Meters(f64),
    Lambdas(f64),
}

impl Length {
    /// Converts to meters given the resolved wavelength.
    pub fn resolve(self, wavelength: f64) -> f64 {
        match self {
            Length::Meters(m) => m,
            Length::Lambdas(n) => n * wavelength,
        }
    }
}

impl FromStr for Length {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let (body, lam) = match t.strip_suffix("lam") {
            Some(body) => (body.trim(), true),
            None => (t, false),
        };
        let value: f64 = body
            .parse()
            .map_err(|_| format!("`{t}` is not a number (append `lam` for wavelength units)"))?;
        if !value.is_finite() {
            return Err(format!("`{t}` is not finite"));
        }
        Ok(if lam {
            Length::Lambdas(value)
        } else {
            Length::Meters(value)
        })
    }
}

/// Grid spacing rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    Log,
    Linear,
}

impl FromStr for GridKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "log" => Ok(GridKind::Log),
            "linear" => Ok(GridKind::Linear),
            other => Err(format!("`{other}` is not a grid kind (log, linear)")),
        }
    }
}

/// Artifact format for trace output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("`{other}` is not an output format (csv, json)")),
        }
    }
}

/// Which subcommand a configuration is being resolved for; a few defaults
/// (grids in particular) differ per command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Zsweep,
    Noise,
    Deviation,
    Sensitivity,
    Lobes,
    Emulate,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Zsweep => "zsweep",
            CommandKind::Noise => "noise",
            CommandKind::Deviation => "deviation",
            CommandKind::Sensitivity => "sensitivity",
            CommandKind::Lobes => "lobes",
            CommandKind::Emulate => "emulate",
        }
    }
}

/// One layer of configuration; `None` means "not set at this layer".
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PartialConfig {
    pub side: Option<usize>,
    pub spacing: Option<Length>,
    pub frequency_hz: Option<f64>,
    pub focal: Option<Length>,
    pub power_w: Option<f64>,
    pub grid_kind: Option<GridKind>,
    pub grid_start: Option<Length>,
    pub grid_stop: Option<Length>,
    pub grid_points: Option<usize>,
    pub models: Option<Vec<ModelTag>>,
    pub sigma: Option<f64>,
    pub sigma_list: Option<Vec<f64>>,
    pub mc: Option<bool>,
    pub trials: Option<usize>,
    pub deviations: Option<Vec<Length>>,
    pub dx: Option<Length>,
    pub dy: Option<Length>,
    pub deviation_model: Option<ModelTag>,
    pub sens_sides: Option<Vec<usize>>,
    pub sens_spacings: Option<Vec<Length>>,
    pub delta_start: Option<Length>,
    pub delta_stop: Option<Length>,
    pub delta_points: Option<usize>,
    pub ple: Option<f64>,
    pub ref_distance: Option<Length>,
    pub shadow_sigma_db: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
}

impl PartialConfig {
    /// Overlays `higher` on top of `self`: set fields in `higher` win.
    pub fn merged_with(&self, higher: &PartialConfig) -> PartialConfig {
        macro_rules! pick {
            ($field:ident) => {
                higher.$field.clone().or_else(|| self.$field.clone())
            };
        }
        PartialConfig {
            side: pick!(side),
            spacing: pick!(spacing),
            frequency_hz: pick!(frequency_hz),
            focal: pick!(focal),
            power_w: pick!(power_w),
            grid_kind: pick!(grid_kind),
            grid_start: pick!(grid_start),
            grid_stop: pick!(grid_stop),
            grid_points: pick!(grid_points),
            models: pick!(models),
            sigma: pick!(sigma),
            sigma_list: pick!(sigma_list),
            mc: pick!(mc),
            trials: pick!(trials),
            deviations: pick!(deviations),
            dx: pick!(dx),
            dy: pick!(dy),
            deviation_model: pick!(deviation_model),
            sens_sides: pick!(sens_sides),
            sens_spacings: pick!(sens_spacings),
            delta_start: pick!(delta_start),
            delta_stop: pick!(delta_stop),
            delta_points: pick!(delta_points),
            ple: pick!(ple),
            ref_distance: pick!(ref_distance),
            shadow_sigma_db: pick!(shadow_sigma_db),
            seed: pick!(seed),
            format: pick!(format),
        }
    }
}

/// Fully resolved run configuration. Every artifact embeds one of these, so
/// any output file carries the complete recipe (defaults and seed included)
/// that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub side: usize,
    pub spacing_m: f64,
    pub frequency_hz: f64,
    pub wavelength_m: f64,
    pub focal_m: f64,
    pub power_w: f64,
    pub grid: GridKind,
    pub grid_start_m: f64,
    pub grid_stop_m: f64,
    pub grid_points: usize,
    pub models: Vec<ModelTag>,
    pub sigma: f64,
    pub sigma_list: Vec<f64>,
    pub mc: bool,
    pub trials: usize,
    pub deviations_m: Vec<f64>,
    pub dx_m: Option<f64>,
    pub dy_m: Option<f64>,
    pub deviation_model: ModelTag,
    pub sens_sides: Vec<usize>,
    pub sens_spacings_m: Vec<f64>,
    pub delta_start_m: f64,
    pub delta_stop_m: f64,
    pub delta_points: usize,
    pub ple: f64,
    pub ref_distance_m: f64,
    pub shadow_sigma_db: f64,
    pub seed: Option<u64>,
}

impl ResolvedConfig {
    /// Whether this run, under the given command, draws random numbers.
    pub fn is_stochastic(&self, command: CommandKind) -> bool {
        match command {
            CommandKind::Noise => self.mc,
            CommandKind::Emulate => self.sigma > 0.0 || self.shadow_sigma_db > 0.0,
            _ => false,
        }
    }
}

/// Fills every unset field of `layered` with its default and converts all
/// lengths to meters.
///
/// # Errors
///
/// Rejects non-positive frequency (needed before anything else, since the
/// wavelength scales every `lam` quantity) and validation failures that the
/// key-level parsers cannot see.
pub fn resolve(layered: &PartialConfig, command: CommandKind) -> Result<ResolvedConfig, CliError> {
    let frequency_hz = layered.frequency_hz.unwrap_or(300.0e9);
    if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
        return Err(CliError::Validation(format!(
            "frequency must be positive and finite (got {frequency_hz})"
        )));
    }
    let wavelength_m = SPEED_OF_LIGHT / frequency_hz;
    let resolve_len = |len: Option<Length>, default: Length| -> f64 {
        len.unwrap_or(default).resolve(wavelength_m)
    };

    let side = layered.side.unwrap_or(7);
    let spacing_m = resolve_len(layered.spacing, Length::Lambdas(15.0));
    let focal_m = resolve_len(layered.focal, Length::Lambdas(700.0));
    let power_w = layered.power_w.unwrap_or(1.0);

    // Grid defaults depend on the command: sweeps default to a wide log grid,
    // the measurement emulator to the short linear walk a positioner rail
    // would take.
    let (default_kind, default_start, default_stop, default_points) =
        if command == CommandKind::Emulate {
            (GridKind::Linear, 0.5 * focal_m, 2.5 * focal_m, 41)
        } else {
            (GridKind::Log, 0.2 * focal_m, 4.0 * focal_m, 400)
        };
    let grid = layered.grid_kind.unwrap_or(default_kind);
    let grid_start_m = resolve_len(layered.grid_start, Length::Meters(default_start));
    let grid_stop_m = resolve_len(layered.grid_stop, Length::Meters(default_stop));
    let grid_points = layered.grid_points.unwrap_or(default_points);

    let models = layered
        .models
        .clone()
        .unwrap_or_else(|| vec![ModelTag::Exact, ModelTag::ClosedForm]);
    for model in &models {
        if !matches!(model, ModelTag::Exact | ModelTag::ClosedForm) {
            return Err(CliError::Validation(format!(
                "zsweep models must be exact or closed_form (got {model}); \
                 use the noise/deviation/emulate commands for the other models"
            )));
        }
    }

    // Phase jitter is the point of the noise command, so it defaults on;
    // the emulator stays deterministic unless jitter is asked for.
    let default_sigma = match command {
        CommandKind::Emulate => 0.0,
        _ => 0.5,
    };
    let sigma = layered.sigma.unwrap_or(default_sigma);
    let sigma_list = layered.sigma_list.clone().unwrap_or_else(|| vec![sigma]);
    let mc = layered.mc.unwrap_or(false);
    let trials = layered.trials.unwrap_or(10_000);

    if layered.deviations.is_some() && (layered.dx.is_some() || layered.dy.is_some()) {
        return Err(CliError::Validation(
            "set either a deviations list (dx = dy = each entry) or an explicit dx/dy pair, \
             not both"
                .into(),
        ));
    }
    let deviations_m: Vec<f64> = layered
        .deviations
        .clone()
        .unwrap_or_else(|| {
            [0.0, 0.25, 0.5, 1.0]
                .into_iter()
                .map(Length::Lambdas)
                .collect()
        })
        .into_iter()
        .map(|d| d.resolve(wavelength_m))
        .collect();
    let dx_m = layered.dx.map(|d| d.resolve(wavelength_m));
    let dy_m = layered.dy.map(|d| d.resolve(wavelength_m));
    let deviation_model = layered.deviation_model.unwrap_or(ModelTag::Deviated);
    if !matches!(
        deviation_model,
        ModelTag::Deviated | ModelTag::DeviatedTaylor
    ) {
        return Err(CliError::Validation(format!(
            "deviation_model must be deviated or deviated_taylor (got {deviation_model})"
        )));
    }

    let sens_sides = layered.sens_sides.clone().unwrap_or_else(|| vec![5, 7]);
    let sens_spacings_m: Vec<f64> = layered
        .sens_spacings
        .clone()
        .unwrap_or_else(|| vec![Length::Lambdas(10.0), Length::Lambdas(15.0)])
        .into_iter()
        .map(|d| d.resolve(wavelength_m))
        .collect();
    let delta_start_m = resolve_len(layered.delta_start, Length::Lambdas(0.0));
    let delta_stop_m = resolve_len(layered.delta_stop, Length::Lambdas(1.0));
    let delta_points = layered.delta_points.unwrap_or(21);

    let ple = layered.ple.unwrap_or(1.91);
    let ref_distance_m = resolve_len(layered.ref_distance, Length::Meters(1.0));
    let shadow_sigma_db = layered.shadow_sigma_db.unwrap_or(0.0);

    let config = ResolvedConfig {
        side,
        spacing_m,
        frequency_hz,
        wavelength_m,
        focal_m,
        power_w,
        grid,
        grid_start_m,
        grid_stop_m,
        grid_points,
        models,
        sigma,
        sigma_list,
        mc,
        trials,
        deviations_m,
        dx_m,
        dy_m,
        deviation_model,
        sens_sides,
        sens_spacings_m,
        delta_start_m,
        delta_stop_m,
        delta_points,
        ple,
        ref_distance_m,
        shadow_sigma_db,
        seed: layered.seed,
    };
    validate(&config, command)?;
    Ok(config)
}

fn validate(config: &ResolvedConfig, command: CommandKind) -> Result<(), CliError> {
    let positive = |name: &str, value: f64| -> Result<(), CliError> {
        if value.is_finite() && value > 0.0 {
            Ok(())
        } else {
            Err(CliError::Validation(format!(
                "{name} must be positive and finite (got {value})"
            )))
        }
    };
    positive("power", config.power_w)?;
    positive("spacing", config.spacing_m)?;
    positive("focal", config.focal_m)?;
    if config.sigma < 0.0 || !config.sigma.is_finite() {
        return Err(CliError::Validation(format!(
            "sigma must be non-negative and finite (got {})",
            config.sigma
        )));
    }
    if let Some(bad) = config
        .sigma_list
        .iter()
        .find(|s| !(s.is_finite() && **s >= 0.0))
    {
        return Err(CliError::Validation(format!(
            "sigma_list entries must be non-negative and finite (got {bad})"
        )));
    }
    if config.shadow_sigma_db < 0.0 || !config.shadow_sigma_db.is_finite() {
        return Err(CliError::Validation(format!(
            "shadow_sigma must be non-negative and finite (got {})",
            config.shadow_sigma_db
        )));
    }
    if command == CommandKind::Noise && config.mc && config.trials < 2 {
        return Err(CliError::Validation(format!(
            "Monte Carlo needs at least 2 trials (got {})",
            config.trials
        )));
    }
    if config.is_stochastic(command) && config.seed.is_none() {
        return Err(CliError::Validation(format!(
            "this {} run draws random numbers; set `seed` (--seed or the seed config key) \
             so it is reproducible",
            command.name()
        )));
    }
    Ok(())
}

/// Parses a key = value configuration document.
///
/// Lines are `key = value`; blank lines and lines starting with `#` are
/// skipped. Unknown keys, malformed lines and unparsable values are each
/// reported with the file name and 1-based line number.
pub fn parse_config_file(path: &Path, text: &str) -> Result<PartialConfig, CliError> {
    let mut out = PartialConfig::default();
    let file = path.display();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{file}:{line_no}: expected `key = value`, got `{line}`"
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        apply_key(&mut out, key, value)
            .map_err(|msg| CliError::Config(format!("{file}:{line_no}: key `{key}`: {msg}")))?;
    }
    Ok(out)
}

/// Applies one `key = value` pair to a partial configuration. The error is
/// the bare message; callers attach file/line context.
fn apply_key(out: &mut PartialConfig, key: &str, value: &str) -> Result<(), String> {
    fn num<T: FromStr>(value: &str, what: &str) -> Result<T, String> {
        value
            .trim()
            .parse()
            .map_err(|_| format!("`{value}` is not a valid {what}"))
    }
    fn list<T, F>(value: &str, parse_one: F) -> Result<Vec<T>, String>
    where
        F: Fn(&str) -> Result<T, String>,
    {
        let items: Vec<&str> = value.split(',').map(str::trim).collect();
        if items.iter().any(|s| s.is_empty()) {
            return Err("list has an empty entry".into());
        }
        items.into_iter().map(parse_one).collect()
    }

    match key {
        "side" => out.side = Some(num(value, "integer")?),
        "spacing" => out.spacing = Some(value.parse()?),
        "frequency" => out.frequency_hz = Some(num(value, "number")?),
        "focal" => out.focal = Some(value.parse()?),
        "power" => out.power_w = Some(num(value, "number")?),
        "grid" => out.grid_kind = Some(value.parse()?),
        "grid_start" => out.grid_start = Some(value.parse()?),
        "grid_stop" => out.grid_stop = Some(value.parse()?),
        "grid_points" => out.grid_points = Some(num(value, "integer")?),
        "models" => out.models = Some(list(value, parse_model_tag)?),
        "sigma" => out.sigma = Some(num(value, "number")?),
        "sigma_list" => out.sigma_list = Some(list(value, |s| num(s, "number"))?),
        "mc" => {
            out.mc = Some(match value {
                "true" => true,
                "false" => false,
                other => return Err(format!("`{other}` is not a boolean (true, false)")),
            })
        }
        "trials" => out.trials = Some(num(value, "integer")?),
        "deviations" => out.deviations = Some(list(value, |s| s.parse())?),
        "dx" => out.dx = Some(value.parse()?),
        "dy" => out.dy = Some(value.parse()?),
        "deviation_model" => out.deviation_model = Some(parse_model_tag(value)?),
        "sens_sides" => out.sens_sides = Some(list(value, |s| num(s, "integer"))?),
        "sens_spacings" => out.sens_spacings = Some(list(value, |s| s.parse())?),
        "delta_start" => out.delta_start = Some(value.parse()?),
        "delta_stop" => out.delta_stop = Some(value.parse()?),
        "delta_points" => out.delta_points = Some(num(value, "integer")?),
        "ple" => out.ple = Some(num(value, "number")?),
        "ref_distance" => out.ref_distance = Some(value.parse()?),
        "shadow_sigma" => out.shadow_sigma_db = Some(num(value, "number")?),
        "seed" => out.seed = Some(num(value, "integer")?),
        "format" => out.format = Some(value.parse()?),
        other => return Err(format!("unknown key `{other}`")),
    }
    Ok(())
}

/// Parses a model tag name as used in artifacts and config values.
pub fn parse_model_tag(s: &str) -> Result<ModelTag, String> {
    match s.trim() {
        "exact" => Ok(ModelTag::Exact),
        "closed_form" => Ok(ModelTag::ClosedForm),
        "noisy_expectation" => Ok(ModelTag::NoisyExpectation),
        "noisy_mc" => Ok(ModelTag::NoisyMc),
        "deviated" => Ok(ModelTag::Deviated),
        "deviated_taylor" => Ok(ModelTag::DeviatedTaylor),
        "emulated" => Ok(ModelTag::Emulated),
        other => Err(format!("`{other}` is not a model name")),
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::Log => "log",
            GridKind::Linear => "linear",
        })
    }
}

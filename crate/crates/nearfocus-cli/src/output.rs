//! Artifact writers: CSV and JSON trace documents, the sensitivity table,
//! the lobe-geometry report, and the per-run sidecar.
//!
//! Everything here is deterministic: floats are rendered with the shortest
//! representation that parses back to the same bits, JSON object keys follow
//! fixed struct order, and files land via write-to-temp + atomic rename so a
//! crash never leaves a partial artifact behind.

use crate::config::ResolvedConfig;
use crate::CliError;
use nearfocus::sweep::{ModelTag, PowerTrace, SensitivityTable, TraceComparison};
use nearfocus::{geometry, Error};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

/// Artifact schema version, bumped on any breaking layout change.
pub const SCHEMA_VERSION: u32 = 1;

/// JSON form of a trace: schema header, full resolved configuration, the
/// grid/value columns, and the model tag.
#[derive(Debug, Serialize, Deserialize)]
pub struct TraceArtifact {
    pub schema_version: u32,
    pub config: ResolvedConfig,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub tag: ModelTag,
}

impl TraceArtifact {
    pub fn new(config: &ResolvedConfig, trace: &PowerTrace) -> Self {
        TraceArtifact {
            schema_version: SCHEMA_VERSION,
            config: config.clone(),
            grid: trace.grid().to_vec(),
            values: trace.values().to_vec(),
            tag: trace.model(),
        }
    }

    /// Rebuilds the validated trace this artifact describes.
    pub fn to_trace(&self) -> Result<PowerTrace, Error> {
        let array = geometry::ArrayConfig::new(
            self.config.side,
            self.config.spacing_m,
            self.config.wavelength_m,
        )?;
        let scenario = geometry::FocusScenario::new(self.config.focal_m, self.config.power_w)?;
        PowerTrace::new(
            array,
            scenario,
            self.tag,
            self.grid.clone(),
            self.values.clone(),
        )
    }
}

/// Reads a JSON trace artifact back from disk.
pub fn read_trace_artifact(path: &Path) -> Result<TraceArtifact, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("{}: not a trace artifact: {e}", path.display())))
}

/// Renders a trace as CSV: `l_m,l_over_lambda,power_w,model` (the power
/// column is `power_norm` for normalized models), LF line endings.
pub fn trace_csv(trace: &PowerTrace) -> String {
    let power_column = if trace.model().is_normalized() {
        "power_norm"
    } else {
        "power_w"
    };
    let wavelength = trace.array().wavelength();
    let model = trace.model();
    let mut out = String::new();
    let _ = writeln!(out, "l_m,l_over_lambda,{power_column},model");
    for (l, v) in trace.grid().iter().zip(trace.values()) {
        let _ = writeln!(out, "{l},{},{v},{model}", l / wavelength);
    }
    out
}

/// Renders a trace as a pretty-printed JSON artifact.
pub fn trace_json(config: &ResolvedConfig, trace: &PowerTrace) -> Result<String, CliError> {
    to_json_document(&TraceArtifact::new(config, trace))
}

/// Renders a sensitivity table as CSV: `delta_m,delta_over_lambda` followed
/// by one column per panel case.
pub fn sensitivity_csv(table: &SensitivityTable, wavelength: f64) -> String {
    let mut out = String::from("delta_m,delta_over_lambda");
    for row in &table.rows {
        out.push(',');
        out.push_str(&row.label);
    }
    out.push('\n');
    for (index, delta) in table.deltas.iter().enumerate() {
        let _ = write!(out, "{delta},{}", delta / wavelength);
        for row in &table.rows {
            let _ = write!(out, ",{}", row.normalized_power[index]);
        }
        out.push('\n');
    }
    out
}

/// One side of the lobe report: predicted edge, measured minimum, and their
/// relative gap.
#[derive(Debug, Serialize)]
pub struct LobeSideReport {
    /// Closed-form edge offset from the focal distance, meters (negative on
    /// the backward side); `None` when the closed form leaves this side
    /// unbounded.
    pub predicted_offset_m: Option<f64>,
    /// Offset of the measured power minimum from the focal distance, meters;
    /// `None` when the sweep found no minimum on this side.
    pub measured_offset_m: Option<f64>,
    /// |measured − predicted| / |predicted|, when both exist.
    pub relative_gap: Option<f64>,
}

/// Lobe-geometry report: closed-form main-lobe extents next to minima
/// measured on a fine exact-field sweep.
#[derive(Debug, Serialize)]
pub struct LobeReport {
    pub schema_version: u32,
    pub config: ResolvedConfig,
    /// Focusing strength r from the closed form; the forward edge exists
    /// only for r > 1.
    pub strength: f64,
    pub backward: LobeSideReport,
    pub forward: LobeSideReport,
    /// Step of the measurement grid, meters.
    pub grid_step_m: f64,
    /// Note set when the minima search failed on a side.
    pub note: Option<String>,
}

/// Comparison document printed by the compare command.
#[derive(Debug, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub reference_tag: ModelTag,
    pub candidate_tag: ModelTag,
    pub normalized: bool,
    #[serde(flatten)]
    pub comparison: TraceComparison,
}

/// Serializes any document as pretty JSON with a trailing newline.
pub fn to_json_document<T: Serialize>(document: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(document)
        .map_err(|e| CliError::Io(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Writes bytes to `path` atomically (temp file in the same directory, then
/// rename), creating parent directories as needed.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let context = |e: &dyn std::fmt::Display| CliError::Io(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir).map_err(|e| context(&e))?;
    }
    let mut tmp = match dir {
        Some(dir) => tempfile::NamedTempFile::new_in(dir),
        None => tempfile::NamedTempFile::new_in("."),
    }
    .map_err(|e| context(&e))?;
    tmp.write_all(contents.as_bytes())
        .map_err(|e| context(&e))?;
    tmp.persist(path).map_err(|e| context(&e))?;
    Ok(())
}

/// Per-run sidecar listing the resolved configuration and every file the run
/// wrote, so CSV artifacts carry their recipe too.
#[derive(Debug, Serialize)]
pub struct RunRecord<'a> {
    pub schema_version: u32,
    pub command: &'a str,
    pub config: &'a ResolvedConfig,
    /// File names (relative to the output directory) in write order.
    pub files: Vec<String>,
}

/// Formats a dimensionless ratio (e.g. Δ/λ or σ) as a file-name fragment:
/// shortest round-trip digits with `.` → `p` and `-` → `m`.
pub fn number_tag(value: f64) -> String {
    format!("{value}").replace('.', "p").replace('-', "m")
}

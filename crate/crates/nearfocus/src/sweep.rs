//! Sweep harness: distance grids, power traces for every model variant, and
//! the analysis helpers (peak finding, lobe-minima measurement, trace
//! comparison, focusing classification, deviation-sensitivity tables) the
//! command-line tool builds its reports from.

use crate::field::FocusedArray;
use crate::geometry::{ArrayConfig, FocusScenario};
use crate::lobe;
use crate::numerics::substream_seed;
use crate::pathloss::{emulate_measurement_trace, MeasurementModel};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Which model produced a trace. The serialized names are part of the
/// artifact schema.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelTag {
    /// Exact phasor-sum field.
    Exact,
    /// Closed-form main-lobe approximation.
    ClosedForm,
    /// Analytic expectation under Gaussian phase noise.
    NoisyExpectation,
    /// Monte Carlo mean under Gaussian phase noise.
    NoisyMc,
    /// Exact field with a rigid in-plane panel shift.
    Deviated,
    /// First-order model of the panel shift.
    DeviatedTaylor,
    /// Emulated measurement (CI amplitudes, normalized).
    Emulated,
}

impl ModelTag {
    /// Stable lower-snake-case name used in file columns and artifact tags.
    pub fn as_str(&self) -> &'static str {
        match self {
            ModelTag::Exact => "exact",
            ModelTag::ClosedForm => "closed_form",
            ModelTag::NoisyExpectation => "noisy_expectation",
            ModelTag::NoisyMc => "noisy_mc",
            ModelTag::Deviated => "deviated",
            ModelTag::DeviatedTaylor => "deviated_taylor",
            ModelTag::Emulated => "emulated",
        }
    }

    /// Whether the trace values are peak-normalized rather than watts.
    pub fn is_normalized(&self) -> bool {
        matches!(self, ModelTag::Emulated)
    }
}

impl fmt::Display for ModelTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One sample of a trace: grid index, distance, value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridSample {
    pub index: usize,
    pub distance: f64,
    pub value: f64,
}

/// A power-versus-distance trace with the configuration that produced it.
///
/// Invariants (enforced on construction and on deserialization): grid and
/// values have equal, non-zero length; grid entries are positive, finite and
/// strictly increasing; values are finite.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawTrace")]
pub struct PowerTrace {
    array: ArrayConfig,
    scenario: FocusScenario,
    model: ModelTag,
    grid: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawTrace {
    array: ArrayConfig,
    scenario: FocusScenario,
    model: ModelTag,
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawTrace> for PowerTrace {
    type Error = Error;

    fn try_from(raw: RawTrace) -> Result<Self> {
        PowerTrace::new(raw.array, raw.scenario, raw.model, raw.grid, raw.values)
    }
}

impl PowerTrace {
    /// Validates and assembles a trace.
    ///
    /// # Errors
    ///
    /// Rejects empty traces, mismatched lengths, non-finite values, and grids
    /// that are not positive and strictly increasing.
    pub fn new(
        array: ArrayConfig,
        scenario: FocusScenario,
        model: ModelTag,
        grid: Vec<f64>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if grid.is_empty() {
            return Err(Error::EmptyTrace);
        }
        if grid.len() != values.len() {
            return Err(Error::LengthMismatch {
                grid: grid.len(),
                values: values.len(),
            });
        }
        validate_grid(&grid)?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("trace values must be finite".into()));
        }
        Ok(Self {
            array,
            scenario,
            model,
            grid,
            values,
        })
    }

    pub fn array(&self) -> &ArrayConfig {
        &self.array
    }

    pub fn scenario(&self) -> &FocusScenario {
        &self.scenario
    }

    pub fn model(&self) -> ModelTag {
        self.model
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty traces
    }

    /// Global maximum of the trace; ties resolve to the smaller distance.
    pub fn peak(&self) -> GridSample {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        GridSample {
            index: best,
            distance: self.grid[best],
            value: self.values[best],
        }
    }
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidGrid(
            "grid distances must be positive and finite".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "grid distances must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// `points` logarithmically spaced distances over `[start, stop]`, endpoints
/// exact.
///
/// # Errors
///
/// Needs `points ≥ 2` and `0 < start < stop`, all finite.
pub fn log_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid(format!(
            "a grid needs at least 2 points (got {points})"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start > 0.0 && start < stop) {
        return Err(Error::InvalidGrid(format!(
            "log grid needs 0 < start < stop (got {start}..{stop})"
        )));
    }
    let (ln_start, ln_stop) = (start.ln(), stop.ln());
    let step = (ln_stop - ln_start) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| (ln_start + i as f64 * step).exp())
        .collect();
    grid[0] = start;
    *grid.last_mut().expect("points >= 2") = stop;
    Ok(grid)
}

/// `points` linearly spaced distances over `[start, stop]`, endpoints exact.
///
/// # Errors
///
/// Needs `points ≥ 2` and `0 < start < stop`, all finite.
pub fn linear_grid(start: f64, stop: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::InvalidGrid(format!(
            "a grid needs at least 2 points (got {points})"
        )));
    }
    if !(start.is_finite() && stop.is_finite() && start > 0.0 && start < stop) {
        return Err(Error::InvalidGrid(format!(
            "linear grid needs 0 < start < stop (got {start}..{stop})"
        )));
    }
    let step = (stop - start) / (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points).map(|i| start + i as f64 * step).collect();
    grid[0] = start;
    *grid.last_mut().expect("points >= 2") = stop;
    Ok(grid)
}

/// Number of points in the default sweep grid.
pub const DEFAULT_GRID_POINTS: usize = 400;

/// Default observation grid for a scenario: 400 log-spaced points from 0.2·L
/// to 4·L.
pub fn default_grid(scenario: &FocusScenario) -> Vec<f64> {
    let focal = scenario.focal_distance();
    log_grid(0.2 * focal, 4.0 * focal, DEFAULT_GRID_POINTS)
        .expect("default grid bounds are always valid")
}

/// Exact-field trace over `grid`.
///
/// Grid points are evaluated in parallel; each point's phasor sum is itself
/// strictly sequential, so the result is identical to a serial run.
pub fn exact_trace(focused: &FocusedArray, grid: &[f64]) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| focused.received_power(l))
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::Exact,
        grid.to_vec(),
        values,
    )
}

/// Closed-form trace over `grid`.
pub fn closed_form_trace(focused: &FocusedArray, grid: &[f64]) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let array = focused.array();
    let scenario = focused.scenario();
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| lobe::approx_power(array, scenario, l))
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *array,
        *scenario,
        ModelTag::ClosedForm,
        grid.to_vec(),
        values,
    )
}

/// Analytic noisy-expectation trace over `grid` for phase-noise level
/// `sigma`.
pub fn noisy_expectation_trace(
    focused: &FocusedArray,
    grid: &[f64],
    sigma: f64,
) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| focused.expected_power_noisy(l, sigma))
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::NoisyExpectation,
        grid.to_vec(),
        values,
    )
}

/// Monte Carlo noisy trace over `grid`: per point, the mean of `trials`
/// seeded realizations.
///
/// Each grid point gets its own substream family derived from `seed` and the
/// point index, so the estimate at a point does not depend on how many other
/// points the grid holds.
pub fn noisy_mc_trace(
    focused: &FocusedArray,
    grid: &[f64],
    sigma: f64,
    trials: usize,
    seed: u64,
) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid
        .par_iter()
        .enumerate()
        .map(|(index, &l)| {
            let point_seed = substream_seed(seed, index as u64);
            focused
                .monte_carlo_expected_power(l, sigma, trials, point_seed)
                .map(|estimate| estimate.mean)
        })
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::NoisyMc,
        grid.to_vec(),
        values,
    )
}

/// Exact deviated-panel trace over `grid` for a rigid shift (dx, dy).
pub fn deviated_trace(
    focused: &FocusedArray,
    grid: &[f64],
    dx: f64,
    dy: f64,
) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| focused.received_power_deviated(l, dx, dy))
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::Deviated,
        grid.to_vec(),
        values,
    )
}

/// First-order deviated-panel trace over `grid` for a rigid shift (dx, dy).
pub fn deviated_taylor_trace(
    focused: &FocusedArray,
    grid: &[f64],
    dx: f64,
    dy: f64,
) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&l| focused.received_power_deviated_taylor(l, dx, dy))
        .collect::<Result<_>>()?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::DeviatedTaylor,
        grid.to_vec(),
        values,
    )
}

/// Emulated-measurement trace over `grid` (peak-normalized values).
pub fn emulated_trace(
    focused: &FocusedArray,
    model: &MeasurementModel,
    grid: &[f64],
    seed: Option<u64>,
) -> Result<PowerTrace> {
    validate_grid(grid)?;
    let values = emulate_measurement_trace(focused, model, grid, seed)?;
    PowerTrace::new(
        *focused.array(),
        *focused.scenario(),
        ModelTag::Emulated,
        grid.to_vec(),
        values,
    )
}

/// The two local minima bracketing the main lobe of a trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LobeMinima {
    /// First local minimum on the panel side of the lobe crest.
    pub backward: GridSample,
    /// First local minimum on the far side of the lobe crest.
    pub forward: GridSample,
}

/// Measures the main-lobe minima of a trace around its focal distance.
///
/// Starting from the grid point nearest the focal distance, the search first
/// climbs to the local crest (the trace peak can sit slightly off the focal
/// point, and on wide grids the global maximum may not even belong to the
/// lobe), then walks outward on each side until the power first turns back
/// up.
///
/// # Errors
///
/// Fails with [`Error::LobeMinimumNotFound`] when a side of the lobe never
/// turns up within the grid.
pub fn find_lobe_minima(trace: &PowerTrace) -> Result<LobeMinima> {
    let grid = trace.grid();
    let values = trace.values();
    let n = grid.len();
    let focal = trace.scenario().focal_distance();

    // Grid point nearest the focal distance (ties toward the smaller l).
    let mut crest = (0..n)
        .min_by(|&a, &b| {
            let da = (grid[a] - focal).abs();
            let db = (grid[b] - focal).abs();
            da.partial_cmp(&db).expect("grid is finite")
        })
        .expect("trace is never empty");

    // Hill-climb to the lobe crest.
    loop {
        let left_up = crest > 0 && values[crest - 1] > values[crest];
        let right_up = crest + 1 < n && values[crest + 1] > values[crest];
        crest = match (left_up, right_up) {
            (false, false) => break,
            (true, false) => crest - 1,
            (false, true) => crest + 1,
            (true, true) => {
                if values[crest - 1] >= values[crest + 1] {
                    crest - 1
                } else {
                    crest + 1
                }
            }
        };
    }

    let descend = |mut i: usize, step_up: bool| -> Option<usize> {
        // step_up walks toward larger indices, otherwise toward smaller.
        loop {
            let next = if step_up {
                if i + 1 >= n {
                    return None;
                }
                i + 1
            } else {
                if i == 0 {
                    return None;
                }
                i - 1
            };
            if values[next] < values[i] {
                i = next;
            } else {
                return Some(i);
            }
        }
    };

    let backward = descend(crest, false).ok_or(Error::LobeMinimumNotFound { side: "backward" })?;
    let forward = descend(crest, true).ok_or(Error::LobeMinimumNotFound { side: "forward" })?;
    let sample = |index: usize| GridSample {
        index,
        distance: grid[index],
        value: values[index],
    };
    Ok(LobeMinima {
        backward: sample(backward),
        forward: sample(forward),
    })
}

/// Outcome of comparing a candidate trace against a reference trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceComparison {
    /// Largest pointwise |candidate − reference| / |reference| over the
    /// overlapping range.
    pub max_relative_error: f64,
    /// Root-mean-square of the same pointwise relative errors.
    pub rms_relative_error: f64,
    /// Absolute distance between the two peak locations, metres.
    pub peak_shift: f64,
}

/// Compares `candidate` against `reference` over their overlapping distance
/// range.
///
/// The candidate is resampled onto the reference grid by linear
/// interpolation. With `normalize_peaks` set, each trace is first scaled by
/// its own global maximum, which makes traces with different absolute units
/// (e.g. watts vs normalized measurements) comparable. Relative errors use
/// the (scaled) reference as denominator; points where the reference is
/// exactly zero are skipped. The peak shift always uses the two original
/// grids.
///
/// # Errors
///
/// Fails with [`Error::DisjointGrids`] when the grids share no distance
/// range.
pub fn compare_traces(
    reference: &PowerTrace,
    candidate: &PowerTrace,
    normalize_peaks: bool,
) -> Result<TraceComparison> {
    let ref_peak = reference.peak();
    let cand_peak = candidate.peak();
    let ref_scale = if normalize_peaks {
        1.0 / ref_peak.value
    } else {
        1.0
    };
    let cand_scale = if normalize_peaks {
        1.0 / cand_peak.value
    } else {
        1.0
    };

    let cand_grid = candidate.grid();
    let cand_values = candidate.values();
    let (lo, hi) = (cand_grid[0], cand_grid[cand_grid.len() - 1]);

    let mut max_rel = 0.0f64;
    let mut sum_sq = crate::numerics::NeumaierSum::new();
    let mut count = 0usize;
    for (&l, &ref_value) in reference.grid().iter().zip(reference.values()) {
        if l < lo || l > hi {
            continue;
        }
        let resampled = interpolate(cand_grid, cand_values, l);
        let a = ref_value * ref_scale;
        let b = resampled * cand_scale;
        if a == 0.0 {
            continue;
        }
        let rel = ((b - a) / a).abs();
        max_rel = max_rel.max(rel);
        sum_sq.add(rel * rel);
        count += 1;
    }
    if count == 0 {
        return Err(Error::DisjointGrids);
    }
    Ok(TraceComparison {
        max_relative_error: max_rel,
        rms_relative_error: (sum_sq.value() / count as f64).sqrt(),
        peak_shift: (cand_peak.distance - ref_peak.distance).abs(),
    })
}

/// Linear interpolation of `(grid, values)` at `l`, with `l` inside the grid
/// range.
fn interpolate(grid: &[f64], values: &[f64], l: f64) -> f64 {
    debug_assert!(l >= grid[0] && l <= grid[grid.len() - 1]);
    // Index of the first grid point >= l.
    let upper = grid.partition_point(|&g| g < l);
    if upper == 0 {
        return values[0];
    }
    if grid[upper] == l {
        return values[upper];
    }
    let (g0, g1) = (grid[upper - 1], grid[upper]);
    let t = (l - g0) / (g1 - g0);
    values[upper - 1] + t * (values[upper] - values[upper - 1])
}

/// Decides whether a trace exhibits near-field focusing: its maximum must
/// sit strictly inside the grid start and stand at least 3 dB above the
/// far edge of the sweep.
pub fn classify_focusing(trace: &PowerTrace) -> bool {
    let peak = trace.peak();
    let far_edge = *trace.values().last().expect("trace is never empty");
    if peak.index == 0 || far_edge <= 0.0 {
        return peak.index != 0; // a zero far edge with an interior peak still focuses
    }
    peak.index != 0 && 10.0 * (peak.value / far_edge).log10() >= 3.0
}

/// One panel configuration's row in a deviation-sensitivity table.
#[derive(Clone, Debug, Serialize)]
pub struct SensitivityRow {
    /// Human-readable configuration label (used as a CSV column header).
    pub label: String,
    pub array: ArrayConfig,
    pub scenario: FocusScenario,
    /// Focal power under deviation, normalized by the undeviated focal
    /// power; one entry per table deviation.
    pub normalized_power: Vec<f64>,
}

/// Focal-power sensitivity to rigid panel shifts for a set of
/// configurations.
#[derive(Clone, Debug, Serialize)]
pub struct SensitivityTable {
    /// Deviation magnitudes Δ in metres; each is applied as dx = dy = Δ.
    pub deltas: Vec<f64>,
    pub rows: Vec<SensitivityRow>,
}

/// Builds a deviation-sensitivity table: for every configuration and every
/// deviation Δ, the focal power with the panel rigidly shifted by
/// (Δ, Δ), normalized by the undeviated focal power.
///
/// Uses the first-order focal-point model, whose difference from the exact
/// field is far below the table's resolution for sub-wavelength shifts.
///
/// # Errors
///
/// Rejects an empty configuration set or an empty deviation list.
pub fn sensitivity_table(
    cases: &[(String, ArrayConfig, FocusScenario)],
    deltas: &[f64],
) -> Result<SensitivityTable> {
    if cases.is_empty() || deltas.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let rows = cases
        .iter()
        .map(|(label, array, scenario)| {
            let engine = FocusedArray::new(*array, *scenario);
            let baseline = engine.focal_power_deviated(0.0, 0.0);
            let normalized_power = deltas
                .iter()
                .map(|&delta| engine.focal_power_deviated(delta, delta) / baseline)
                .collect();
            SensitivityRow {
                label: label.clone(),
                array: *array,
                scenario: *scenario,
                normalized_power,
            }
        })
        .collect();
    Ok(SensitivityTable {
        deltas: deltas.to_vec(),
        rows,
    })
}

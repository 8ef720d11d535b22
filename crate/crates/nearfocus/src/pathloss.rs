//! Close-in path-loss model and the measurement emulator built on it.
//!
//! Link-budget measurements in this band are conventionally reported against
//! the close-in (CI) reference model
//!
//! ```text
//! PL(d) = FSPL(d₀) + 10·n·log₁₀(d/d₀) + X_σ,
//! ```
//!
//! with free-space path loss FSPL(d) = 20·log₁₀(4πd/λ), a fitted path-loss
//! exponent n, a reference distance d₀ (typically 1 m), and log-normal
//! shadow fading X_σ in dB. For n = 2 the deterministic part collapses to
//! FSPL(d) identically, which is the anchor the emulator tests lean on.
//!
//! [`emulate_measurement_trace`] produces the kind of normalized power trace
//! a measurement campaign yields: per-element amplitudes follow the CI model
//! at the common observation distance, optionally jittered by per-element
//! shadow-fading and phase-noise draws, then combined coherently with the
//! panel's focusing phases and peak-normalized.

use crate::field::FocusedArray;
use crate::geometry::element_distance;
use crate::numerics::NeumaierSum;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Free-space path loss 20·log₁₀(4πd/λ) in dB.
pub fn fspl_db(distance: f64, wavelength: f64) -> f64 {
    debug_assert!(distance > 0.0 && wavelength > 0.0);
    20.0 * (4.0 * PI * distance / wavelength).log10()
}

/// Parameters of the close-in path-loss model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CiPathLossParams {
    /// Fitted path-loss exponent n.
    pub path_loss_exponent: f64,
    /// Close-in reference distance d₀, metres.
    pub reference_distance: f64,
}

impl CiPathLossParams {
    /// Validates and builds CI parameters.
    ///
    /// # Errors
    ///
    /// Rejects non-finite or non-positive exponent or reference distance.
    pub fn new(path_loss_exponent: f64, reference_distance: f64) -> Result<Self> {
        if !(path_loss_exponent.is_finite() && path_loss_exponent > 0.0) {
            return Err(Error::InvalidPathLoss(format!(
                "path-loss exponent must be positive and finite (got {path_loss_exponent})"
            )));
        }
        if !(reference_distance.is_finite() && reference_distance > 0.0) {
            return Err(Error::InvalidPathLoss(format!(
                "reference distance must be positive and finite (got {reference_distance})"
            )));
        }
        Ok(Self {
            path_loss_exponent,
            reference_distance,
        })
    }
}

/// Deterministic CI path loss in dB at `distance`:
/// FSPL(d₀) + 10·n·log₁₀(d/d₀).
///
/// The wavelength enters through the free-space anchor at the reference
/// distance. Shadow fading is not included here; the emulator draws it
/// per element.
pub fn ci_path_loss_db(params: &CiPathLossParams, distance: f64, wavelength: f64) -> f64 {
    debug_assert!(distance > 0.0);
    fspl_db(params.reference_distance, wavelength)
        + 10.0 * params.path_loss_exponent * (distance / params.reference_distance).log10()
}

/// Impairment model for an emulated measurement run.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementModel {
    /// Amplitude model replacing the free-space gain.
    pub path_loss: CiPathLossParams,
    /// Per-element Gaussian phase-noise standard deviation, radians.
    pub phase_noise_sigma: f64,
    /// Per-element log-normal shadow-fading standard deviation, dB.
    pub shadow_sigma_db: f64,
}

impl MeasurementModel {
    /// Validates and builds a measurement model.
    ///
    /// # Errors
    ///
    /// Rejects negative or non-finite noise parameters (the path-loss
    /// parameters validate themselves in [`CiPathLossParams::new`]).
    pub fn new(
        path_loss: CiPathLossParams,
        phase_noise_sigma: f64,
        shadow_sigma_db: f64,
    ) -> Result<Self> {
        if !(phase_noise_sigma.is_finite() && phase_noise_sigma >= 0.0) {
            return Err(Error::InvalidSigma(phase_noise_sigma));
        }
        if !(shadow_sigma_db.is_finite() && shadow_sigma_db >= 0.0) {
            return Err(Error::InvalidSigma(shadow_sigma_db));
        }
        Ok(Self {
            path_loss,
            phase_noise_sigma,
            shadow_sigma_db,
        })
    }

    /// Whether any random impairment is enabled.
    pub fn is_stochastic(&self) -> bool {
        self.phase_noise_sigma > 0.0 || self.shadow_sigma_db > 0.0
    }
}

/// Emulates a measured, peak-normalized power trace over `grid`.
///
/// Per grid point the amplitude of every element follows the CI model at the
/// common observation distance (the same convention the exact engine uses
/// for its amplitude, which is what makes the n = 2, noise-free case match
/// the exact trace after normalization). When enabled, each element also
/// receives one shadow-fading draw (dB) and one phase-noise draw (radians).
///
/// Determinism contract: a single ChaCha stream seeded with `seed` is
/// consumed in grid order; per grid point, elements are walked in row-major
/// order, drawing shadow fading first and phase noise second. Draws for a
/// disabled impairment are skipped entirely, so a deterministic run is
/// bit-identical whether or not a seed is supplied.
///
/// The returned values are scaled so the maximum is exactly 1.
///
/// # Errors
///
/// Rejects an empty or non-positive grid, and a stochastic model without a
/// seed.
pub fn emulate_measurement_trace(
    focused: &FocusedArray,
    model: &MeasurementModel,
    grid: &[f64],
    seed: Option<u64>,
) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if let Some(&bad) = grid.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
        return Err(Error::InvalidDistance(bad));
    }
    let mut rng = match (model.is_stochastic(), seed) {
        (true, None) => return Err(Error::SeedRequired),
        (_, s) => s.map(ChaCha8Rng::seed_from_u64),
    };

    let array = focused.array();
    let k = array.wavenumber();
    let lambda = array.wavelength();
    let amplitude_scale = focused.scenario().transmit_power().sqrt();
    let draw_shadow = model.shadow_sigma_db > 0.0;
    let draw_phase = model.phase_noise_sigma > 0.0;

    let positions: Vec<(f64, f64)> = array.element_coordinates().collect();
    let focus_phases = focused.precoding_phases();

    let mut values = Vec::with_capacity(grid.len());
    for &l in grid {
        let loss_db = ci_path_loss_db(&model.path_loss, l, lambda);
        let base_amplitude = amplitude_scale * 10f64.powf(-loss_db / 20.0);
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for (index, &(x, y)) in positions.iter().enumerate() {
            let mut amplitude = base_amplitude;
            let mut phase = k * element_distance(x, y, l) + focus_phases[index];
            if draw_shadow {
                let shadow_db: f64 = rng
                    .as_mut()
                    .expect("stochastic model implies a seeded rng")
                    .sample::<f64, _>(StandardNormal)
                    * model.shadow_sigma_db;
                amplitude *= 10f64.powf(-shadow_db / 20.0);
            }
            if draw_phase {
                let noise: f64 = rng
                    .as_mut()
                    .expect("stochastic model implies a seeded rng")
                    .sample(StandardNormal);
                phase += model.phase_noise_sigma * noise;
            }
            let (sin, cos) = phase.sin_cos();
            re.add(amplitude * cos);
            im.add(amplitude * sin);
        }
        let re = re.value();
        let im = im.value();
        values.push(re * re + im * im);
    }

    let peak = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(peak.is_finite() && peak > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "emulated trace has no positive peak (max {peak})"
        )));
    }
    for v in &mut values {
        *v /= peak;
    }
    Ok(values)
}

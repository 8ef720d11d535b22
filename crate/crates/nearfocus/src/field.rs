//! Exact field engine: coherent phasor sums over every panel element with the
//! true spherical-wave distances, no paraxial or far-field shortcuts.
//!
//! The received power at an on-axis point of range l is
//!
//! ```text
//! P(l) = β(l) · |Σ_e exp(i(k·D_e(l) + ψ_e))|²,
//! β(l) = P_tx λ² / (N (4π l)²),
//! ```
//!
//! where D_e is the exact element distance, ψ_e = −k·D_e(L) the focusing
//! phase programmed for focal range L, and N the element count. At l = L all
//! phasors align and P(L) = β(L)·N² exactly — the focal identity the tests
//! pin down.
//!
//! The same engine handles hardware impairments:
//! * i.i.d. Gaussian phase noise per element, both in expectation (via the
//!   coherence factor e^{−σ²/2}) and by seeded Monte Carlo;
//! * a rigid in-plane panel shift, exactly and in a first-order Taylor form,
//!   plus the cheap focal-point specialization of the latter.

use crate::geometry::{element_distance, ArrayConfig, FocusScenario};
use crate::numerics::{substream_seed, NeumaierSum};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Expected attenuation of the coherent field under i.i.d. Gaussian phase
/// noise of standard deviation `sigma` radians: E[e^{iε}] = e^{−σ²/2}.
pub fn coherence_factor(sigma: f64) -> f64 {
    (-0.5 * sigma * sigma).exp()
}

/// Result of a Monte Carlo power estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    /// Sample mean of the received power, watts.
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation / √trials).
    pub standard_error: f64,
    /// Number of trials averaged.
    pub trials: usize,
}

/// A panel with its focusing phases resolved for one scenario.
///
/// Construction precomputes each element's coordinates and focusing phase
/// ψ_e = −k·D_e(L); evaluation at any observation distance is then a single
/// pass over the elements.
#[derive(Clone, Debug)]
pub struct FocusedArray {
    array: ArrayConfig,
    scenario: FocusScenario,
    positions: Vec<(f64, f64)>,
    focus_phases: Vec<f64>,
}

impl FocusedArray {
    /// Resolves the focusing phases of `array` for `scenario`.
    pub fn new(array: ArrayConfig, scenario: FocusScenario) -> Self {
        let k = array.wavenumber();
        let focal = scenario.focal_distance();
        let positions: Vec<(f64, f64)> = array.element_coordinates().collect();
        let focus_phases = positions
            .iter()
            .map(|&(x, y)| -(k * element_distance(x, y, focal)))
            .collect();
        Self {
            array,
            scenario,
            positions,
            focus_phases,
        }
    }

    /// Panel description this engine was built from.
    pub fn array(&self) -> &ArrayConfig {
        &self.array
    }

    /// Scenario this engine was built from.
    pub fn scenario(&self) -> &FocusScenario {
        &self.scenario
    }

    /// Per-element focusing phases ψ_e = −k·D_e(L), in row-major element
    /// order.
    pub fn precoding_phases(&self) -> &[f64] {
        &self.focus_phases
    }

    /// Power scale β(l) = P_tx λ² / (N (4π l)²) multiplying the squared
    /// phasor sum.
    ///
    /// # Errors
    ///
    /// Rejects a non-positive or non-finite distance.
    pub fn power_scale(&self, distance: f64) -> Result<f64> {
        self.check_distance(distance)?;
        Ok(self.power_scale_unchecked(distance))
    }

    /// Focal power predicted by the coherent-alignment identity,
    /// β(L)·N² = P_tx λ² N / (4π L)².
    pub fn predicted_focal_power(&self) -> f64 {
        let n = self.array.element_count() as f64;
        self.power_scale_unchecked(self.scenario.focal_distance()) * n * n
    }

    /// Exact received power at on-axis range `distance`.
    ///
    /// # Errors
    ///
    /// Rejects a non-positive or non-finite distance.
    pub fn received_power(&self, distance: f64) -> Result<f64> {
        self.check_distance(distance)?;
        let k = self.array.wavenumber();
        Ok(self.phasor_power(distance, |_, x, y| k * element_distance(x, y, distance)))
    }

    /// Expected received power under i.i.d. Gaussian phase noise of standard
    /// deviation `sigma` radians:
    /// E[P] = μ²·P(l) + β(l)·N·(1 − μ²) with μ = e^{−σ²/2}.
    ///
    /// At σ = 0 this reduces bit-for-bit to [`Self::received_power`].
    ///
    /// # Errors
    ///
    /// Rejects invalid distances and negative or non-finite `sigma`.
    pub fn expected_power_noisy(&self, distance: f64, sigma: f64) -> Result<f64> {
        self.check_sigma(sigma)?;
        let coherent = self.received_power(distance)?;
        let mu2 = {
            let mu = coherence_factor(sigma);
            mu * mu
        };
        let n = self.array.element_count() as f64;
        Ok(mu2 * coherent + self.power_scale_unchecked(distance) * n * (1.0 - mu2))
    }

    /// One random realization of the received power under Gaussian phase
    /// noise, drawing one N(0, σ²) phase error per element in row-major
    /// element order from `rng`.
    ///
    /// # Errors
    ///
    /// Rejects invalid distances and negative or non-finite `sigma`.
    pub fn sample_power_noisy<R: Rng + ?Sized>(
        &self,
        distance: f64,
        sigma: f64,
        rng: &mut R,
    ) -> Result<f64> {
        self.check_distance(distance)?;
        self.check_sigma(sigma)?;
        let k = self.array.wavenumber();
        Ok(self.phasor_power(distance, |_, x, y| {
            let noise: f64 = rng.sample(StandardNormal);
            k * element_distance(x, y, distance) + sigma * noise
        }))
    }

    /// Monte Carlo estimate of the expected noisy power from `trials`
    /// independent realizations.
    ///
    /// Each trial runs on its own ChaCha substream derived from `seed` and
    /// the trial index, so results are reproducible and independent of any
    /// batching. The standard error uses the n−1 sample variance.
    ///
    /// # Errors
    ///
    /// Rejects invalid distances, invalid `sigma`, and fewer than 2 trials.
    pub fn monte_carlo_expected_power(
        &self,
        distance: f64,
        sigma: f64,
        trials: usize,
        seed: u64,
    ) -> Result<MonteCarloEstimate> {
        if trials < 2 {
            return Err(Error::TooFewTrials(trials));
        }
        self.check_distance(distance)?;
        self.check_sigma(sigma)?;

        let mut samples = Vec::with_capacity(trials);
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(substream_seed(seed, trial as u64));
            samples.push(self.sample_power_noisy(distance, sigma, &mut rng)?);
        }

        let mean = {
            let mut acc = NeumaierSum::new();
            acc.extend(samples.iter().copied());
            acc.value() / trials as f64
        };
        let variance = {
            let mut acc = NeumaierSum::new();
            acc.extend(samples.iter().map(|&s| (s - mean) * (s - mean)));
            acc.value() / (trials - 1) as f64
        };
        Ok(MonteCarloEstimate {
            mean,
            standard_error: (variance / trials as f64).sqrt(),
            trials,
        })
    }

    /// Exact received power when the whole panel is rigidly shifted by
    /// (dx, dy) in its own plane while the focusing phases stay programmed
    /// for the unshifted geometry.
    ///
    /// # Errors
    ///
    /// Rejects a non-positive or non-finite distance.
    pub fn received_power_deviated(&self, distance: f64, dx: f64, dy: f64) -> Result<f64> {
        self.check_distance(distance)?;
        let k = self.array.wavenumber();
        Ok(self.phasor_power(distance, |_, x, y| {
            k * element_distance(x + dx, y + dy, distance)
        }))
    }

    /// First-order model of [`Self::received_power_deviated`]: each element's
    /// phase picks up k(x·dx + y·dy)/D on top of its unshifted value.
    ///
    /// # Errors
    ///
    /// Rejects a non-positive or non-finite distance.
    pub fn received_power_deviated_taylor(&self, distance: f64, dx: f64, dy: f64) -> Result<f64> {
        self.check_distance(distance)?;
        let k = self.array.wavenumber();
        Ok(self.phasor_power(distance, |_, x, y| {
            let d = element_distance(x, y, distance);
            // Grouped so that at the focal distance the unshifted phase and
            // the focusing phase cancel exactly before the Taylor term is
            // added; focal_power_deviated then agrees bit-for-bit.
            k * d + k * (x * dx + y * dy) / d
        }))
    }

    /// First-order deviated power evaluated at the focal distance, where the
    /// programmed phases cancel the geometric ones and only the Taylor shift
    /// k(x·dx + y·dy)/D_e(L) survives.
    ///
    /// Algebraically identical to
    /// `received_power_deviated_taylor(L, dx, dy)`, and implemented so the
    /// two agree to the last bit.
    pub fn focal_power_deviated(&self, dx: f64, dy: f64) -> f64 {
        let k = self.array.wavenumber();
        let focal = self.scenario.focal_distance();
        self.phasor_power(focal, |_, x, y| {
            let d = element_distance(x, y, focal);
            k * d + k * (x * dx + y * dy) / d
        })
    }

    /// Core phasor sum: β(amplitude_distance) · |Σ_e e^{i(φ_e + ψ_e)}|².
    ///
    /// `geometric_phase` returns φ_e for element index e at (x, y); the
    /// stored focusing phase ψ_e is added inside. Elements are always walked
    /// in row-major order and accumulated with compensated summation, so the
    /// result is independent of panel size quirks and bit-reproducible.
    fn phasor_power<F>(&self, amplitude_distance: f64, mut geometric_phase: F) -> f64
    where
        F: FnMut(usize, f64, f64) -> f64,
    {
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        for (index, &(x, y)) in self.positions.iter().enumerate() {
            let phase = geometric_phase(index, x, y) + self.focus_phases[index];
            let (sin, cos) = phase.sin_cos();
            re.add(cos);
            im.add(sin);
        }
        let re = re.value();
        let im = im.value();
        self.power_scale_unchecked(amplitude_distance) * (re * re + im * im)
    }

    fn power_scale_unchecked(&self, distance: f64) -> f64 {
        let lambda = self.array.wavelength();
        let n = self.array.element_count() as f64;
        let denom = 4.0 * PI * distance;
        self.scenario.transmit_power() * lambda * lambda / (n * denom * denom)
    }

    fn check_distance(&self, distance: f64) -> Result<()> {
        if !(distance.is_finite() && distance > 0.0) {
            return Err(Error::InvalidDistance(distance));
        }
        Ok(())
    }

    fn check_sigma(&self, sigma: f64) -> Result<()> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::InvalidSigma(sigma));
        }
        Ok(())
    }
}

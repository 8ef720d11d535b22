//! Near-field power focusing for sparse uniform planar arrays.
//!
//! A square panel of isotropic elements, phased so every element's
//! contribution arrives in phase at one point on the boresight axis,
//! concentrates power around that point rather than along a direction: at
//! sub-terahertz wavelengths even a modest panel is electrically huge, a
//! receiver at practical distances sits in the radiating near field, and the
//! spherical curvature of each element's wavefront becomes the dominant
//! design quantity.
//!
//! This crate models that effect end to end:
//!
//! * [`geometry`] — panel layout, focus scenarios, element distances and
//!   deviation phases.
//! * [`field`] — the exact phasor-sum field engine, plus phase-noise
//!   (analytic expectation and Monte Carlo) and rigid-shift deviation
//!   models.
//! * [`fresnel`] — Fresnel cosine/sine integrals (series + continued
//!   fraction), the special functions behind the closed-form lobe profile.
//! * [`lobe`] — closed-form main-lobe power profile and its predicted
//!   spatial extent.
//! * [`pathloss`] — close-in path-loss model and a measurement emulator
//!   that produces normalized traces the way a scalar link sweep would.
//! * [`sweep`] — distance grids, trace builders for every model variant,
//!   and analysis helpers (peak/minima search, trace comparison,
//!   deviation-sensitivity tables).
//! * [`numerics`] — compensated summation and deterministic substream
//!   seeding used throughout.
//!
//! # Determinism
//!
//! Every stochastic entry point takes an explicit seed and fans it out into
//! per-trial (or per-point) substreams, so results are reproducible bit for
//! bit across runs and are independent of thread scheduling: parallelism is
//! only ever applied across grid points, never inside a single phasor sum.
//!
//! # Example
//!
//! ```
//! use nearfocus::geometry::{ArrayConfig, FocusScenario};
//! use nearfocus::field::FocusedArray;
//! use nearfocus::SPEED_OF_LIGHT;
//!
//! let wavelength = SPEED_OF_LIGHT / 300.0e9;
//! let array = ArrayConfig::new(7, 15.0 * wavelength, wavelength)?;
//! let scenario = FocusScenario::new(700.0 * wavelength, 1.0)?;
//! let focused = FocusedArray::new(array, scenario);
//!
//! // At the focal point the phasor sum is fully coherent.
//! let at_focus = focused.received_power(scenario.focal_distance())?;
//! assert!((at_focus - focused.predicted_focal_power()).abs() < 1e-12 * at_focus);
//! # Ok::<(), nearfocus::Error>(())
//! ```

mod error;

pub mod field;
pub mod fresnel;
pub mod geometry;
pub mod lobe;
pub mod numerics;
pub mod pathloss;
pub mod sweep;

pub use error::{Error, Result};

/// Propagation speed used to convert carrier frequency to wavelength, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.998e8;

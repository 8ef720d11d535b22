//! Panel geometry: element placement on a square grid and the exact
//! element-to-observation-point distances the field engine integrates over.
//!
//! The panel lies in the z = 0 plane, centred on the origin, with the
//! observation axis perpendicular to it. A point on that axis at range `l`
//! has coordinates (0, 0, l), so the exact distance from element (x, y) is
//! √(x² + y² + l²) with no paraxial shortcut.

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A square panel of `side_count` × `side_count` elements on a uniform grid.
///
/// `spacing` is the centre-to-centre element pitch and `wavelength` the
/// carrier wavelength, both in metres. The interesting regime here is the
/// sparse one, where the pitch is many wavelengths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    side_count: usize,
    spacing: f64,
    wavelength: f64,
}

impl ArrayConfig {
    /// Validates and builds a panel description.
    ///
    /// # Errors
    ///
    /// Rejects a zero side count and non-finite or non-positive spacing or
    /// wavelength.
    pub fn new(side_count: usize, spacing: f64, wavelength: f64) -> Result<Self> {
        if side_count == 0 {
            return Err(Error::InvalidArray("side count must be at least 1".into()));
        }
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::InvalidArray(format!(
                "spacing must be positive and finite (got {spacing})"
            )));
        }
        if !(wavelength.is_finite() && wavelength > 0.0) {
            return Err(Error::InvalidArray(format!(
                "wavelength must be positive and finite (got {wavelength})"
            )));
        }
        Ok(Self {
            side_count,
            spacing,
            wavelength,
        })
    }

    /// Elements per side.
    pub fn side_count(&self) -> usize {
        self.side_count
    }

    /// Element pitch in metres.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Carrier wavelength in metres.
    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    /// Total element count (side²).
    pub fn element_count(&self) -> usize {
        self.side_count * self.side_count
    }

    /// Wavenumber 2π/λ in rad/m.
    pub fn wavenumber(&self) -> f64 {
        2.0 * PI / self.wavelength
    }

    /// Signed offset of 1-based grid index `index` from the panel centre.
    ///
    /// Index j maps to (j − (side + 1)/2) · spacing, which centres the panel
    /// for odd and even side counts alike.
    fn offset(&self, index: usize) -> f64 {
        (index as f64 - 0.5 * (self.side_count as f64 + 1.0)) * self.spacing
    }

    /// Coordinates of the element at 1-based `(row, col)`.
    ///
    /// Rows index the x axis and columns the y axis.
    ///
    /// # Errors
    ///
    /// Rejects indices outside `1..=side_count`.
    pub fn element_coordinate(&self, row: usize, col: usize) -> Result<(f64, f64)> {
        let side = self.side_count;
        if row == 0 || row > side || col == 0 || col > side {
            return Err(Error::ElementIndexOutOfRange { row, col, side });
        }
        Ok((self.offset(row), self.offset(col)))
    }

    /// All element coordinates in row-major order (row outer, column inner).
    ///
    /// This order is the crate-wide convention: every per-element loop —
    /// phasor sums, noise draws, shadow draws — walks elements exactly this
    /// way, which is what makes seeded runs reproducible.
    pub fn element_coordinates(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (1..=self.side_count).flat_map(move |row| {
            (1..=self.side_count).map(move |col| (self.offset(row), self.offset(col)))
        })
    }
}

/// Transmit-side description of a focusing experiment: where the beam is
/// focused and how much power is radiated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FocusScenario {
    focal_distance: f64,
    transmit_power: f64,
}

impl FocusScenario {
    /// Validates and builds a scenario.
    ///
    /// # Errors
    ///
    /// Rejects non-finite or non-positive focal distance or transmit power.
    pub fn new(focal_distance: f64, transmit_power: f64) -> Result<Self> {
        if !(focal_distance.is_finite() && focal_distance > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "focal distance must be positive and finite (got {focal_distance})"
            )));
        }
        if !(transmit_power.is_finite() && transmit_power > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "transmit power must be positive and finite (got {transmit_power})"
            )));
        }
        Ok(Self {
            focal_distance,
            transmit_power,
        })
    }

    /// Distance from the panel plane to the focal point, metres.
    pub fn focal_distance(&self) -> f64 {
        self.focal_distance
    }

    /// Radiated power in watts.
    pub fn transmit_power(&self) -> f64 {
        self.transmit_power
    }
}

/// Exact distance from element (x, y) to the on-axis point at range
/// `distance`.
pub fn element_distance(x: f64, y: f64, distance: f64) -> f64 {
    (x * x + y * y + distance * distance).sqrt()
}

/// Exact distance from element (x, y) to the on-axis point at range
/// `distance` when the whole panel is rigidly shifted by (dx, dy) in its own
/// plane, i.e. √((x+dx)² + (y+dy)² + l²).
///
/// # Errors
///
/// Rejects a non-positive or non-finite observation distance.
pub fn perturbed_distance(x: f64, y: f64, dx: f64, dy: f64, distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::InvalidDistance(distance));
    }
    Ok(element_distance(x + dx, y + dy, distance))
}

/// First-order phase shift produced at one element by a rigid in-plane panel
/// shift of (dx, dy): k(x·dx + y·dy)/D, with D the element's unperturbed
/// distance to the observation point (computed internally).
///
/// # Errors
///
/// Rejects a non-positive or non-finite observation distance.
pub fn deviation_phase(
    wavenumber: f64,
    x: f64,
    y: f64,
    dx: f64,
    dy: f64,
    distance: f64,
) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::InvalidDistance(distance));
    }
    let d = element_distance(x, y, distance);
    Ok(wavenumber * (x * dx + y * dy) / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const LAMBDA: f64 = 2.998e8 / 3.0e11;

    fn panel() -> ArrayConfig {
        ArrayConfig::new(7, 15.0 * LAMBDA, LAMBDA).unwrap()
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(ArrayConfig::new(0, 1.0, 1.0).is_err());
        assert!(ArrayConfig::new(7, 0.0, 1.0).is_err());
        assert!(ArrayConfig::new(7, -1.0, 1.0).is_err());
        assert!(ArrayConfig::new(7, 1.0, f64::NAN).is_err());
        assert!(FocusScenario::new(0.0, 1.0).is_err());
        assert!(FocusScenario::new(1.0, -2.0).is_err());
    }

    #[test]
    fn wavenumber_matches_reference() {
        assert_abs_diff_eq!(panel().wavenumber(), 6287.376891774102, epsilon = 1e-9);
    }

    #[test]
    fn odd_panel_has_a_centre_element_at_the_origin() {
        let p = panel();
        assert_eq!(p.element_coordinate(4, 4).unwrap(), (0.0, 0.0));
        let (x, y) = p.element_coordinate(1, 1).unwrap();
        assert_abs_diff_eq!(x, -45.0 * LAMBDA, epsilon = 1e-15);
        assert_abs_diff_eq!(y, -45.0 * LAMBDA, epsilon = 1e-15);
    }

    #[test]
    fn even_panel_straddles_the_origin() {
        let p = ArrayConfig::new(4, 2.0, LAMBDA).unwrap();
        let offsets: Vec<f64> = (1..=4)
            .map(|j| p.element_coordinate(j, 1).unwrap().0)
            .collect();
        assert_eq!(offsets, vec![-3.0, -1.0, 1.0, 3.0]);
    }

    #[test]
    fn index_bounds_are_one_based() {
        let p = panel();
        assert!(p.element_coordinate(0, 3).is_err());
        assert!(p.element_coordinate(3, 8).is_err());
        assert!(p.element_coordinate(7, 7).is_ok());
    }

    #[test]
    fn iteration_is_row_major_and_complete() {
        let p = panel();
        let coords: Vec<_> = p.element_coordinates().collect();
        assert_eq!(coords.len(), 49);
        assert_eq!(coords[0], p.element_coordinate(1, 1).unwrap());
        assert_eq!(coords[1], p.element_coordinate(1, 2).unwrap());
        assert_eq!(coords[7], p.element_coordinate(2, 1).unwrap());
        assert_eq!(coords[48], p.element_coordinate(7, 7).unwrap());
    }

    #[test]
    fn corner_distance_matches_reference() {
        // Corner element of the 7 x 7 panel at 15λ pitch, observed on axis at
        // 700λ: √(45² + 45² + 700²)·λ.
        let p = panel();
        let (x, y) = p.element_coordinate(1, 1).unwrap();
        let d = element_distance(x, y, 700.0 * LAMBDA);
        assert_abs_diff_eq!(d, 0.7024183128623886, epsilon = 1e-15);
    }

    #[test]
    fn perturbed_distance_matches_reference_and_validates() {
        // Centre element shifted by one wavelength in x, observed at 700λ.
        let d = perturbed_distance(0.0, 0.0, LAMBDA, 0.0, 700.0 * LAMBDA).unwrap();
        assert_abs_diff_eq!(d, 0.699534047142493, epsilon = 1e-15);
        // Same element shifted by one wavelength along both axes.
        let d = perturbed_distance(0.0, 0.0, LAMBDA, LAMBDA, 700.0 * LAMBDA).unwrap();
        assert_abs_diff_eq!(d, 0.6995347609509243, epsilon = 1e-15);
        assert!(perturbed_distance(0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(perturbed_distance(0.0, 0.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn deviation_phase_matches_reference() {
        // Edge-centre element (x = 45λ, y = 0) with dx = λ at 700λ range.
        let p = panel();
        let phase = deviation_phase(
            p.wavenumber(),
            45.0 * LAMBDA,
            0.0,
            LAMBDA,
            0.0,
            700.0 * LAMBDA,
        )
        .unwrap();
        assert_abs_diff_eq!(phase, 0.4030870048470918, epsilon = 1e-12);
        assert!(deviation_phase(p.wavenumber(), 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn zero_shift_leaves_the_geometry_alone() {
        let l = 700.0 * LAMBDA;
        let d0 = element_distance(0.03, -0.01, l);
        assert_eq!(perturbed_distance(0.03, -0.01, 0.0, 0.0, l).unwrap(), d0);
        assert_eq!(
            deviation_phase(6287.0, 0.03, -0.01, 0.0, 0.0, l).unwrap(),
            0.0
        );
    }

    proptest! {
        #[test]
        fn coordinates_are_centro_symmetric(
            side in 1usize..12,
            spacing in 1e-4f64..1.0,
        ) {
            // Reversing the row-major order negates every coordinate exactly:
            // offsets are (j − c)·d with j − c exact, and IEEE negation of a
            // product is exact.
            let p = ArrayConfig::new(side, spacing, LAMBDA).unwrap();
            let coords: Vec<_> = p.element_coordinates().collect();
            let n = coords.len();
            for i in 0..n {
                let (x, y) = coords[i];
                let (xr, yr) = coords[n - 1 - i];
                prop_assert_eq!(x, -xr);
                prop_assert_eq!(y, -yr);
            }
        }

        #[test]
        fn element_distance_dominates_range(
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
            l in 1e-3f64..10.0,
        ) {
            let d = element_distance(x, y, l);
            prop_assert!(d >= l);
            prop_assert!(d >= x.abs());
            // Triangle bound: never longer than the L1 detour.
            prop_assert!(d <= x.abs() + y.abs() + l);
        }

        #[test]
        fn perturbation_commutes_with_coordinates(
            x in -1.0f64..1.0,
            y in -1.0f64..1.0,
            dx in -0.01f64..0.01,
            dy in -0.01f64..0.01,
            l in 0.1f64..10.0,
        ) {
            // Shifting the panel is the same as shifting the element.
            let a = perturbed_distance(x, y, dx, dy, l).unwrap();
            let b = element_distance(x + dx, y + dy, l);
            prop_assert_eq!(a, b);
        }
    }
}

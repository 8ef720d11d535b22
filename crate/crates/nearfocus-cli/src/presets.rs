//! Named run presets. Each is pure data — a base configuration layer plus,
//! when one preset fans out into several panels, a list of labeled case
//! overlays. Precedence keeps user input in charge: preset values sit below
//! the config file and the flags.
//!
//! The presets cover the standard demonstration scenarios:
//!
//! * `fig2a` / `fig2b` — the large (35×35, d = 10λ, L = 2500λ) and small
//!   (7×7, d = 15λ, L = 700λ) sparse panels at 300 GHz, 1 W.
//! * `fig2a-dense` / `fig2b-dense` — the same apertures collapsed to
//!   half-wavelength spacing, where the power profile decays monotonically.
//! * `fig2c` — the dense-panel focusing onset: d = 0.5λ, L = 2500λ, one case
//!   with √N = 35 (no focusing) and one with √N = 700 (focusing).
//! * `fig5` — phase-noise levels σ ∈ {0.2, 0.5, 1.0} rad on the small panel.
//! * `fig6` — rigid panel shifts Δ ∈ {0, 0.25λ, 0.5λ, 1λ} on the small
//!   panel, first-order model.
//! * `fig7` — focal-power sensitivity table over Δ ∈ [0, λ] for
//!   √N ∈ {5, 7} × d ∈ {10λ, 15λ}.

use crate::config::{GridKind, Length, PartialConfig};
use nearfocus::sweep::ModelTag;

/// A named preset: base layer plus optional labeled case overlays.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub base: PartialConfig,
    /// Labeled overlays; an empty list means the preset is a single case.
    pub cases: Vec<(String, PartialConfig)>,
}

/// All preset names, for help text and error messages.
pub const PRESET_NAMES: &[&str] = &[
    "fig2a",
    "fig2b",
    "fig2a-dense",
    "fig2b-dense",
    "fig2c",
    "fig5",
    "fig6",
    "fig7",
];

/// Looks a preset up by name.
pub fn lookup(name: &str) -> Option<Preset> {
    let single = |base: PartialConfig| Preset {
        name: PRESET_NAMES
            .iter()
            .find(|n| **n == name)
            .expect("caller matched the name"),
        base,
        cases: Vec::new(),
    };
    match name {
        "fig2a" => Some(single(sparse_large())),
        "fig2b" => Some(single(sparse_small())),
        "fig2a-dense" => Some(single(dense_variant(35, 2500.0))),
        "fig2b-dense" => Some(single(dense_variant(7, 700.0))),
        "fig2c" => {
            let base = PartialConfig {
                spacing: Some(Length::Lambdas(0.5)),
                focal: Some(Length::Lambdas(2500.0)),
                power_w: Some(1.0),
                models: Some(vec![ModelTag::Exact]),
                ..PartialConfig::default()
            };
            let case = |side: usize| {
                let overlay = PartialConfig {
                    side: Some(side),
                    ..PartialConfig::default()
                };
                (format!("side{side}"), overlay)
            };
            Some(Preset {
                name: "fig2c",
                base,
                cases: vec![case(35), case(700)],
            })
        }
        "fig5" => {
            let mut base = sparse_small();
            base.sigma_list = Some(vec![0.2, 0.5, 1.0]);
            base.trials = Some(10_000);
            Some(single(base))
        }
        "fig6" => {
            let mut base = sparse_small();
            base.deviations = Some(
                [0.0, 0.25, 0.5, 1.0]
                    .into_iter()
                    .map(Length::Lambdas)
                    .collect(),
            );
            base.deviation_model = Some(ModelTag::DeviatedTaylor);
            Some(single(base))
        }
        "fig7" => Some(single(PartialConfig {
            focal: Some(Length::Lambdas(700.0)),
            power_w: Some(1.0),
            sens_sides: Some(vec![5, 7]),
            sens_spacings: Some(vec![Length::Lambdas(10.0), Length::Lambdas(15.0)]),
            delta_start: Some(Length::Lambdas(0.0)),
            delta_stop: Some(Length::Lambdas(1.0)),
            delta_points: Some(21),
            ..PartialConfig::default()
        })),
        _ => None,
    }
}

/// 35×35 panel, d = 10λ, focused at 2500λ.
fn sparse_large() -> PartialConfig {
    PartialConfig {
        side: Some(35),
        spacing: Some(Length::Lambdas(10.0)),
        focal: Some(Length::Lambdas(2500.0)),
        power_w: Some(1.0),
        ..PartialConfig::default()
    }
}

/// 7×7 panel, d = 15λ, focused at 700λ.
fn sparse_small() -> PartialConfig {
    PartialConfig {
        side: Some(7),
        spacing: Some(Length::Lambdas(15.0)),
        focal: Some(Length::Lambdas(700.0)),
        power_w: Some(1.0),
        ..PartialConfig::default()
    }
}

/// A sparse preset's aperture at half-wavelength spacing over [0.5L, 3L],
/// where the trace decays monotonically.
fn dense_variant(side: usize, focal_lambdas: f64) -> PartialConfig {
    PartialConfig {
        side: Some(side),
        spacing: Some(Length::Lambdas(0.5)),
        focal: Some(Length::Lambdas(focal_lambdas)),
        power_w: Some(1.0),
        grid_kind: Some(GridKind::Log),
        grid_start: Some(Length::Lambdas(0.5 * focal_lambdas)),
        grid_stop: Some(Length::Lambdas(3.0 * focal_lambdas)),
        grid_points: Some(400),
        ..PartialConfig::default()
    }
}

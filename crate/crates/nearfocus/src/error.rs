use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes surfaced by the simulation library.
#[derive(Debug, Error)]
#[non_exhaustive]
pub enum Error {
    /// Array parameters failed validation.
    #[error("invalid array: {0}")]
    InvalidArray(String),

    /// Focus scenario parameters failed validation.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// A distance grid failed validation.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// A 1-based element index fell outside the panel.
    #[error(
        "element index ({row}, {col}) out of range for a {side}x{side} panel (indices are 1-based)"
    )]
    ElementIndexOutOfRange { row: usize, col: usize, side: usize },

    /// An observation or focal distance was not positive and finite.
    #[error("distance must be positive and finite (got {0})")]
    InvalidDistance(f64),

    /// A standard deviation was negative or not finite.
    #[error("standard deviation must be non-negative and finite (got {0})")]
    InvalidSigma(f64),

    /// Monte Carlo estimation needs enough trials for a standard error.
    #[error("Monte Carlo estimation needs at least 2 trials (got {0})")]
    TooFewTrials(usize),

    /// The closed-form lobe profile degenerates for a single-element panel
    /// away from the focal distance.
    #[error("lobe profile is undefined for a single-element panel away from the focal distance")]
    DegenerateLobeProfile,

    /// Walking outward from the main-lobe crest hit the grid edge before the
    /// power turned back up.
    #[error("no local minimum found on the {side} side of the main lobe within the grid")]
    LobeMinimumNotFound { side: &'static str },

    /// A trace must hold at least one sample.
    #[error("trace must contain at least one sample")]
    EmptyTrace,

    /// Grid and value vectors of a trace must pair up.
    #[error("trace lengths differ: {grid} grid points vs {values} values")]
    LengthMismatch { grid: usize, values: usize },

    /// Two traces being compared share no distance range.
    #[error("trace grids do not overlap")]
    DisjointGrids,

    /// Path-loss parameters failed validation.
    #[error("invalid path-loss parameters: {0}")]
    InvalidPathLoss(String),

    /// A stochastic emulation was requested without a seed.
    #[error("a seed is required when phase noise or shadow fading is enabled")]
    SeedRequired,
}

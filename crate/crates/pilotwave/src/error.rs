use thiserror::Error;

/// Errors shared by all engines in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A state, configuration or projection was used with a basis it does not
    /// belong to (for example a lattice projection applied to a grid state).
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// An operation required a normalized state but got one with the given
    /// squared norm.
    #[error("state not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    /// The actual configuration carries (numerically) zero Born weight. This
    /// indicates a simulation bug, not a physical event.
    #[error("configuration outside support: Born weight {weight:.3e} at t = {t}")]
    OutsideSupport { weight: f64, t: f64 },

    /// The wave function vanishes at the configuration, so the velocity field
    /// is undefined there.
    #[error("node encountered: |psi| = {amp:.3e}")]
    NodeEncountered { amp: f64 },

    /// Gaussian form factor narrower than two grid cells.
    #[error("form factor under-resolved: width {width} < 2 dx = {min_width}")]
    FormFactorUnderResolved { width: f64, min_width: f64 },

    /// Requested basis is larger than the configured cap.
    #[error("basis dimension {required} exceeds cap {cap}; raise the cap to at least {required}")]
    DimensionCap { required: usize, cap: usize },

    /// A model parameter violates its documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two density tables were built over different partitions.
    #[error("mismatched partitions: {0}")]
    PartitionMismatch(String),

    /// A time outside the simulated horizon was requested.
    #[error("time {t} beyond trajectory horizon {horizon}")]
    BeyondHorizon { t: f64, horizon: f64 },

    /// Scenario validation failed; all offending keys are listed.
    #[error("invalid scenario:\n{}", .0.join("\n"))]
    InvalidScenario(Vec<String>),

    /// Scenario file could not be parsed at all.
    #[error("scenario parse error: {0}")]
    ScenarioSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

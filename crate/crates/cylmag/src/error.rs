use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Evaluation requested too close to the symmetry axis r = 0, where the
    /// catalog fields carry 1/r^2 ... 1/r^5 singularities.
    #[error("point too close to the symmetry axis (r = {r:.3e} < r_min = {r_min:.3e})")]
    AxisPoint { r: f64, r_min: f64 },

    /// Parameters outside a constructor's documented validity range.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A SYSTEM_II construction was requested without a beta solution handle.
    #[error("SYSTEM_II requires a beta solution handle")]
    MissingBetaSolution,

    /// The gauge construction's cross-consistency check failed, which signals
    /// a field that is not closed (dB != 0).
    #[error("gauge construction inconsistent: {0}")]
    GaugeInconsistency(String),

    /// beta(phi) fell below the vanishing threshold during integration; the
    /// field formulas blow up as beta -> 0.
    #[error("beta fell below the vanishing threshold {threshold:.3e} at phi = {phi:.6}")]
    BetaVanishing { phi: f64, threshold: f64 },

    /// The adaptive step controller could not meet the tolerance.
    #[error("adaptive step failure at t = {t:.6}: step size underflow (h = {h:.3e})")]
    StepFailure { t: f64, h: f64 },

    /// A trajectory approached the excluded axis and was halted.
    #[error("trajectory approached the symmetry axis at t = {t:.6} (r = {r:.3e})")]
    AxisApproach { t: f64, r: f64 },

    /// Operator composition would exceed the supported differential order.
    #[error("operator composition would have order {requested}, supported maximum is {max}")]
    OrderOverflow { requested: usize, max: usize },

    /// A scaling fit was requested on residuals at the numerical noise floor.
    #[error("degenerate scaling fit: residuals at noise floor ({detail})")]
    DegenerateFit { detail: String },

    /// Division guard for formulas with beta or r in a denominator.
    #[error("{0} must be nonzero")]
    ZeroDenominator(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

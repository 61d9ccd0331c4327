use thiserror::Error;

/// Errors raised while validating configuration input. Each variant names the
/// offending key so the message can be traced back to the config file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("failed to parse config: {0}")]
    Parse(String),
    #[error("key `{key}` must be positive, got {value}")]
    NonPositive { key: String, value: f64 },
    #[error("key `theta_deg` must satisfy |theta| < 90, got {value_deg}")]
    InvalidAngle { value_deg: f64 },
    #[error("unknown polarization `{tag}` (expected \"TE\" or \"TM\")")]
    BadPolarization { tag: String },
    #[error("unknown solver `{tag}` (expected \"hope\", \"collocation\", or \"both\")")]
    BadSolver { tag: String },
    #[error("N_x must be a power of two of at least {minimum}, got {got}")]
    BadGridSize { got: usize, minimum: usize },
    #[error("ribbon_width_fraction must lie in (0, 1], got {value}")]
    BadWidthFraction { value: f64 },
    #[error("X0 must be nonzero: a vanishing envelope baseline makes the unperturbed interface resonant")]
    ZeroBaseline,
    #[error("missing key `{key}`: {reason}")]
    Missing { key: &'static str, reason: &'static str },
    #[error("conflicting keys: {reason}")]
    Conflicting { reason: &'static str },
    #[error("key `{key}` is invalid: {reason}")]
    BadValue { key: &'static str, reason: String },
}

/// Errors raised by the numerical solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error(
        "resonant configuration ({polarization}): |Delta_p| = {det_abs:.3e} at mode p = {p}, \
         below tolerance {tolerance:.3e}"
    )]
    Resonant {
        polarization: &'static str,
        p: i64,
        det_abs: f64,
        tolerance: f64,
    },
    #[error("perturbation series produced non-finite values at order {order}; the expansion diverges here")]
    Divergent { order: usize },
    #[error(
        "dense system is numerically singular (condition estimate {condition:.3e}); \
         the configuration may be resonant or otherwise pathological"
    )]
    SingularSystem { condition: f64 },
    #[error("incident order does not propagate (gamma_u,0 = 0): grazing incidence is outside the model")]
    GrazingIncidence,
    #[error("field has {got} coefficients but the grid expects {expected}")]
    LengthMismatch { got: usize, expected: usize },
}

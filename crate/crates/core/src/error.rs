use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("conjectured forecast slope is zero; the forecast cannot be inverted")]
    DegenerateConjecture,

    #[error("singular best-response denominator: tau2 + (mu + c)^2 = 0")]
    SingularDenominator,

    #[error("MZ regression undefined: mu + c = 0")]
    SingularMz,

    #[error("no equilibrium exists for tau2 = {tau2} (requires tau2 <= 0.25)")]
    NoEquilibrium { tau2: f64 },

    #[error("equilibrium root {index} is degenerate (zero slope or singular best response)")]
    DegenerateEquilibrium { index: usize },

    #[error("constrained choice requires an action menu")]
    MissingMenu,

    #[error("moment matching infeasible: {0}")]
    MomentMatchInfeasible(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("search bracket [{lo}, {hi}] does not contain an interior minimum")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("regressor has zero variance")]
    ZeroVariance,

    #[error("window {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid value at line {line}: {message}")]
    Value { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

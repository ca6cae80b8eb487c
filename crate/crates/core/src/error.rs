use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// All arithmetic on set elements is checked; anything that would wrap an
/// `i64` (or an `i128` inside the system solver) surfaces as [`Error::Overflow`]
/// instead of silently corrupting a count.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ZeroCoefficient: equation coefficients must be nonzero")]
    ZeroCoefficient,
    #[error("ArityTooSmall: an equation needs at least 3 variables, got {0}")]
    ArityTooSmall(usize),
    #[error("ArityMismatch: expected {expected} sets, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("ZeroDilation: cannot dilate a set by 0")]
    ZeroDilation,
    #[error("Overflow: integer overflow in {0}")]
    Overflow(&'static str),
    #[error("DegenerateSystem: {0}")]
    DegenerateSystem(String),
    #[error("EmptySet: {0} requires a nonempty set")]
    EmptySet(&'static str),
    #[error("NonPositiveWidth: interval widths must be positive")]
    NonPositiveWidth,
    #[error("BadArity: {0}")]
    BadArity(String),
    #[error("ToleranceNotAchieved: {0}")]
    ToleranceNotAchieved(String),
    #[error("BadParameter: {0}")]
    BadParameter(String),
    #[error("BudgetExceeded: {0}")]
    BudgetExceeded(String),
    #[error("NotCoprime: dilation factors {0} and {1} must be coprime")]
    NotCoprime(i64, i64),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
    #[error("InvalidSetFile: line {line}: {reason}")]
    InvalidSetFile { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

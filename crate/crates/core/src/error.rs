use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus {0} exceeds the supported maximum {max}", max = crate::MAX_SCALAR_Q)]
    FieldTooLarge(u32),
    #[error("0 has no multiplicative inverse")]
    ZeroInverse,
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadratic form is degenerate")]
    DegenerateForm,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("level j = 0 is not a quadratic surface")]
    ZeroLevel,
    #[error("grid q^d exceeds the budget (q = {q}, d = {d})")]
    GridTooLarge { q: u32, d: usize },
    #[error("exponent must be >= 1 or infinite")]
    BadExponent,
    #[error("functions live on different surfaces")]
    SurfaceMismatch,
    #[error("no test function was produced by the selected families")]
    EmptyFamily,
    #[error("theta must lie strictly between 0 and 1")]
    BadTheta,
    #[error("invalid dimension parameter: {0}")]
    BadDimension(String),
    #[error("exponent formula has a vanishing denominator")]
    DegenerateDenominator,
    #[error("shift x = 0 is outside the pair-sum bound")]
    ZeroShift,
    #[error("subset size {size} exceeds surface cardinality {cardinality}")]
    SizeTooLarge { size: usize, cardinality: usize },
    #[error("naive transform budget exceeded")]
    BudgetExceeded,
    #[error("set of size {0} is too large for the quadruple loop")]
    SetTooLarge(usize),
    #[error("invalid subset: {0}")]
    BadSubset(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("denominator has a nonzero root at 0 after removing powers of t")]
    NonUnitDenominator,
    #[error("substitution image is zero")]
    ZeroSubstitutionImage,
    #[error("series is not invertible (all known coefficients vanish)")]
    NotInvertible,
    #[error("cannot integrate: coefficient of t^-1 is nonzero")]
    ResidueObstruction,
    #[error("substituted series does not vanish at 0")]
    SubstitutionNotVanishing,
    #[error("base series must have constant term 1")]
    NonUnitBase,
    #[error("group closure not reached within {0} elements")]
    GroupOrderExceeded(usize),
    #[error("kernel equation residual nonzero at x^{x} y^{y} t^{t}")]
    ResidualNonzero { x: i64, y: i64, t: i64 },
    #[error("cone dimension {0} unsupported")]
    DimensionUnsupported(usize),
    #[error("read of exponent ({k},{m}) below known depth")]
    DepthInsufficient { k: i64, m: i64 },
    #[error("insufficient terms: need {need}, have {have}")]
    InsufficientTerms { need: usize, have: usize },
    #[error("no operator found")]
    NoOperatorFound,
    #[error("leading recurrence coefficient vanishes at n = {0}")]
    SingularIndex(i64),
    #[error("validation failed: {0}")]
    ValidationFailed(String),
    #[error("bad hypergeometric parameters")]
    BadParameters,
    #[error("argument out of range")]
    ArgumentOutOfRange,
    #[error("quadrature did not converge")]
    QuadratureNoConvergence,
    #[error("identity fails at order {0}")]
    IdentityFailed(i64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

use thiserror::Error;

/// Every failure the engine reports. Nothing here is ever turned into a panic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series has no nonzero coefficient below its truncation; cannot invert")]
    AllZeroPrefix,
    #[error("infinite product ({0}) has a factor with negative q-exponent")]
    DivergentProduct(String),
    #[error("coefficient of q^{exponent} requested but series is only known below q^{trunc}")]
    BeyondTruncation { exponent: i64, trunc: i64 },
    #[error("order {0} exceeds the supported range")]
    OrderOverflow(i64),
    #[error("could not reach truncation order {requested} (best {reached})")]
    TruncationNotReached { requested: i64, reached: i64 },
    #[error("summand has a pole: {0}")]
    PoleAtSummand(String),
    #[error("theta denominator vanishes identically: {0}")]
    ThetaDenominatorZero(String),
    #[error("specialization is not generic: {}", .0.join("; "))]
    NonGenericSpecialization(Vec<String>),
    #[error("sum diverges at this specialization: {0}")]
    DivergenceAtSpecialization(String),
    #[error("double sum has a quadrant with infinitely many terms of bounded exponent: {0}")]
    NonTerminatingQuadrant(String),
    #[error("parameters inadmissible for {theorem}: {requirement}")]
    InadmissibleOrder { theorem: String, requirement: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("numeric series did not converge within {0} terms")]
    NoConvergenceBudget(usize),
    #[error("unknown identifier `{0}`")]
    UnknownId(String),
    #[error("operands live in different cyclotomic fields ({0} vs {1})")]
    FieldMismatch(u64, u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

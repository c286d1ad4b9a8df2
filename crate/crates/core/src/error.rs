use thiserror::Error;

/// Errors raised by the exact kernel and the series engines.
///
/// Verification failures are never reported through this type; they end up
/// in a [`crate::verifier::VerificationReport`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial of degree {0} exceeds the factorization limit of 8")]
    FactorDegreeExceeded(usize),
    #[error("base polynomial has coefficients depending on a, b or c")]
    ParameterInBase,
    #[error("sides cannot be reduced to a common base set: {0}")]
    UnmatchedBranch(String),
    #[error("argument map is constant")]
    ConstantMap,
    #[error("pole at the origin: {0}")]
    PoleAtOrigin(String),
    #[error("singular point: {0}")]
    SingularPoint(String),
    #[error("argument map does not send the expansion point to 0")]
    MapNotAnchored,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("series is not invertible (zero leading coefficient)")]
    NonInvertible,
    #[error("offsets {0} and {1} do not differ by an integer")]
    OffsetMismatch(String, String),
    #[error("more than one base vanishes at the origin")]
    BranchAmbiguity,
    #[error("constant {0} is not rational at these parameters")]
    IrrationalConstant(String),
    #[error("omega component survived in coefficient {0}")]
    OmegaResidue(String),
    #[error("unknown formula id `{0}`")]
    UnknownFormula(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operation needs exponent-mode q parameters: {0}")]
    NeedsExponents(String),
    #[error("invalid registry: {0}")]
    Registry(String),
    #[error("cannot parse rational `{0}`")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors shared by every layer of the library.
///
/// Mismatched contexts (different coefficient rings, variable counts or
/// truncation orders) are always reported, never coerced.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("mixed context: {0}")]
    MixedContext(String),

    #[error("denominator vanishes at the evaluation point: {0}")]
    DenominatorVanishes(String),

    #[error("constant term is not a unit of the coefficient ring: {0}")]
    NonUnitConstantTerm(String),

    #[error("element is not a unit of the coefficient ring: {0}")]
    NotAUnit(String),

    #[error("substituted series has a nonzero constant term (component {0})")]
    NonzeroConstantTerm(usize),

    #[error("linear part is not invertible over the coefficient ring")]
    NonInvertibleLinearPart,

    #[error("derivation has a nonzero constant or linear part; not in m^2 Der")]
    NotProNilpotent,

    #[error("automorphism linear part is not the identity")]
    NotUnipotent,

    #[error("multi-index degree {degree} exceeds truncation order {order}")]
    OutOfOrder { degree: u32, order: u32 },

    #[error("truncation order {got} is below the required order {needed}")]
    OrderTooSmall { needed: u32, got: u32 },

    #[error("derivation component {0} has a nonzero constant term; not in L+")]
    NotInLplus(usize),

    #[error("function does not vanish at the point: {0}")]
    NotVanishingAtP(String),

    #[error("representation failed validation: {0}")]
    ValidationFailed(String),

    #[error("matrix is not nilpotent (power {0} is nonzero)")]
    NotNilpotent(usize),

    #[error("no elementary factorization over the coefficient ring: {0}")]
    FactorizationFailed(String),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("parse error at {line}:{col}: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(line: usize, col: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            col,
            message: message.into(),
        }
    }
}

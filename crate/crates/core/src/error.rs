//! Crate-wide error type.

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{e} exceeds the 2^16 guard")]
    FieldTooLarge { p: u32, e: u32 },
    #[error("no monic irreducible polynomial of degree {e} over F_{p} (internal bug)")]
    NoIrreducible { p: u32, e: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("cannot embed F_{src} into F_{dst}")]
    IncompatibleEmbedding { src: u32, dst: u32 },

    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("point is not on the form")]
    NotOnForm,
    #[error("point is singular")]
    SingularPoint,
    #[error("points coincide; use the tangent composition")]
    SamePoint,
    #[error("form is identically zero")]
    ZeroForm,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("closure budget of {budget} words exhausted")]
    BudgetExhausted { budget: usize },
    #[error("closure caps exhausted after {rounds} rounds")]
    CapExhausted { rounds: usize },
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("relation is not admissible")]
    NotAdmissible,
    #[error("quotient table is partial: no composition for classes {0} and {1}")]
    PartialQuotient(usize, usize),
    #[error("no diagonal composition exists; U2 is undefined")]
    NoDiagonal,

    #[error("base points are not in general position")]
    NotGeneralPosition,
    #[error("composition undefined: {0}")]
    Undefined(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code, stable across releases.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "not_prime",
            Error::ZeroDegree => "zero_degree",
            Error::FieldTooLarge { .. } => "field_too_large",
            Error::NoIrreducible { .. } => "no_irreducible",
            Error::ZeroInverse => "zero_inverse",
            Error::FieldMismatch(_) => "field_mismatch",
            Error::IncompatibleEmbedding { .. } => "incompatible_embedding",
            Error::InvalidPoint(_) => "invalid_point",
            Error::NotOnForm => "not_on_form",
            Error::SingularPoint => "singular_point",
            Error::SamePoint => "same_point",
            Error::ZeroForm => "zero_form",
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::Degenerate(_) => "degenerate",
            Error::BudgetExhausted { .. } => "budget_exhausted",
            Error::CapExhausted { .. } => "cap_exhausted",
            Error::IndexOutOfRange(_) => "index_out_of_range",
            Error::NotAdmissible => "not_admissible",
            Error::PartialQuotient(..) => "partial_quotient",
            Error::NoDiagonal => "no_diagonal",
            Error::NotGeneralPosition => "not_general_position",
            Error::Undefined(_) => "undefined",
            Error::Hypothesis(_) => "hypothesis",
            Error::InvalidInput(_) => "invalid_input",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExhausted { .. } | Error::CapExhausted { .. } => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inexact division: divisor does not divide dividend")]
    InexactDivision,

    #[error("variable lists differ: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("series constant term is not a unit")]
    NotInvertible,

    #[error("inverse square root needs constant term exactly 1")]
    BadUnit,

    #[error("coefficient z^{n} w^{k} lies outside the truncation bounds")]
    OutOfTruncation { n: i64, k: i64 },

    #[error("series is not revertible (needs zero constant term and unit linear term)")]
    NotRevertible,

    #[error("second t-derivative of `{0}` is not part of the symbol ring")]
    SecondDerivative(String),

    #[error("empty solution space for the certificate ansatz")]
    EmptySolutionSpace,

    #[error("every solution has vanishing leading coefficient p_3")]
    DegenerateLeading,

    #[error("leading coefficient vanishes at n = {0}")]
    LeadingCoeffVanishes(i64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no recurrence found within the degree schedule")]
    NoRecurrenceFound,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not certifiable; remainder {remainder}")]
    NotCertifiable { remainder: String },

    #[error("not certifiable at (k, n) = ({k}, {n}); remainder {remainder}")]
    NotCertifiableAt { k: usize, n: usize, remainder: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

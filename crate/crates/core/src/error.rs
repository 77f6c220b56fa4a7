use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid class parameters: {0}")]
    Params(String),

    #[error("evaluation point {re}+{im}i lies outside the open unit disk")]
    OutsideDisk { re: f64, im: f64 },

    #[error("h'(z) vanishes at the evaluation point; dilatation is singular")]
    Singular,

    #[error("E(z) is undefined at the origin when b_1 != 0")]
    UndefinedAtOrigin,

    #[error("|b_1| = {0} violates |b_1| < 1")]
    NotUnivalenceCandidate(f64),

    #[error("psi({n}) vanishes for these parameters; index {n} of the co-analytic part is degenerate")]
    DegeneratePsi { n: u32 },

    #[error("weights must be nonnegative and sum to {expected}, got {actual}")]
    WeightSum { expected: f64, actual: f64 },

    #[error("coefficient sum {sum} exceeds 1 - beta = {bound}")]
    NotInClass { sum: f64, bound: f64 },

    #[error("variant {variant} requires {requirement}")]
    VariantMismatch {
        variant: &'static str,
        requirement: &'static str,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("matrix is not Hermitian (relative deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("channel is not trace preserving (deviation {0:.3e})")]
    NotCptp(f64),

    #[error("expected {expected} Kraus operators, got {got}; canonicalize via the Choi form first")]
    KrausCountMismatch { expected: usize, got: usize },

    #[error("parameter {value} outside the family domain ({lo}, {hi})")]
    OutOfDomain { value: f64, lo: f64, hi: f64 },

    #[error("unknown channel kind `{0}`")]
    UnknownChannel(String),

    #[error("invalid channel parameter: {0}")]
    InvalidParam(String),

    #[error("state is singular (min eigenvalue {0:.3e}); SLD Fisher needs a positive definite state")]
    SingularState(f64),

    #[error("solver failed: {0}")]
    SolverFailure(String),

    #[error("no finite query count satisfies the bound (linear coefficient is zero)")]
    NoFiniteN,

    #[error("no grid pair with separation larger than 2*delta")]
    NoAdmissiblePair,

    #[error("problem too large: {0}")]
    TooLarge(String),

    #[error("malformed channel spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;

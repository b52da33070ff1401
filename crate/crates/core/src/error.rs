use alloc::string::String;

/// Errors raised by the algorithmic core.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("zero input")]
    ZeroInput,
    #[error("factorization bound exceeded: {detail} (max degree {max_degree}, max |coeff| {max_coeff})")]
    FactorizationBoundExceeded {
        max_degree: usize,
        max_coeff: u64,
        detail: String,
    },
    #[error("precondition: irreducible input")]
    ReducibleInput,
    #[error("precondition: {0} is a rational square")]
    SquareParameter(String),
    #[error("quadratic splitting undecided after {primes} primes")]
    QuadraticSplitUndecided { primes: usize },
    #[error("empty search")]
    EmptySearch,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("group order cap exceeded (cap {cap})")]
    GroupOrderCapExceeded { cap: usize },
    #[error("inconsistent N-membership flags")]
    InconsistentFlags,
    #[error("B not contained in Z")]
    BNotInZ,
    #[error("quotient lattice is not finite")]
    InfiniteQuotient,
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("unknown curve {0}")]
    UnknownCurve(String),
    #[error("not contractible: {0}")]
    NotContractible(String),
    #[error("elementary transform precondition violated: {0}")]
    TransformPrecondition(String),
    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),
    #[error("evenize first: degree {0} is odd")]
    EvenizeFirst(usize),
    #[error("unsupported parameter: {0}")]
    UnsupportedParameter(String),
    #[error("pairing broken for class {0}")]
    PairingBroken(String),
    #[error("descent depth cap {cap} exceeded")]
    DepthCapExceeded { cap: usize },
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
}

pub type Result<T> = core::result::Result<T, Error>;

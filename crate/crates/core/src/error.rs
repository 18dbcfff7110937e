use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("characters live on different groups")]
    MismatchedGroups,

    #[error("input is not a finite abelian group: {0}")]
    NotAGroup(String),

    #[error("relation lattice has free rank {0}; only finite groups are supported")]
    InfiniteGroup(usize),

    #[error("p = {0} is not supported; p must be an odd prime")]
    UnsupportedPrime(u64),

    #[error("operation needs a quadratic extension, got the base field")]
    NotQuadratic,

    #[error("operation needs a character of the base field Q_p")]
    NotBaseField,

    #[error("inducing character is Galois invariant (eta = eta^sigma); the parameter would be reducible")]
    ReducibleInduction,

    #[error("character does not factor through the norm map")]
    NoNormFactorization,

    #[error("level {requested} is below the conductor {conductor}")]
    LevelBelowConductor { requested: u32, conductor: u32 },

    #[error("weight {0} is outside scope (even weights k >= 2 only)")]
    UnsupportedWeight(u64),

    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),

    #[error("parameter is unramified; a ramified parameter (conductor >= 1) is required")]
    Unramified,

    #[error("conductor bound violated: c(sym^{n}) = {value} but bound is {bound}")]
    BoundViolation { n: u32, value: u32, bound: u32 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

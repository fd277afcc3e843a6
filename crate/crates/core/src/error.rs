use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear system has no solution")]
    NoSolution,

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("relation is not admissible: {0}")]
    NonAdmissibleRelation(String),

    #[error("algebra is not finite-dimensional within path length bound {0}")]
    NotFiniteDimensional(usize),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("representation violates the relations: {0}")]
    RelationViolated(String),

    #[error("map is not a module homomorphism: {0}")]
    NotAHomomorphism(String),

    #[error("enumeration infeasible: {0}")]
    EnumerationInfeasible(String),

    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),

    #[error("certificate failed: {0}")]
    CertificateFailed(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

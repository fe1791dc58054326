use std::io;

use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("wrong variant: {0}")]
    WrongVariant(String),
    #[error("component code length {0} is too small (need s >= 3)")]
    LengthTooSmall(usize),
    #[error("unsupported Hamming parameter m = {0} (supported: 3, 4)")]
    UnsupportedHamming(usize),
    #[error("unknown component code identifier `{0}`")]
    UnknownCode(String),
    #[error("received word is inconsistent with every codeword")]
    InconsistentWord,
    #[error("generalized check nodes are not supported on the AWGN channel")]
    UnsupportedAwgnGeneralized,
    #[error("invalid channel parameter: {0}")]
    InvalidChannel(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("requirement not satisfiable anywhere in the search bracket")]
    UnsatisfiableBracket,
    #[error("infeasible support: {0}")]
    InfeasibleSupport(String),
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("non-convergence: {0}")]
    NonConvergence(String),
    #[error("ensemble is not realizable at block length {0}")]
    UnrealizableLength(usize),
    #[error("duplicate-edge repair stalled after {0} resamples")]
    RepairStall(usize),
    #[error("no eligible check node left for variable node {0}")]
    NoEligibleCn(usize),
    #[error("code dimension {0} exceeds the brute-force limit of 25")]
    DimensionTooLarge(usize),
    #[error("study checks failed: {0}")]
    ChecksFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

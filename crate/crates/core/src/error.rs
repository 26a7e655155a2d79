//! Error types shared across the crate.

use thiserror::Error;

/// Text-format parse failures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("not a dyadic rational: {0:?} (expected `k` or `k/2^e` like `3/8`)")]
    Dyadic(String),
    #[error("not an a+b*sqrt2 value: {0:?}")]
    QuadDyadic(String),
    #[error("not a generator word: {0:?} (expected tokens like `x0 x2^-1 x1`)")]
    Word(String),
    #[error("not a forest: {0:?} (expected `[., (.,.), ...]`)")]
    Forest(String),
    #[error("not a Haar index: {0:?} (expected `const` or `(i,j)`)")]
    HaarIndex(String),
    #[error("not a dyadic tuple: {0:?} (expected `a,b,...` strictly increasing in (0,1))")]
    Tuple(String),
}

/// Failures of piecewise-linear homeomorphism operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomeoError {
    #[error("breakpoint data is not an element of the group: {0}")]
    NotAMember(&'static str),
    #[error("point {0} lies outside [0,1]")]
    OutOfDomain(String),
    #[error("element does not stabilize 1/2 (maps it to {0})")]
    NotAStabilizer(String),
}

/// Failures of word-level operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("word contains an inverse letter x{0}^-1 but must be positive")]
    NegativeLetter(u32),
    #[error("invalid lemma parameters: {0}")]
    BadLemmaParameters(String),
}

/// Failures of graph queries, mostly truncation-discipline violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph truncation")]
    MissingVertex(String),
    #[error("computation touches frontier vertex {0}; enlarge the truncation")]
    FrontierContamination(String),
    #[error("the vertex set is empty")]
    EmptySet,
    #[error("points {0} and {1} do not lie on the same side of 1/2")]
    SplitSides(String, String),
}

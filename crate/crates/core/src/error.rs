use thiserror::Error;

/// Errors produced while building, compressing, decoding or querying distributions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("distribution is empty")]
    Empty,

    #[error("line {line}: cannot parse `{token}` as a non-negative number")]
    Unparsable { line: usize, token: String },

    #[error("line {line}: negative value `{token}`")]
    Negative { line: usize, token: String },

    #[error("weights sum to zero")]
    ZeroTotal,

    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(String),

    #[error("distributions have different lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("divergence is infinite: q[{0}] = 0 while p[{0}] > 0")]
    InfiniteDivergence(usize),

    #[error("symbol {0} has probability zero; smooth the distribution first")]
    ZeroProbability(usize),

    #[error("codewords are not prefix-free at positions {0} and {1}")]
    NotPrefixFree(usize, usize),

    #[error("codewords are not in increasing order at positions {0} and {1}")]
    NotIncreasing(usize, usize),

    #[error("leaf depths do not describe a strict ordered binary tree")]
    InvalidShape,

    #[error("malformed tree payload: {0}")]
    MalformedTree(&'static str),

    #[error("refinement parameter k = {0} is below 2")]
    InvalidK(u32),

    #[error("refinement precondition violated: {0}")]
    RefinePrecondition(&'static str),

    #[error("refinement level {level} has {found} bits, expected {expected}")]
    LevelLength {
        level: usize,
        found: usize,
        expected: usize,
    },

    #[error("invalid sparsity parameter {0}")]
    InvalidSparsity(String),

    #[error("heavy index {0} is out of range 1..={1}")]
    IndexOutOfRange(u64, u64),

    #[error("heavy index {0} appears more than once")]
    DuplicateIndex(u64),

    #[error("heavy ranks are not a permutation of 1..={0}")]
    InvalidRanks(u64),

    #[error("smoothing parameter must be positive")]
    InvalidEpsilon,

    #[error("operation needs an internal node, node {0} is a leaf")]
    LeafNode(usize),

    #[error("the root has no parent")]
    RootNode,

    #[error("node {0} does not exist")]
    NoSuchNode(usize),

    #[error("corrupt container: {0}")]
    Corrupt(String),
}

pub type Result<T> = std::result::Result<T, Error>;

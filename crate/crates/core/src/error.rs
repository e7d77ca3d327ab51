use thiserror::Error;

/// A seed that fails validation, naming the invariant it violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeedError {
    #[error("rank: n = {0}, need n >= 2")]
    Rank(usize),
    #[error("blocks: at least one (k, a) block is required")]
    NoBlocks,
    #[error("k range: block {block} has k = {k}, need 1 <= k <= n-1 = {max}")]
    KRange { block: usize, k: usize, max: usize },
    #[error("a positive: block {block} has a = 0, need a >= 1")]
    APositive { block: usize },
    #[error("balance: sum of (n - k_i) = {lengths} but sum of a_i = {exponents}")]
    Balance { lengths: usize, exponents: usize },
    #[error("size: N = n + a = {0} exceeds the supported maximum of 1000")]
    TooLarge(usize),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("dimension mismatch: expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("length mismatch: word has {word} letters, subexpression has {bits} bits")]
    LengthMismatch { word: usize, bits: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid subexpression {0:?}: expected a string of 0/1")]
    InvalidBits(String),
    #[error("invalid seed: {0}")]
    InvalidSeed(#[from] SeedError),
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("push-forward is not an integer: {0}")]
    NotConstant(String),
    #[error("cannot factorize zero")]
    FactorZero,
    #[error("routes disagree on seed {seed}: direct = {direct}, euler = {euler}")]
    RouteDisagreement {
        seed: String,
        direct: String,
        euler: String,
    },
    #[error("precondition: {0}")]
    Precondition(String),
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("record file: {0}")]
    RecordFile(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

use crate::tensor::TensorShape;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid tensor shape: {0}")]
    InvalidShape(String),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: TensorShape, right: TensorShape },

    #[error("level {level} block has {found} entries, expected {expected}")]
    BlockLength {
        level: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite coefficient at level {level}")]
    NonFinite { level: usize },

    #[error("level {level} out of range for truncation depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("expected level-0 coefficient {expected}, found {found}")]
    LevelZero { expected: f64, found: f64 },

    #[error("not a permutation: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("letter {letter} outside alphabet 1..={dim}")]
    LetterOutOfRange { letter: usize, dim: usize },

    #[error("word of length {len} exceeds truncation depth {depth}")]
    WordTooLong { len: usize, depth: usize },

    #[error("combined degree {degree} exceeds truncation depth {depth}")]
    DegreeOverflow { degree: usize, depth: usize },

    #[error("level-0 block has no crossnorm")]
    ScalarLevel,

    #[error("empty evaluation grid")]
    EmptyGrid,

    #[error("invalid Hölder parameters: {0}")]
    InvalidHoelder(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("time {time} outside [0, {horizon}]")]
    TimeOutOfRange { time: f64, horizon: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("input is not multiplicative: Chen residual {residual:e} exceeds {tolerance:e}")]
    NotMultiplicative { residual: f64, tolerance: f64 },

    #[error("time extension is only defined at truncation depth 2, got {0}")]
    TimeExtensionDepth(usize),

    #[error("molecule values sum to {residual:e}, not zero")]
    NonZeroSum { residual: f64 },

    #[error("invalid molecule: {0}")]
    InvalidMolecule(String),

    #[error("candidate times do not contain support point {0}")]
    MissingCandidate(f64),

    #[error("sampled function has no value at t = {0}")]
    MissingSample(f64),

    #[error("path {index} has Hölder norm {norm} above the family bound {bound}")]
    OutsideFamily { index: usize, norm: f64, bound: f64 },

    #[error("invalid experiment configuration: {0}")]
    Config(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

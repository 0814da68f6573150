use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("letter {letter} is outside an alphabet of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },

    #[error("cannot parse word {0:?}")]
    ParseWord(String),

    #[error("invalid freeness spec: {0}")]
    InvalidSpec(String),

    #[error("operation requires {expected}, got an alphabet of size {actual}")]
    UnsupportedAlphabet {
        expected: &'static str,
        actual: usize,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("no powerfree word of length {0} exists")]
    EmptyLanguage(usize),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("denominator has no positive real root")]
    NoPositiveRoot,

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("morphism is not uniform")]
    NonUniform,

    #[error("seed letter {0} is not prolongable: its image does not start with it")]
    NonProlongable(u8),

    #[error("eigenspace for the dominant eigenvalue has dimension {0}, expected 1")]
    NonUniqueEigenvector(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("morphism has no verification receipt for k = {0}")]
    Unverified(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error(
        "column statistics differ: letter {letter} occurs {left} times in the image of {first} \
         but {right} times in the image of {second} (group {group})"
    )]
    ColumnStatistics {
        letter: u8,
        group: usize,
        first: u8,
        second: u8,
        left: usize,
        right: usize,
    },

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("io/format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;

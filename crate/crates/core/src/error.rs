//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across alignment, conversion, evaluation,
/// optimization, and file handling.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation that needs at least one token received none.
    #[error("segment is empty")]
    EmptySegment,

    /// A token violated the token invariants (non-empty, no spaces).
    #[error("invalid token {token:?}: tokens must be non-empty and contain no space")]
    InvalidToken { token: String },

    /// A tag or score line has an even number of slots and cannot follow the
    /// gap/word interleaving.
    #[error("sequence of length {len} violates the gap/word layout (length must be odd)")]
    UnevenArity { len: usize },

    /// Two sequences that must annotate the same number of units do not.
    #[error("arity mismatch: expected {expected}, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    /// Two corpora that must have the same number of segments do not.
    #[error("segment count mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// An edit script does not cover the MT segment it is applied to.
    #[error("edit script covers {actual} MT tokens, segment has {expected}")]
    ScriptMismatch { expected: usize, actual: usize },

    /// Subword pieces cannot be matched back onto the word sequence.
    #[error("subword segmentation mismatch at word {word_index} ({word:?}): {reason}")]
    SegmentationMismatch {
        word_index: usize,
        word: String,
        reason: String,
    },

    /// Prediction matrices (or a matrix and its references) disagree in shape.
    #[error("shape mismatch: {detail}")]
    ShapeMismatch { detail: String },

    /// The initial simplex does not span the search space.
    #[error("initial simplex is degenerate (vertices are affinely dependent)")]
    DegenerateSimplex,

    /// A configuration value is outside its legal range.
    #[error("invalid configuration: {detail}")]
    InvalidConfig { detail: String },

    /// Weight optimization needs at least two models.
    #[error("ensemble optimization needs at least 2 models, got {got}")]
    TooFewModels { got: usize },

    /// A label string is not OK or BAD.
    #[error("line {line}, column {column}: bad label {label:?} (expected OK or BAD)")]
    BadLabel {
        line: usize,
        column: usize,
        label: String,
    },

    /// A score is not a decimal in [0, 1].
    #[error("line {line}, column {column}: bad score {value:?} (expected a decimal in [0, 1])")]
    BadFloat {
        line: usize,
        column: usize,
        value: String,
    },

    /// Parallel input files differ in line count.
    #[error("line count mismatch: {left_file} has {left} lines, {right_file} has {right}")]
    LineCountMismatch {
        left_file: String,
        left: usize,
        right_file: String,
        right: usize,
    },

    /// A corpus line that must carry content is empty.
    #[error("{file}:{line}: empty line")]
    EmptyLine { file: String, line: usize },

    /// A recipe is missing one of its required input roles.
    #[error("recipe {recipe} requires an input file for role {role:?}")]
    MissingRole { recipe: String, role: String },

    /// Masking ratio outside the open unit interval.
    #[error("masking ratio {ratio} is outside (0, 1)")]
    InvalidRatio { ratio: f64 },

    /// An inner error annotated with the 1-based line it occurred on.
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    /// An inner error annotated with the file and 1-based line.
    #[error("{file}:{line}: {source}")]
    InFile {
        file: String,
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps the error with a 1-based line number.
    pub fn at_line(self, line: usize) -> Error {
        Error::AtLine {
            line,
            source: Box::new(self),
        }
    }

    /// Wraps the error with a file name and 1-based line number.
    pub fn in_file(self, file: impl Into<String>, line: usize) -> Error {
        Error::InFile {
            file: file.into(),
            line,
            source: Box::new(self),
        }
    }
}

use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A labeling assigned a label outside the support of a grid vertex.
    #[error("inadmissible labeling: vertex {vertex:?} (numerators over {resolution}) received label {label}")]
    Inadmissible {
        vertex: Vec<u32>,
        resolution: u32,
        label: usize,
    },

    /// A covering set meets the face it is required to avoid.
    #[error("covering set {set} contains vertex {vertex:?} of the opposite face")]
    FaceViolation { set: usize, vertex: Vec<u32> },

    #[error("grid vertex {vertex:?} is not covered by any set")]
    Uncovered { vertex: Vec<u32> },

    #[error("missing witness for subset {subset:?}")]
    MissingWitness { subset: Vec<usize> },

    #[error("witness for subset {subset:?} violates body {body} by {violation:e}")]
    InvalidWitness {
        subset: Vec<usize>,
        body: usize,
        violation: f64,
    },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    /// Should never surface; signals a broken invariant in the cone map or search.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

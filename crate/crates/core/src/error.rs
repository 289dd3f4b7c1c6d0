use thiserror::Error;

use crate::complex::{Color, VertexId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Three vertices showing that an encoding is not distinguishing: `observer`
/// sees both `first` and `second` (same color) in its link and they share a code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub observer: VertexId,
    pub first: VertexId,
    pub second: VertexId,
    pub code: u32,
}

impl std::fmt::Display for Witness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "observer {} cannot tell {} from {} (both encoded as {})",
            self.observer, self.first, self.second, self.code
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("simplex repeats color {0}")]
    NonChromatic(Color),

    #[error("simplex repeats vertex {0}")]
    DuplicateVertex(VertexId),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("vertex {0} has color {1} but the complex only has {2} processes")]
    ColorOutOfRange(VertexId, Color, u32),

    #[error("vertex {0} appears in no facet")]
    IsolatedVertex(VertexId),

    #[error("duplicate vertex id {0}")]
    DuplicateVertexId(VertexId),

    #[error("simplex {0} is not a face of the complex")]
    NotAFace(String),

    #[error("join would put color {0} twice in one simplex")]
    JoinColorClash(Color),

    #[error("resource limit exceeded: {what} needs {needed} facets, cap is {cap}")]
    ResourceLimit { what: String, needed: u128, cap: usize },

    #[error("vertex {0} was not produced by this subdivision")]
    ForeignVertex(VertexId),

    #[error("encoding has no code for vertex {0}")]
    PartialEncoding(VertexId),

    #[error("codes must be >= 1 (vertex {0} has code 0)")]
    ZeroCode(VertexId),

    #[error("decode ambiguity: {0}")]
    DecodeAmbiguity(Witness),

    #[error("missing table entry f_{k}(Int t(Delta^{i}))")]
    MissingTableEntry { i: usize, k: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unreachable transition: {0}")]
    Unreachable(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}

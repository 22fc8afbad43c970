use std::io;

use thiserror::Error;

use crate::classify::EdgeType;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("edge list is empty")]
    EmptyEdgeList,

    #[error("too many distinct nodes (limit is {})", u32::MAX)]
    TooManyNodes,

    #[error("permutation length {perm} does not match edge count {edges}")]
    LengthMismatch { perm: usize, edges: usize },

    #[error("edge type {edge_type} exhausted at symbol {position}")]
    TypeExhausted { edge_type: EdgeType, position: usize },

    #[error("message needs {needed} edges but the cover has {available}; edge type {edge_type} runs out first")]
    MessageTooLarge {
        needed: usize,
        available: usize,
        edge_type: EdgeType,
    },

    #[error("message body of {0} bytes does not fit a 32-bit length header")]
    BodyTooLong(usize),

    #[error("stego edge list is corrupt or the password is wrong")]
    CorruptOrWrongKey,

    #[error("reference degrees hold {capacity} edge slots, message needs {needed}")]
    ReferenceExhausted { capacity: u64, needed: u64 },

    #[error("bias must be at least 256, got {0}")]
    BiasTooSmall(u64),

    #[error("invalid reference degrees: {0}")]
    InvalidReference(String),

    #[error("edge {index}: {reason}")]
    Decode { index: usize, reason: String },

    #[error("message is empty")]
    EmptyMessage,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("sample {0} is empty")]
    EmptySample(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

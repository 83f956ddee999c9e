use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex label {label} out of range 1..={n}")]
    OutOfRange { label: u32, n: usize },

    #[error("self-loop at vertex {v}")]
    SelfLoop { v: u32 },

    #[error("input graph has a directed cycle")]
    CyclicInput,

    #[error("size mismatch: n={left} vs n={right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("{what} = {requested} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("order is not a member of the family")]
    NotAMember,

    #[error("construction requires n >= 4, got {n}")]
    TooSmall { n: usize },

    #[error(
        "flip strategy and brute-force fallback both failed to produce an \
         acyclic graph for part subset {subset:#b}"
    )]
    StrategyFailure { subset: u64 },

    #[error("ground set is not shattered by the witness family")]
    NotShattered,

    #[error("witness for ground element {ground_index} has no edge contradicting it")]
    NoContradictionEdge { ground_index: usize },

    #[error("invalid {what}: {detail}")]
    InvariantViolation { what: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {path}: {detail}")]
    Io { path: String, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

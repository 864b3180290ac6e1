//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate monomial x{lo}*x{hi}")]
    DuplicateMonomial { lo: usize, hi: usize },

    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("generator set is not cohesive: variables {{{}}} | {{{}}} are never mixed",
        fmt_vars(.left), fmt_vars(.right))]
    Incohesive { left: Vec<usize>, right: Vec<usize> },

    #[error("(x{i}, x{j}) is not a proper edge of the graph")]
    NotAProperEdge { i: usize, j: usize },

    #[error("operation requires a simple graph but the input has loops")]
    LoopsPresent,

    #[error("invalid walk: {0}")]
    Walk(#[from] WalkError),

    #[error("walk is split; operation requires a non-split walk")]
    SplitWalk,

    #[error("walk is not a cycle arrangement or molecule: {0}")]
    NotClassifiable(String),

    #[error("empty generator set")]
    EmptySet,

    #[error("internal invariant breached: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("edge sequence has odd length {0}")]
    OddLength(usize),
    #[error("edge sequence has length {0} < 4")]
    TooShort(usize),
    #[error("edge index {index} out of range 1..={m}")]
    BadEdgeIndex { index: usize, m: usize },
    #[error("edges at positions {pos} and {next} share no vertex")]
    NonAdjacent { pos: usize, next: usize },
    #[error("immediate repetition of edge {edge} at position {pos}")]
    ImmediateRepetition { edge: usize, pos: usize },
    #[error("edge sequence admits no consistent vertex sequence")]
    InconsistentVertices,
}

fn fmt_vars(vars: &[usize]) -> String {
    vars.iter()
        .map(|v| format!("x{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

pub type Result<T> = std::result::Result<T, Error>;

//! Crate-wide error type.
//!
//! Hard resource limits (`LatticeTooLarge`, `BudgetExhausted`, `WeightOverflow`)
//! are always reported as errors, never as a silent negative answer: a search
//! that runs out of budget has not proved anything.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {q} exceeds the supported maximum of {max}")]
    FieldTooLarge { q: u64, max: u64 },
    #[error("field extension degree must be at least 1")]
    ZeroDegree,
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u16 },
    #[error("value {value} is not an element of GF({q})")]
    ElementOutOfRange { value: u32, q: u16 },
    #[error("ground set size {n} exceeds the supported maximum of {max}")]
    GroundSetTooLarge { n: usize, max: usize },
    #[error("element index {index} is out of range for a ground set of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("contract and delete sets overlap")]
    OverlappingSets,
    #[error("set {0} is not contained in the live ground set")]
    NotLive(String),
    #[error("unknown catalog spec `{0}`")]
    UnknownCatalog(String),
    #[error("flat lattice exceeds the cap of {cap} flats")]
    LatticeTooLarge { cap: usize },
    #[error("cover weight exceeds 2^62")]
    WeightOverflow,
    #[error("instance size {n} exceeds the cap of {cap} for this constructor")]
    SizeCapExceeded { n: usize, cap: usize },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("derived invariant failed: {0}")]
    Invariant(String),
    #[error("invalid spine slice i={i}, j={j} for height {h}")]
    SpineIndices { i: usize, j: usize, h: usize },
    #[error("set is not a member of the family")]
    NotAMember,
    #[error("matroid has no non-loop element")]
    AllLoops,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

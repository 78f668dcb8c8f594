use thiserror::Error;

/// Errors raised by lattice, filtration, solver and instance operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("size limit exceeded: {what} has {count} entries (limit {limit})")]
    SizeLimit {
        what: String,
        count: u128,
        limit: u128,
    },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    /// Indices `a ≤ c` with `(a∨b)∧c ≠ a∨(b∧c)`; `labels` names them.
    #[error("lattice is not modular: (a∨b)∧c ≠ a∨(b∧c) for a={}, b={}, c={}", labels[0], labels[1], labels[2])]
    NotModular { a: usize, b: usize, c: usize, labels: [String; 3] },

    #[error("lattice is not distributive: {0}")]
    NotDistributive(String),

    #[error("not a {{0,1}}-sublattice: {0}")]
    NotSublattice(String),

    #[error("invalid chain: {0}")]
    InvalidChain(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("rank axiom violated: {0}")]
    RankAxiomViolation(String),

    #[error("degree axiom violated at ({a}, {b}): {detail}")]
    DegreeAxiomViolation { a: usize, b: usize, detail: String },

    #[error("chamber minima disagree: {0}")]
    InconsistentMinima(String),

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("invalid field parameters: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

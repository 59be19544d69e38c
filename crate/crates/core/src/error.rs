use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors reported by state construction, decompositions, and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("party dimensions {0:?} must all be at least 2")]
    PartyDimension((usize, usize, usize)),

    #[error("expected {expected} amplitudes for dims {dims:?}, got {got}")]
    AmplitudeCount {
        dims: (usize, usize, usize),
        expected: usize,
        got: usize,
    },

    #[error("factor vector for party {party} has length {got}, expected {expected}")]
    FactorLength {
        party: usize,
        expected: usize,
        got: usize,
    },

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("state norm {norm} differs from 1 beyond tolerance")]
    NotNormalized { norm: f64 },

    #[error("matrix shape ({rows}, {cols}) incompatible with {context}")]
    MatrixShape {
        rows: usize,
        cols: usize,
        context: &'static str,
    },

    #[error("matrix deviates from Hermitian by {deviation:.3e}")]
    NonHermitian { deviation: f64 },

    #[error("trace {trace} differs from 1 beyond tolerance")]
    TraceNotOne { trace: f64 },

    #[error("eigenvalue {value:.3e} below the negativity tolerance")]
    NegativeEigenvalue { value: f64 },

    #[error("level pair ({lo}, {hi}) invalid for party dimension {dim}")]
    LevelPair { lo: usize, hi: usize, dim: usize },

    #[error("invalid party permutation {0:?}")]
    InvalidPermutation([usize; 3]),

    #[error("rearranged matrix deviates from complex-symmetric by relative {deviation:.3e}")]
    AsymmetricRearrangement { deviation: f64 },

    #[error("rearranged matrix deviates from Hermitian by relative {deviation:.3e}")]
    NonHermitianRearrangement { deviation: f64 },

    #[error(
        "spectral rank {rank} exceeds the exact-tensor limit {limit}; use the quasi-pure path"
    )]
    RankLimit { rank: usize, limit: usize },

    #[error(
        "dominant eigenvector carries no sub-cube tangle content (denominator {denominator:.3e}); \
         the quasi-pure value is inconclusive, not zero"
    )]
    Inconclusive { denominator: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Json(#[from] serde_json::Error),
}

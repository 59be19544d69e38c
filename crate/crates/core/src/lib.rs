//! Numerics for deciding whether a tripartite state carries genuine
//! three-party entanglement.
//!
//! The pure-state criterion `F` is the fourth root of the summed 3-tangles of
//! every 2x2x2 sub-cube of the coefficient tensor; it vanishes in the absence
//! of genuine tripartite entanglement and is invariant under party
//! permutations in any dimensions. For mixed states the crate provides three
//! singular-value lower bounds built on a Kronecker-product decomposition
//! chain, and the analytic quasi-pure approximation `F_a` for density
//! matrices with one dominant eigenvalue.
//!
//! Modules map onto the pipeline:
//!
//! - [`state`]: states, density matrices, named generators, spectral
//!   decomposition.
//! - [`tangle`]: sub-cube invariants and the criterion `F`.
//! - [`kron`]: rearrangement/SVD Kronecker splits, including the symmetric
//!   and conjugate specializations.
//! - [`bounds`]: the eigenvector tensor, its decomposition chain, and the
//!   three lower bounds.
//! - [`quasipure`]: the tau matrix and `F_a`.
//! - [`files`]: the canonical JSON state formats.

pub mod bounds;
mod dd;
pub mod error;
pub mod files;
pub mod kron;
mod linalg;
pub mod quasipure;
pub mod state;
pub mod tangle;

/// Complex double, the scalar type used throughout.
pub type C64 = num_complex::Complex64;

pub use error::{Error, Result};

pub use bounds::{
    a_tensor, c_chain, lambda_gap, lower_bound, pair_bilinear, ATensor, BoundMethod, BoundParams,
    CChain, ConjugateFactor, SymmetricBlock, DEFAULT_RANK_LIMIT,
};
pub use kron::{
    conjugate_kp_decompose, kp_decompose, rearrange, symmetric_kp_decompose, unvectorize,
    vectorize, BlockDims, ConjugateTerm, KronTerm, KronTerms, SymmetricTerm,
};
pub use quasipure::{f_a, f_a_from_decomposition, tau_matrix, TauMatrix};
pub use state::{
    ghz_w_mixture, named_state, permute_parties, product_state, spectral_decompose,
    spectral_decompose_default, white_noise_mixture, DensityMatrix, NamedState, PartyPermutation,
    PureState, SpectralDecomposition, DEFAULT_EIGENVALUE_CUTOFF,
};
pub use tangle::{
    big_f, big_f_with, cube_indices, cube_invariants, cube_invariants_with, cube_tangles,
    cube_tangles_with, extract_cube, r_matrix, selection_matrices, CubeIndex, CubeInvariants,
    Normalization, SelectionMatrix, SubCube,
};

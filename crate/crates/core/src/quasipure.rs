//! Analytic quasi-pure approximation: the tau matrix built from the
//! second-order tensor entries against the dominant eigenvector, and the
//! singular-value gap that approximates the mixed-state criterion.

use nalgebra::DMatrix;

use crate::bounds::{lambda_gap, pair_bilinear};
use crate::error::{Error, Result};
use crate::state::{spectral_decompose_default, DensityMatrix, SpectralDecomposition};
use crate::tangle::{cube_indices, extract_cube_for_grid, SubCube};
use crate::C64;

/// Cutoff below which the dominant-eigenvector tangle content is treated as
/// vanishing and the approximation is reported inconclusive rather than zero.
pub const TANGLE_CONTENT_CUTOFF: f64 = 1e-14;

/// Eigenvalue gap below which the single-dominant-eigenvalue assumption is
/// considered weak; surfaced so callers can warn.
pub const DOMINANCE_GAP_WARNING: f64 = 0.1;

/// The `r x r` matrix of second-order tensor entries, normalized by the
/// dominant entry to the 3/4 power.
///
/// For rank-1 input the single entry equals the pure-state criterion of the
/// eigenvector. Near-symmetry is monitored, not enforced.
#[derive(Clone, Debug)]
pub struct TauMatrix {
    matrix: DMatrix<C64>,
    asymmetry: f64,
    dominance_gap: Option<f64>,
}

impl TauMatrix {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// Frobenius distance between the matrix and its transpose.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    /// `u_1 - u_2`, or `None` for rank-1 decompositions.
    pub fn dominance_gap(&self) -> Option<f64> {
        self.dominance_gap
    }
}

/// Builds the tau matrix from a spectral decomposition.
///
/// Only the `r^2` entries against the dominant eigenvector are computed; the
/// full fourth-order tensor is never formed, which is what keeps this path
/// usable at ranks far beyond the exact-tensor limit. Cube contributions
/// accumulate in the fixed lexicographic order.
pub fn tau_matrix(sd: &SpectralDecomposition) -> Result<TauMatrix> {
    let r = sd.rank();
    let dims = sd.dims();
    let mut num = DMatrix::<C64>::zeros(r, r);

    for idx in cube_indices(dims) {
        let cubes: Vec<SubCube> = sd
            .eigenvectors
            .iter()
            .map(|psi| extract_cube_for_grid(psi, &idx))
            .collect();
        // bilinears of every eigenvector against the dominant one;
        // gt[t][i][a] = g_{t,i}(cube_a, cube_0)
        let g_col = |t: usize, i: usize| -> Vec<C64> {
            (0..r)
                .map(|a| pair_bilinear(&cubes[a], &cubes[0], t, i))
                .collect()
        };
        let gt: [[Vec<C64>; 2]; 2] = [[g_col(0, 0), g_col(0, 1)], [g_col(1, 0), g_col(1, 1)]];
        // Q(t1,t2; a,0,b,0) = sum_i gt[t1][i][a] conj(gt[t2][i][b])
        let q = |t1: usize, t2: usize, a: usize, b: usize| -> C64 {
            (0..2).map(|i| gt[t1][i][a] * gt[t2][i][b].conj()).sum()
        };
        // scalars of the dominant eigenvector alone
        let (q00_0, q11_0, q01_0, q10_0) =
            (q(0, 0, 0, 0), q(1, 1, 0, 0), q(0, 1, 0, 0), q(1, 0, 0, 0));
        // polarized-determinant bracket, as in the full tensor
        for l in 0..r {
            for m in 0..r {
                let bracket = q(0, 0, l, m) * q11_0 + q(1, 1, l, m) * q00_0
                    - q(0, 1, l, m) * q10_0
                    - q(1, 0, l, m) * q01_0;
                num[(l, m)] += bracket * C64::new(0.5, 0.0);
            }
        }
    }

    let u = &sd.eigenvalues;
    let denominator = u[0].powi(4) * num[(0, 0)].re;
    if denominator <= TANGLE_CONTENT_CUTOFF {
        return Err(Error::Inconclusive { denominator });
    }
    let scale = 1.0 / denominator.powf(0.75);
    let u0_cubed = u[0].powi(3);
    let mut matrix = DMatrix::<C64>::zeros(r, r);
    for l in 0..r {
        for m in 0..r {
            let weight = (u[l] * u[m]).sqrt() * u0_cubed;
            matrix[(l, m)] = num[(l, m)] * C64::new(weight * scale, 0.0);
        }
    }
    let asymmetry = (&matrix - matrix.transpose()).norm();
    let dominance_gap = (r >= 2).then(|| u[0] - u[1]);
    Ok(TauMatrix {
        matrix,
        asymmetry,
        dominance_gap,
    })
}

/// The quasi-pure approximation from an existing decomposition.
pub fn f_a_from_decomposition(sd: &SpectralDecomposition) -> Result<f64> {
    Ok(lambda_gap(tau_matrix(sd)?.matrix()))
}

/// The quasi-pure approximation `max(lambda_1 - sum_{i>1} lambda_i, 0)` of a
/// density matrix, using the default spectral cutoff.
pub fn f_a(rho: &DensityMatrix) -> Result<f64> {
    f_a_from_decomposition(&spectral_decompose_default(rho)?)
}

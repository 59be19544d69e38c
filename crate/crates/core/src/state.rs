//! Tripartite states, density matrices, and spectral decomposition.
//!
//! Amplitudes use the composite index `i*n2*n3 + j*n3 + k` (third party
//! fastest); density matrices use the same ordering on both axes. States are
//! never normalized implicitly: the pure-state criterion is defined on raw
//! coefficient cubes, so generators produce normalized states but
//! [`PureState::new`] stores amplitudes exactly as given.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

/// Relative eigenvalue cutoff used by [`spectral_decompose_default`].
///
/// Suppresses numerical noise without discarding physical weight.
pub const DEFAULT_EIGENVALUE_CUTOFF: f64 = 1e-12;

/// Tolerance for Hermiticity, trace, and normalization validation.
pub const VALIDATION_TOL: f64 = 1e-8;

/// Pure state of three parties with dimensions `(n1, n2, n3)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    dims: (usize, usize, usize),
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Builds a state from raw amplitudes in composite-index order.
    /// No normalization is applied.
    pub fn new(dims: (usize, usize, usize), amplitudes: Vec<C64>) -> Result<Self> {
        if dims.0 < 2 || dims.1 < 2 || dims.2 < 2 {
            return Err(Error::PartyDimension(dims));
        }
        let expected = dims.0 * dims.1 * dims.2;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                dims,
                expected,
                got: amplitudes.len(),
            });
        }
        if amplitudes
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "pure-state amplitudes",
            });
        }
        Ok(PureState { dims, amplitudes })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.0 * self.dims.1 * self.dims.2
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    #[inline]
    pub fn composite_index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims.1 + j) * self.dims.2 + k
    }

    #[inline]
    pub fn amplitude(&self, i: usize, j: usize, k: usize) -> C64 {
        self.amplitudes[self.composite_index(i, j, k)]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Scales every amplitude by `factor`.
    pub fn scaled(&self, factor: C64) -> PureState {
        PureState {
            dims: self.dims,
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }

    /// Returns the state rescaled to unit norm.
    pub fn normalized(&self) -> Result<PureState> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(self.scaled(C64::new(1.0 / n, 0.0)))
    }

    pub fn to_vector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.amplitudes)
    }

    pub fn from_vector(dims: (usize, usize, usize), v: &DVector<C64>) -> Result<Self> {
        PureState::new(dims, v.iter().copied().collect())
    }

    /// Applies a unitary (or any matrix of matching dimension) to one party.
    pub fn apply_local_operator(&self, party: usize, op: &DMatrix<C64>) -> Result<PureState> {
        let n = match party {
            0 => self.dims.0,
            1 => self.dims.1,
            2 => self.dims.2,
            _ => {
                return Err(Error::OutOfRange {
                    name: "party",
                    value: party as f64,
                    lo: 0.0,
                    hi: 2.0,
                })
            }
        };
        if op.nrows() != n || op.ncols() != n {
            return Err(Error::MatrixShape {
                rows: op.nrows(),
                cols: op.ncols(),
                context: "local operator",
            });
        }
        let (n1, n2, n3) = self.dims;
        let mut out = vec![C64::new(0.0, 0.0); n1 * n2 * n3];
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..n3 {
                    let mut acc = C64::new(0.0, 0.0);
                    match party {
                        0 => {
                            for s in 0..n1 {
                                acc += op[(i, s)] * self.amplitude(s, j, k);
                            }
                        }
                        1 => {
                            for s in 0..n2 {
                                acc += op[(j, s)] * self.amplitude(i, s, k);
                            }
                        }
                        _ => {
                            for s in 0..n3 {
                                acc += op[(k, s)] * self.amplitude(i, j, s);
                            }
                        }
                    }
                    out[self.composite_index(i, j, k)] = acc;
                }
            }
        }
        Ok(PureState {
            dims: self.dims,
            amplitudes: out,
        })
    }
}

/// Bijective relabeling of the three parties.
///
/// `map[s] = p` means slot `s` of the permuted state takes the old party `p`,
/// so `(A,B,C) -> (C,A,B)` is `[2, 0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartyPermutation {
    map: [usize; 3],
}

impl PartyPermutation {
    pub fn new(map: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &p in &map {
            if p > 2 || seen[p] {
                return Err(Error::InvalidPermutation(map));
            }
            seen[p] = true;
        }
        Ok(PartyPermutation { map })
    }

    pub fn identity() -> Self {
        PartyPermutation { map: [0, 1, 2] }
    }

    /// All six permutations, in lexicographic order of their maps.
    pub fn all() -> [PartyPermutation; 6] {
        [
            PartyPermutation { map: [0, 1, 2] },
            PartyPermutation { map: [0, 2, 1] },
            PartyPermutation { map: [1, 0, 2] },
            PartyPermutation { map: [1, 2, 0] },
            PartyPermutation { map: [2, 0, 1] },
            PartyPermutation { map: [2, 1, 0] },
        ]
    }

    pub fn map(&self) -> [usize; 3] {
        self.map
    }

    /// Composition: applying `self` first, then `next`.
    pub fn then(&self, next: &PartyPermutation) -> PartyPermutation {
        PartyPermutation {
            map: [
                self.map[next.map[0]],
                self.map[next.map[1]],
                self.map[next.map[2]],
            ],
        }
    }
}

/// Relabels the parties of `s`: slot `t` of the result is old party `p.map[t]`.
///
/// A pure index shuffle, so composition is exact (no arithmetic).
pub fn permute_parties(s: &PureState, p: &PartyPermutation) -> PureState {
    let old = [s.dims().0, s.dims().1, s.dims().2];
    let dims = (old[p.map[0]], old[p.map[1]], old[p.map[2]]);
    let mut amplitudes = vec![C64::new(0.0, 0.0); s.total_dim()];
    for i0 in 0..old[0] {
        for i1 in 0..old[1] {
            for i2 in 0..old[2] {
                let levels = [i0, i1, i2];
                let new_idx =
                    (levels[p.map[0]] * dims.1 + levels[p.map[1]]) * dims.2 + levels[p.map[2]];
                amplitudes[new_idx] = s.amplitude(i0, i1, i2);
            }
        }
    }
    PureState { dims, amplitudes }
}

/// The named generator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedState {
    /// `(|000> + |111>)/sqrt(2)` in `(2,2,2)`.
    Ghz2,
    /// `(1/sqrt(d)) sum_i |iii>` in `(d,d,d)`.
    Ghz(usize),
    /// `(|001> + |010> + |100>)/sqrt(3)`.
    W,
    /// `(|110> + |011> + |101>)/sqrt(3)`, the flipped W state.
    WTilde,
}

pub fn named_state(kind: NamedState) -> Result<PureState> {
    match kind {
        NamedState::Ghz2 => named_state(NamedState::Ghz(2)),
        NamedState::Ghz(d) => {
            if d < 2 {
                return Err(Error::PartyDimension((d, d, d)));
            }
            let mut amps = vec![C64::new(0.0, 0.0); d * d * d];
            let w = 1.0 / (d as f64).sqrt();
            for i in 0..d {
                amps[(i * d + i) * d + i] = C64::new(w, 0.0);
            }
            PureState::new((d, d, d), amps)
        }
        NamedState::W => {
            let w = C64::new(1.0 / 3f64.sqrt(), 0.0);
            let mut amps = vec![C64::new(0.0, 0.0); 8];
            amps[0b001] = w;
            amps[0b010] = w;
            amps[0b100] = w;
            PureState::new((2, 2, 2), amps)
        }
        NamedState::WTilde => {
            let w = C64::new(1.0 / 3f64.sqrt(), 0.0);
            let mut amps = vec![C64::new(0.0, 0.0); 8];
            amps[0b110] = w;
            amps[0b011] = w;
            amps[0b101] = w;
            PureState::new((2, 2, 2), amps)
        }
    }
}

/// Product state `a_{ijk} = v1_i v2_j v3_k`.
pub fn product_state(v1: &[C64], v2: &[C64], v3: &[C64]) -> Result<PureState> {
    let dims = (v1.len(), v2.len(), v3.len());
    if dims.0 < 2 || dims.1 < 2 || dims.2 < 2 {
        return Err(Error::PartyDimension(dims));
    }
    let mut amps = Vec::with_capacity(dims.0 * dims.1 * dims.2);
    for a in v1 {
        for b in v2 {
            for c in v3 {
                amps.push(a * b * c);
            }
        }
    }
    PureState::new(dims, amps)
}

/// Mixed state of three parties, stored as a dense `D x D` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: (usize, usize, usize),
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates shape, finiteness, Hermiticity, and unit trace.
    /// Eigenvalue nonnegativity is checked by [`spectral_decompose`].
    pub fn new(dims: (usize, usize, usize), matrix: DMatrix<C64>) -> Result<Self> {
        if dims.0 < 2 || dims.1 < 2 || dims.2 < 2 {
            return Err(Error::PartyDimension(dims));
        }
        let d = dims.0 * dims.1 * dims.2;
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::MatrixShape {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
                context: "density matrix",
            });
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "density-matrix entries",
            });
        }
        let herm_dev = linalg::frobenius(&(&matrix - matrix.adjoint()));
        if herm_dev > VALIDATION_TOL * (1.0 + linalg::frobenius(&matrix)) {
            return Err(Error::NonHermitian {
                deviation: herm_dev,
            });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > VALIDATION_TOL || trace.im.abs() > VALIDATION_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        Ok(DensityMatrix { dims, matrix })
    }

    /// `|s><s|` for a normalized pure state.
    pub fn from_pure_state(s: &PureState) -> Result<Self> {
        let norm = s.norm();
        if (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        let v = s.to_vector();
        DensityMatrix::new(s.dims(), &v * v.adjoint())
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.0 * self.dims.1 * self.dims.2
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }
}

/// `rho(x) = x |GHZ><GHZ| + (1-x)/2 (|W><W| + |Wt><Wt|)` in `(2,2,2)`.
///
/// GHZ, W, and the flipped W are mutually orthonormal, so the eigenvalues are
/// `{x, (1-x)/2, (1-x)/2}`.
pub fn ghz_w_mixture(x: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&x) || !x.is_finite() {
        return Err(Error::OutOfRange {
            name: "x",
            value: x,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let ghz = named_state(NamedState::Ghz2)?.to_vector();
    let w = named_state(NamedState::W)?.to_vector();
    let wt = named_state(NamedState::WTilde)?.to_vector();
    let m = (&ghz * ghz.adjoint()) * C64::new(x, 0.0)
        + (&w * w.adjoint()) * C64::new((1.0 - x) / 2.0, 0.0)
        + (&wt * wt.adjoint()) * C64::new((1.0 - x) / 2.0, 0.0);
    DensityMatrix::new((2, 2, 2), m)
}

/// `p |s><s| + (1-p) I/D` for a normalized `s`.
pub fn white_noise_mixture(s: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) || !p.is_finite() {
        return Err(Error::OutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let norm = s.norm();
    if (norm - 1.0).abs() > VALIDATION_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let d = s.total_dim();
    let v = s.to_vector();
    let m = (&v * v.adjoint()) * C64::new(p, 0.0)
        + DMatrix::<C64>::identity(d, d) * C64::new((1.0 - p) / d as f64, 0.0);
    DensityMatrix::new(s.dims(), m)
}

/// Eigenpairs of a density matrix above a relative cutoff, descending.
///
/// Eigenvectors are orthonormal and phase-fixed (largest-magnitude component
/// real positive). Fields are public so callers can re-mix degenerate
/// subspaces in tests; the invariants are only guaranteed for values produced
/// by [`spectral_decompose`].
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<PureState>,
}

impl SpectralDecomposition {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        self.eigenvectors[0].dims()
    }

    /// `sum_a u_a |psi_a><psi_a|` over the retained rank.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let d = self.eigenvectors[0].total_dim();
        let mut m = DMatrix::<C64>::zeros(d, d);
        for (u, psi) in self.eigenvalues.iter().zip(self.eigenvectors.iter()) {
            let v = psi.to_vector();
            m += (&v * v.adjoint()) * C64::new(*u, 0.0);
        }
        m
    }
}

/// Eigendecomposition of `rho`, keeping eigenvalues `u > cutoff * u_max`.
///
/// Fails if any eigenvalue is below `-1e-8`. The deterministic phase
/// convention makes repeated runs byte-identical.
pub fn spectral_decompose(rho: &DensityMatrix, cutoff: f64) -> Result<SpectralDecomposition> {
    if !(0.0..1.0).contains(&cutoff) {
        return Err(Error::OutOfRange {
            name: "cutoff",
            value: cutoff,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let (values, vectors) = linalg::hermitian_eigen(rho.matrix().clone());
    if let Some(&min) = values.last() {
        if min < -VALIDATION_TOL {
            return Err(Error::NegativeEigenvalue { value: min });
        }
    }
    let u_max = values[0];
    let mut eigenvalues = Vec::new();
    let mut eigenvectors = Vec::new();
    for (u, mut v) in values.into_iter().zip(vectors) {
        if u <= cutoff * u_max || u <= 0.0 {
            continue;
        }
        linalg::phase_normalize(&mut v);
        eigenvalues.push(u);
        eigenvectors.push(PureState::from_vector(rho.dims(), &v)?);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// [`spectral_decompose`] with the default relative cutoff.
pub fn spectral_decompose_default(rho: &DensityMatrix) -> Result<SpectralDecomposition> {
    spectral_decompose(rho, DEFAULT_EIGENVALUE_CUTOFF)
}

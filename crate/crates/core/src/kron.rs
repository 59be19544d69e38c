//! Kronecker-product decomposition: column-stacking, rearrangement, and the
//! SVD-based splits `M = sum X_i (x) Y_i`, including the symmetric
//! `sum B_i (x) B_i` and conjugate `sum +/- C_i (x) C_i^*` specializations.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::C64;

/// Relative weight below which decomposition terms are dropped.
pub const TERM_CUTOFF: f64 = 1e-12;

/// Relative tolerance for the symmetry / Hermiticity preconditions.
pub const STRUCTURE_TOL: f64 = 1e-8;

/// Factor shapes of a Kronecker split: the decomposed matrix has shape
/// `(p1*p2) x (q1*q2)` with outer factors `p1 x q1` and inner `p2 x q2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockDims {
    outer: (usize, usize),
    inner: (usize, usize),
}

impl BlockDims {
    pub fn new(outer: (usize, usize), inner: (usize, usize)) -> Result<Self> {
        if outer.0 == 0 || outer.1 == 0 || inner.0 == 0 || inner.1 == 0 {
            return Err(Error::MatrixShape {
                rows: outer.0 * inner.0,
                cols: outer.1 * inner.1,
                context: "block dims",
            });
        }
        Ok(BlockDims { outer, inner })
    }

    pub fn outer(&self) -> (usize, usize) {
        self.outer
    }

    pub fn inner(&self) -> (usize, usize) {
        self.inner
    }

    fn check(&self, m: &DMatrix<C64>) -> Result<()> {
        if m.nrows() != self.outer.0 * self.inner.0 || m.ncols() != self.outer.1 * self.inner.1 {
            return Err(Error::MatrixShape {
                rows: m.nrows(),
                cols: m.ncols(),
                context: "kronecker block structure",
            });
        }
        Ok(())
    }
}

/// Column-stacking `Vec(A) = [a11, ..., ap1, a12, ..., apq]^T`.
pub fn vectorize(m: &DMatrix<C64>) -> DVector<C64> {
    // nalgebra stores column-major, so the raw data is already in Vec order.
    DVector::from_column_slice(m.as_slice())
}

/// Inverse of [`vectorize`] for a `rows x cols` target.
pub fn unvectorize(v: &DVector<C64>, rows: usize, cols: usize) -> DMatrix<C64> {
    assert_eq!(
        v.len(),
        rows * cols,
        "vector length must match target shape"
    );
    DMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// The rearrangement `M~` with `rearrange(A (x) B) = Vec(A) Vec(B)^T`.
///
/// A pure entry permutation (hence a Frobenius isometry), linear in `m`.
pub fn rearrange(m: &DMatrix<C64>, b: &BlockDims) -> Result<DMatrix<C64>> {
    b.check(m)?;
    let (p1, q1) = b.outer;
    let (p2, q2) = b.inner;
    let mut out = DMatrix::zeros(p1 * q1, p2 * q2);
    for i1 in 0..p1 {
        for j1 in 0..q1 {
            let row = j1 * p1 + i1;
            for i2 in 0..p2 {
                for j2 in 0..q2 {
                    out[(row, j2 * p2 + i2)] = m[(i1 * p2 + i2, j1 * q2 + j2)];
                }
            }
        }
    }
    Ok(out)
}

/// One term of a Kronecker decomposition; `weight` is the singular value of
/// the rearranged matrix and the factors already carry `sqrt(weight)`.
#[derive(Clone, Debug)]
pub struct KronTerm {
    pub outer: DMatrix<C64>,
    pub inner: DMatrix<C64>,
    pub weight: f64,
}

/// Ordered decomposition `M = sum_i outer_i (x) inner_i`, weights descending.
#[derive(Clone, Debug)]
pub struct KronTerms {
    pub terms: Vec<KronTerm>,
}

impl KronTerms {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn reconstruct(&self, b: &BlockDims) -> DMatrix<C64> {
        let rows = b.outer.0 * b.inner.0;
        let cols = b.outer.1 * b.inner.1;
        let mut m = DMatrix::zeros(rows, cols);
        for t in &self.terms {
            m += t.outer.kronecker(&t.inner);
        }
        m
    }
}

/// SVD-based Kronecker decomposition of `m`.
///
/// `Vec(X_i) = sqrt(s_i) u_i`, `Vec(Y_i) = sqrt(s_i) conj(v_i)`; truncating to
/// the leading k terms is the nearest rank-k Kronecker sum in Frobenius norm.
pub fn kp_decompose(m: &DMatrix<C64>, b: &BlockDims) -> Result<KronTerms> {
    let mt = rearrange(m, b)?;
    let (u, sig, vt) = linalg::sorted_svd(mt);
    let mut terms = Vec::new();
    if sig.is_empty() || sig[0] <= 0.0 {
        return Ok(KronTerms { terms });
    }
    for (i, &s) in sig.iter().enumerate() {
        if s <= TERM_CUTOFF * sig[0] {
            break;
        }
        let mut ui = u.column(i).into_owned();
        let mut vi_conj = vt.row(i).transpose(); // = conj(v_i)
                                                 // canonical phase on the outer factor, compensated on the inner
        let mut best = 0usize;
        let mut mag = 0.0;
        for (k, z) in ui.iter().enumerate() {
            if z.norm() > mag {
                mag = z.norm();
                best = k;
            }
        }
        if mag > 0.0 {
            let phase = ui[best] / C64::new(mag, 0.0);
            let corr = phase.conj();
            for z in ui.iter_mut() {
                *z *= corr;
            }
            for z in vi_conj.iter_mut() {
                *z *= phase;
            }
        }
        let root = C64::new(s.sqrt(), 0.0);
        terms.push(KronTerm {
            outer: unvectorize(&(ui * root), b.outer.0, b.outer.1),
            inner: unvectorize(&(vi_conj * root), b.inner.0, b.inner.1),
            weight: s,
        });
    }
    Ok(KronTerms { terms })
}

/// One factor of a symmetric split `M = sum_i B_i (x) B_i`.
#[derive(Clone, Debug)]
pub struct SymmetricTerm {
    pub factor: DMatrix<C64>,
    pub weight: f64,
}

/// Takagi-based symmetric Kronecker decomposition.
///
/// Requires equal outer and inner factor shapes and a complex-symmetric
/// rearrangement (a violation signals a caller bug, not data noise).
pub fn symmetric_kp_decompose(m: &DMatrix<C64>, b: &BlockDims) -> Result<Vec<SymmetricTerm>> {
    if b.outer != b.inner {
        return Err(Error::MatrixShape {
            rows: m.nrows(),
            cols: m.ncols(),
            context: "symmetric kronecker split (outer and inner shapes must match)",
        });
    }
    let mt = rearrange(m, b)?;
    let norm = linalg::frobenius(&mt);
    if norm == 0.0 {
        return Ok(Vec::new());
    }
    let dev = linalg::frobenius(&(&mt - mt.transpose())) / norm;
    if dev > STRUCTURE_TOL {
        return Err(Error::AsymmetricRearrangement { deviation: dev });
    }
    let sym = (&mt + mt.transpose()) * C64::new(0.5, 0.0);
    let (sig, vecs) = linalg::takagi(&sym);
    let mut terms = Vec::new();
    for (s, z) in sig.iter().zip(vecs.iter()) {
        if *s <= TERM_CUTOFF * sig[0] {
            break;
        }
        let scaled = z * C64::new(s.sqrt(), 0.0);
        terms.push(SymmetricTerm {
            factor: unvectorize(&scaled, b.outer.0, b.outer.1),
            weight: *s,
        });
    }
    Ok(terms)
}

/// One factor of a conjugate split `M = sum_i sign_i C_i (x) C_i^*`.
#[derive(Clone, Debug)]
pub struct ConjugateTerm {
    pub factor: DMatrix<C64>,
    pub weight: f64,
    /// True when the term enters with a minus sign (negative eigenvalue of
    /// the rearranged matrix); callers decide whether that warrants a warning.
    pub negative: bool,
}

/// Eigendecomposition-based conjugate Kronecker decomposition.
///
/// `rearrange(sum s_i C_i (x) C_i^*) = sum s_i Vec(C_i) Vec(C_i)^dagger` is
/// Hermitian; its eigenpairs give the factors with `weight = |mu_i|`
/// descending and recorded signs.
pub fn conjugate_kp_decompose(m: &DMatrix<C64>, b: &BlockDims) -> Result<Vec<ConjugateTerm>> {
    let mt = rearrange(m, b)?;
    let norm = linalg::frobenius(&mt);
    if norm == 0.0 {
        return Ok(Vec::new());
    }
    let dev = linalg::frobenius(&(&mt - mt.adjoint())) / norm;
    if dev > STRUCTURE_TOL {
        return Err(Error::NonHermitianRearrangement { deviation: dev });
    }
    let herm = (&mt + mt.adjoint()) * C64::new(0.5, 0.0);
    let (vals, vecs) = linalg::hermitian_eigen(herm);
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[b].abs().partial_cmp(&vals[a].abs()).unwrap());
    let top = vals[order[0]].abs();
    let mut terms = Vec::new();
    for &i in &order {
        let mu = vals[i];
        if mu.abs() <= TERM_CUTOFF * top {
            break;
        }
        let mut w = vecs[i].clone();
        linalg::phase_normalize(&mut w);
        let scaled = w * C64::new(mu.abs().sqrt(), 0.0);
        terms.push(ConjugateTerm {
            factor: unvectorize(&scaled, b.outer.0, b.outer.1),
            weight: mu.abs(),
            negative: mu < 0.0,
        });
    }
    Ok(terms)
}

/// `sum_i sign_i C_i (x) C_i^*` for checking conjugate-split contracts.
pub fn reconstruct_conjugate(terms: &[ConjugateTerm], b: &BlockDims) -> DMatrix<C64> {
    let rows = b.outer.0 * b.inner.0;
    let cols = b.outer.1 * b.inner.1;
    let mut m = DMatrix::zeros(rows, cols);
    for t in terms {
        let conj = t.factor.map(|z| z.conj());
        let sign = if t.negative { -1.0 } else { 1.0 };
        m += t.factor.kronecker(&conj) * C64::new(sign, 0.0);
    }
    m
}

/// `sum_i B_i (x) B_i` for checking symmetric-split contracts.
pub fn reconstruct_symmetric(terms: &[SymmetricTerm], b: &BlockDims) -> DMatrix<C64> {
    let rows = b.outer.0 * b.inner.0;
    let cols = b.outer.1 * b.inner.1;
    let mut m = DMatrix::zeros(rows, cols);
    for t in terms {
        m += t.factor.kronecker(&t.factor);
    }
    m
}

//! Internal dense linear-algebra helpers shared by the decomposition modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::C64;

pub(crate) fn frobenius(m: &DMatrix<C64>) -> f64 {
    m.norm()
}

/// Hermitian eigendecomposition, eigenvalues sorted descending.
///
/// Ties keep the solver's original order (stable sort), which makes the
/// result deterministic for a given input.
pub(crate) fn hermitian_eigen(m: DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = m.nrows();
    let se = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());
    let values = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| se.eigenvectors.column(i).into_owned())
        .collect();
    (values, vectors)
}

/// Full SVD with singular values guaranteed descending.
pub(crate) fn sorted_svd(m: DMatrix<C64>) -> (DMatrix<C64>, Vec<f64>, DMatrix<C64>) {
    let svd = m.svd(true, true);
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let u_sorted = DMatrix::from_columns(
        &order
            .iter()
            .map(|&i| u.column(i).into_owned())
            .collect::<Vec<_>>(),
    );
    let vt_sorted = DMatrix::from_rows(
        &order
            .iter()
            .map(|&i| vt.row(i).into_owned())
            .collect::<Vec<_>>(),
    );
    (u_sorted, values, vt_sorted)
}

/// Singular values of `m`, descending.
pub(crate) fn singular_values(m: &DMatrix<C64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Multiply by a unit phase so the largest-magnitude entry becomes real positive.
pub(crate) fn phase_normalize(v: &mut DVector<C64>) {
    let mut best = 0usize;
    let mut mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > mag {
            mag = a;
            best = i;
        }
    }
    if mag > 0.0 {
        let corr = v[best].conj() / C64::new(mag, 0.0);
        for z in v.iter_mut() {
            *z *= corr;
        }
    }
}

/// Flip the overall sign so the largest-magnitude entry has Re > 0 (Im > 0 on
/// a real-part tie). Unlike a phase rotation this keeps `v v^T` invariant.
pub(crate) fn sign_normalize(v: &mut DVector<C64>) {
    let mut best = 0usize;
    let mut mag = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > mag {
            mag = a;
            best = i;
        }
    }
    if mag > 0.0 {
        let z = v[best];
        if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
            for z in v.iter_mut() {
                *z = -*z;
            }
        }
    }
}

/// Takagi factorization `s = sum_i sigma_i z_i z_i^T` of a complex-symmetric
/// matrix via the real symmetric embedding `[[X, Y], [Y, -X]]` of `s = X + iY`.
///
/// If `T [u; v] = sigma [u; v]` then `z = u + iv` satisfies
/// `s conj(z) = sigma z`, and the top-n eigenvectors give an orthonormal
/// Takagi basis. Degenerate singular values need no special casing here,
/// which is why this doubles as the fallback for [`takagi`].
pub(crate) fn takagi_real_embedding(s: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = s.nrows();
    let mut t = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let x = s[(i, j)].re;
            let y = s[(i, j)].im;
            t[(i, j)] = x;
            t[(i, j + n)] = y;
            t[(i + n, j)] = y;
            t[(i + n, j + n)] = -x;
        }
    }
    let se = SymmetricEigen::new(t);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].partial_cmp(&se.eigenvalues[a]).unwrap());

    let mut sigmas = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    for &idx in order.iter().take(n) {
        let col = se.eigenvectors.column(idx);
        let mut z = DVector::from_fn(n, |k, _| C64::new(col[k], col[k + n]));
        sign_normalize(&mut z);
        sigmas.push(se.eigenvalues[idx].max(0.0));
        vectors.push(z);
    }
    (sigmas, vectors)
}

// Relative gap below which singular values are treated as one degenerate cluster.
const TAKAGI_CLUSTER_TOL: f64 = 1e-8;
// Residual bound for accepting the SVD-aligned factorization.
const TAKAGI_RESIDUAL_TOL: f64 = 1e-9;

/// Takagi factorization computed from the SVD `s = U S V^†` by aligning the
/// phases of paired singular vectors (`conj(v_i) = w_i u_i` with `|w_i| = 1`).
/// Degenerate clusters are re-factored through the real embedding of their
/// alignment block; if the final residual check fails, the whole matrix falls
/// back to [`takagi_real_embedding`].
pub(crate) fn takagi(s: &DMatrix<C64>) -> (Vec<f64>, Vec<DVector<C64>>) {
    let n = s.nrows();
    debug_assert_eq!(n, s.ncols(), "takagi requires a square matrix");
    let norm = frobenius(s);
    if norm == 0.0 {
        let sigmas = vec![0.0; n];
        let vectors = (0..n)
            .map(|i| {
                DVector::from_fn(n, |k, _| {
                    if k == i {
                        C64::new(1.0, 0.0)
                    } else {
                        C64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        return (sigmas, vectors);
    }

    let (u, sig, vt) = sorted_svd(s.clone());
    // W = U^† conj(V); block-diagonal over degenerate clusters when s is symmetric.
    let w = u.adjoint() * vt.transpose();

    let gap_tol = TAKAGI_CLUSTER_TOL * sig[0];
    let mut vectors: Vec<DVector<C64>> = Vec::with_capacity(n);
    let mut ok = true;

    let mut i = 0;
    'outer: while i < n {
        let mut j = i + 1;
        while j < n && sig[j - 1] - sig[j] <= gap_tol {
            j += 1;
        }
        let size = j - i;
        if size == 1 {
            let wii = w[(i, i)];
            if (wii.norm() - 1.0).abs() > 1e-6 {
                ok = false;
                break 'outer;
            }
            let half = C64::from_polar(1.0, wii.arg() / 2.0);
            vectors.push(u.column(i).into_owned() * half);
        } else {
            // Degenerate cluster: W block is symmetric unitary; a Takagi
            // factor P with P P^T = W_b re-symmetrizes the block.
            let wb = w.view((i, i), (size, size)).into_owned();
            let (bs, bz) = takagi_real_embedding(&wb);
            if bs.iter().any(|&x| (x - 1.0).abs() > 1e-6) {
                ok = false;
                break 'outer;
            }
            let p = DMatrix::from_columns(&bz);
            let ub = u.columns(i, size).into_owned() * p;
            for k in 0..size {
                vectors.push(ub.column(k).into_owned());
            }
        }
        i = j;
    }

    if ok {
        for v in vectors.iter_mut() {
            sign_normalize(v);
        }
        let mut recon = DMatrix::<C64>::zeros(n, n);
        for (k, z) in vectors.iter().enumerate() {
            let zt = z.transpose();
            recon += (z * zt) * C64::new(sig[k], 0.0);
        }
        if frobenius(&(recon - s)) <= TAKAGI_RESIDUAL_TOL * norm.max(1.0) {
            return (sig, vectors);
        }
    }
    takagi_real_embedding(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
        let g = DMatrix::from_fn(n, n, |_, _| {
            C64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        (&g + g.transpose()) * C64::new(0.5, 0.0)
    }

    fn reconstruction_error(s: &DMatrix<C64>, sig: &[f64], z: &[DVector<C64>]) -> f64 {
        let n = s.nrows();
        let mut recon = DMatrix::<C64>::zeros(n, n);
        for (k, v) in z.iter().enumerate() {
            recon += (v * v.transpose()) * C64::new(sig[k], 0.0);
        }
        frobenius(&(recon - s))
    }

    #[test]
    fn hermitian_eigen_reconstructs_and_sorts() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = DMatrix::from_fn(5, 5, |_, _| {
            C64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        });
        let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        let (vals, vecs) = hermitian_eigen(h.clone());
        for w in vals.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let mut recon = DMatrix::<C64>::zeros(5, 5);
        for (k, v) in vecs.iter().enumerate() {
            recon += (v * v.adjoint()) * C64::new(vals[k], 0.0);
        }
        assert!(frobenius(&(recon - h)) < 1e-12);
    }

    #[test]
    fn takagi_handles_generic_symmetric_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 3, 5, 8] {
            let s = random_symmetric(n, &mut rng);
            let (sig, z) = takagi(&s);
            assert_eq!(sig.len(), n);
            assert!(reconstruction_error(&s, &sig, &z) < 1e-10 * frobenius(&s).max(1.0));
            // orthonormality
            for a in 0..n {
                for b in 0..n {
                    let dot: C64 = z[a].dotc(&z[b]);
                    let expect = if a == b { 1.0 } else { 0.0 };
                    assert!((dot - C64::new(expect, 0.0)).norm() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn takagi_handles_degenerate_singular_values() {
        // diag(2e^{ia}, 2e^{ia}, e^{ib}) has a doubly degenerate singular value.
        let a = C64::from_polar(2.0, 0.7);
        let b = C64::from_polar(1.0, -1.3);
        let s = DMatrix::from_diagonal(&DVector::from_vec(vec![a, a, b]));
        let (sig, z) = takagi(&s);
        assert!((sig[0] - 2.0).abs() < 1e-12 && (sig[1] - 2.0).abs() < 1e-12);
        assert!(reconstruction_error(&s, &sig, &z) < 1e-10);

        // A non-diagonal degenerate case built from an orthonormal pair.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_symmetric(4, &mut rng);
        let (_, basis) = hermitian_eigen((&g + g.adjoint()) * C64::new(0.5, 0.0));
        let s2 = (&basis[0] * basis[0].transpose() + &basis[1] * basis[1].transpose())
            * C64::new(1.5, 0.0);
        let (sig2, z2) = takagi(&s2);
        assert!((sig2[0] - 1.5).abs() < 1e-10 && (sig2[1] - 1.5).abs() < 1e-10);
        assert!(reconstruction_error(&s2, &sig2, &z2) < 1e-9);
    }

    #[test]
    fn takagi_agrees_with_real_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let s = random_symmetric(4, &mut rng);
            let (sig_a, za) = takagi(&s);
            let (sig_b, zb) = takagi_real_embedding(&s);
            for (x, y) in sig_a.iter().zip(sig_b.iter()) {
                assert!((x - y).abs() < 1e-10);
            }
            assert!(reconstruction_error(&s, &sig_a, &za) < 1e-10);
            assert!(reconstruction_error(&s, &sig_b, &zb) < 1e-10);
        }
    }

    #[test]
    fn takagi_zero_matrix_is_empty_weighted() {
        let s = DMatrix::<C64>::zeros(3, 3);
        let (sig, z) = takagi(&s);
        assert!(sig.iter().all(|&x| x == 0.0));
        assert_eq!(z.len(), 3);
    }
}

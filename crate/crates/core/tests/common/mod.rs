#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tritangle::{DensityMatrix, PureState, SubCube, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(
        rng.random::<f64>() * 2.0 - 1.0,
        rng.random::<f64>() * 2.0 - 1.0,
    )
}

/// Normalized state with uniformly random amplitudes.
pub fn random_state(dims: (usize, usize, usize), rng: &mut ChaCha8Rng) -> PureState {
    let n = dims.0 * dims.1 * dims.2;
    let amps: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
    PureState::new(dims, amps).unwrap().normalized().unwrap()
}

pub fn random_product_state(dims: (usize, usize, usize), rng: &mut ChaCha8Rng) -> PureState {
    let vec = |n: usize, rng: &mut ChaCha8Rng| -> Vec<C64> {
        let v: Vec<C64> = (0..n).map(|_| random_c64(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    };
    tritangle::product_state(&vec(dims.0, rng), &vec(dims.1, rng), &vec(dims.2, rng)).unwrap()
}

/// Unit-Frobenius random cube.
pub fn random_cube(rng: &mut ChaCha8Rng) -> SubCube {
    let amps: [C64; 8] = std::array::from_fn(|_| random_c64(rng));
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    SubCube::new(amps.map(|z| z / norm))
}

/// Random SU(2) element.
pub fn random_su2(rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let a = random_c64(rng);
    let b = random_c64(rng);
    let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / norm, b / norm);
    DMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Haar-ish random unitary via QR of a Ginibre matrix.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| random_c64(rng));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let phases = DVector::from_fn(n, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        }
    });
    q * DMatrix::from_diagonal(&phases)
}

/// Linear combination of equally-dimensioned states.
pub fn combine_states(states: &[&PureState], coeffs: &[C64]) -> PureState {
    let dims = states[0].dims();
    let n = states[0].total_dim();
    let mut amps = vec![C64::new(0.0, 0.0); n];
    for (s, c) in states.iter().zip(coeffs.iter()) {
        for (out, a) in amps.iter_mut().zip(s.amplitudes().iter()) {
            *out += a * c;
        }
    }
    PureState::new(dims, amps).unwrap()
}

/// Random mixed state of the given rank in `dims`.
pub fn random_mixture(
    dims: (usize, usize, usize),
    rank: usize,
    rng: &mut ChaCha8Rng,
) -> DensityMatrix {
    let d = dims.0 * dims.1 * dims.2;
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 0.1).collect();
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    let mut m = DMatrix::<C64>::zeros(d, d);
    for &w in &weights {
        let v = random_state(dims, rng).to_vector();
        m += (&v * v.adjoint()) * C64::new(w, 0.0);
    }
    DensityMatrix::new(dims, m).unwrap()
}

/// The dense selection-matrix route for F: builds `s_a (x) s_b (x) s_c` per
/// cube and applies it to the amplitude vector. Kept independent of the
/// slicing route inside the library.
pub fn big_f_via_selection_matrices(s: &PureState) -> f64 {
    let (n1, n2, n3) = s.dims();
    let to_c = |m: DMatrix<f64>| m.map(|x| C64::new(x, 0.0));
    let sa: Vec<_> = tritangle::selection_matrices(n1).unwrap();
    let sb: Vec<_> = tritangle::selection_matrices(n2).unwrap();
    let sc: Vec<_> = tritangle::selection_matrices(n3).unwrap();
    let v = s.to_vector();
    let mut sum = 0.0f64;
    for a in &sa {
        for b in &sb {
            for c in &sc {
                let op = to_c(a.matrix())
                    .kronecker(&to_c(b.matrix()))
                    .kronecker(&to_c(c.matrix()));
                let cube_vec = &op * &v;
                let cube = SubCube::new(std::array::from_fn(|i| cube_vec[i]));
                sum += tritangle::cube_invariants(&cube).f;
            }
        }
    }
    sum.sqrt().sqrt()
}

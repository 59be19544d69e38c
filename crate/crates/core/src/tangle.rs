//! Pure-state criterion: 3-tangle invariants on 2x2x2 sub-cubes and the
//! fourth-root cube sum `F`.
//!
//! Every 2x2x2 block of a coefficient tensor, obtained by fixing one level
//! pair per party, is a non-normalized three-qubit state carrying a residual
//! entanglement `tau = |d1 - 2 d2 + 4 d3|`. `F` is the fourth root of the sum
//! of `f = tau^2` over all such blocks; it vanishes when no genuine
//! tripartite entanglement is present and is invariant under party
//! permutations.

use nalgebra::{DMatrix, Matrix2};

use crate::bounds::pair_bilinear;
use crate::dd::DdComplex;
use crate::error::{Error, Result};
use crate::state::PureState;
use crate::C64;

/// Eight amplitudes of one 2x2x2 block, indexed `(a<<2) | (b<<1) | c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubCube {
    amps: [C64; 8],
}

impl SubCube {
    pub fn new(amps: [C64; 8]) -> Self {
        SubCube { amps }
    }

    #[inline]
    pub fn amplitude(&self, a: usize, b: usize, c: usize) -> C64 {
        self.amps[(a << 2) | (b << 1) | c]
    }

    pub fn amplitudes(&self) -> &[C64; 8] {
        &self.amps
    }

    #[inline]
    pub(crate) fn at(&self, idx: usize) -> C64 {
        self.amps[idx]
    }

    pub fn scaled(&self, factor: C64) -> SubCube {
        let mut amps = self.amps;
        for z in amps.iter_mut() {
            *z *= factor;
        }
        SubCube { amps }
    }
}

/// Normalization convention for tau and f.
///
/// The plain form drops a constant factor, giving `tau(GHZ) = 1/4`; the CKW
/// form multiplies tau by 4 (f by 16) so that `tau(GHZ) = 1`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    #[default]
    Plain,
    Ckw,
}

/// The scalar invariants of one sub-cube: `tau = |d1 - 2 d2 + 4 d3|`, `f = tau^2`.
#[derive(Clone, Copy, Debug)]
pub struct CubeInvariants {
    pub d1: C64,
    pub d2: C64,
    pub d3: C64,
    pub tau: f64,
    pub f: f64,
}

// Monomial index lists for d1, d2, d3 over the (a<<2)|(b<<1)|c layout.
const D1_MONOMIALS: [[usize; 4]; 4] = [
    [0b000, 0b000, 0b111, 0b111],
    [0b001, 0b001, 0b110, 0b110],
    [0b010, 0b010, 0b101, 0b101],
    [0b100, 0b100, 0b011, 0b011],
];
const D2_MONOMIALS: [[usize; 4]; 6] = [
    [0b000, 0b111, 0b011, 0b100],
    [0b000, 0b111, 0b101, 0b010],
    [0b000, 0b111, 0b110, 0b001],
    [0b011, 0b100, 0b101, 0b010],
    [0b011, 0b100, 0b110, 0b001],
    [0b101, 0b010, 0b110, 0b001],
];
const D3_MONOMIALS: [[usize; 4]; 2] = [[0b000, 0b110, 0b101, 0b011], [0b111, 0b001, 0b010, 0b100]];

fn monomial(c: &SubCube, idx: &[usize; 4]) -> DdComplex {
    let mut m = DdComplex::from_c64(c.at(idx[0]));
    for &i in &idx[1..] {
        m = m.mul(DdComplex::from_c64(c.at(i)));
    }
    m
}

fn monomial_sum(c: &SubCube, list: &[[usize; 4]]) -> DdComplex {
    let mut acc = DdComplex::default();
    for idx in list {
        acc = acc.add(monomial(c, idx));
    }
    acc
}

/// Computes `d1, d2, d3` and the invariant combination for one sub-cube.
///
/// The twelve degree-4 monomials are carried in double-double precision: the
/// combination cancels exactly on product cubes and a later fourth root would
/// blow plain-f64 cancellation noise up to observable size.
pub fn cube_invariants_with(c: &SubCube, norm: Normalization) -> CubeInvariants {
    let scale = match norm {
        Normalization::Plain => 1.0,
        Normalization::Ckw => 4.0,
    };
    let d1 = monomial_sum(c, &D1_MONOMIALS).scale_pow2(scale);
    let d2 = monomial_sum(c, &D2_MONOMIALS).scale_pow2(scale);
    let d3 = monomial_sum(c, &D3_MONOMIALS).scale_pow2(scale);
    let combo = d1.sub(d2.scale_pow2(2.0)).add(d3.scale_pow2(4.0));
    let f = combo.norm_sqr().max(0.0);
    CubeInvariants {
        d1: d1.to_c64(),
        d2: d2.to_c64(),
        d3: d3.to_c64(),
        tau: f.sqrt(),
        f,
    }
}

/// [`cube_invariants_with`] in the plain normalization.
pub fn cube_invariants(c: &SubCube) -> CubeInvariants {
    cube_invariants_with(c, Normalization::Plain)
}

/// The standard-basis matrix `R_{ij} = sum_r g_{j,r} conj(g_{i,r})`.
///
/// Hermitian positive semidefinite with `det R = f`; serves as the
/// verification route for [`cube_invariants`].
pub fn r_matrix(c: &SubCube) -> Matrix2<C64> {
    let mut r = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..2 {
                acc += pair_bilinear(c, c, j, s) * pair_bilinear(c, c, i, s).conj();
            }
            r[(i, j)] = acc;
        }
    }
    r
}

/// One level pair of one party, realized as the 2 x n 0/1 matrix with rows
/// `e_i, e_j` (`i < j`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectionMatrix {
    dim: usize,
    pair: (usize, usize),
}

impl SelectionMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    /// The dense 2 x n realization.
    pub fn matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(2, self.dim);
        m[(0, self.pair.0)] = 1.0;
        m[(1, self.pair.1)] = 1.0;
        m
    }
}

/// Unordered level pairs of an `n`-level party, lexicographic.
pub fn level_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}

/// The `n(n-1)/2` selection matrices of an `n`-level party.
pub fn selection_matrices(n: usize) -> Result<Vec<SelectionMatrix>> {
    if n < 2 {
        return Err(Error::PartyDimension((n, n, n)));
    }
    Ok(level_pairs(n)
        .into_iter()
        .map(|pair| SelectionMatrix { dim: n, pair })
        .collect())
}

/// One sub-cube address: a level pair per party.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeIndex {
    pairs: [(usize, usize); 3],
}

impl CubeIndex {
    pub fn new(pairs: [(usize, usize); 3]) -> Result<Self> {
        for &(i, j) in &pairs {
            if i >= j {
                return Err(Error::LevelPair {
                    lo: i,
                    hi: j,
                    dim: usize::MAX,
                });
            }
        }
        Ok(CubeIndex { pairs })
    }

    pub fn pairs(&self) -> [(usize, usize); 3] {
        self.pairs
    }
}

impl std::fmt::Display for CubeIndex {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            fm,
            "({},{})({},{})({},{})",
            self.pairs[0].0,
            self.pairs[0].1,
            self.pairs[1].0,
            self.pairs[1].1,
            self.pairs[2].0,
            self.pairs[2].1
        )
    }
}

/// All cube addresses of a `(n1, n2, n3)` grid in lexicographic order.
pub fn cube_indices(dims: (usize, usize, usize)) -> Vec<CubeIndex> {
    let pa = level_pairs(dims.0);
    let pb = level_pairs(dims.1);
    let pc = level_pairs(dims.2);
    let mut out = Vec::with_capacity(pa.len() * pb.len() * pc.len());
    for &a in &pa {
        for &b in &pb {
            for &c in &pc {
                out.push(CubeIndex { pairs: [a, b, c] });
            }
        }
    }
    out
}

/// Slices the eight amplitudes addressed by `idx` out of `s`.
///
/// Identical to applying `s_alpha (x) s_beta (x) s_gamma` to the amplitude
/// vector; the dense selection-matrix route is kept as a test oracle.
pub fn extract_cube(s: &PureState, idx: &CubeIndex) -> Result<SubCube> {
    let dims = [s.dims().0, s.dims().1, s.dims().2];
    for (p, &(lo, hi)) in idx.pairs.iter().enumerate() {
        if lo >= hi || hi >= dims[p] {
            return Err(Error::LevelPair {
                lo,
                hi,
                dim: dims[p],
            });
        }
    }
    Ok(extract_cube_for_grid(s, idx))
}

// Slicing without range validation, for internal grid enumeration where the
// cube index is known to fit the state.
#[inline]
pub(crate) fn extract_cube_for_grid(s: &PureState, idx: &CubeIndex) -> SubCube {
    let [pa, pb, pc] = idx.pairs;
    let la = [pa.0, pa.1];
    let lb = [pb.0, pb.1];
    let lc = [pc.0, pc.1];
    let mut amps = [C64::new(0.0, 0.0); 8];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                amps[(a << 2) | (b << 1) | c] = s.amplitude(la[a], lb[b], lc[c]);
            }
        }
    }
    SubCube { amps }
}

/// Per-cube `f` values in lexicographic cube order.
pub fn cube_tangles_with(s: &PureState, norm: Normalization) -> Vec<(CubeIndex, f64)> {
    cube_indices(s.dims())
        .into_iter()
        .map(|idx| {
            let f = cube_invariants_with(&extract_cube_for_grid(s, &idx), norm).f;
            (idx, f)
        })
        .collect()
}

/// [`cube_tangles_with`] in the plain normalization.
pub fn cube_tangles(s: &PureState) -> Vec<(CubeIndex, f64)> {
    cube_tangles_with(s, Normalization::Plain)
}

/// The existence criterion: fourth root of the sum of per-cube `f` values.
///
/// The sum runs over the fixed lexicographic cube order so results are
/// bit-reproducible. Zero for product states and for any state without
/// genuine tripartite entanglement; for `(2,2,2)` inputs `F = sqrt(tau)`.
pub fn big_f_with(s: &PureState, norm: Normalization) -> f64 {
    let mut sum = 0.0f64;
    for idx in cube_indices(s.dims()) {
        sum += cube_invariants_with(&extract_cube_for_grid(s, &idx), norm).f;
    }
    sum.sqrt().sqrt()
}

/// [`big_f_with`] in the plain normalization.
pub fn big_f(s: &PureState) -> f64 {
    big_f_with(s, Normalization::Plain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{named_state, product_state, NamedState};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn ghz_cube() -> SubCube {
        let ghz = named_state(NamedState::Ghz2).unwrap();
        let idx = CubeIndex::new([(0, 1), (0, 1), (0, 1)]).unwrap();
        extract_cube(&ghz, &idx).unwrap()
    }

    #[test]
    fn ghz_cube_invariants() {
        let inv = cube_invariants(&ghz_cube());
        assert!((inv.d1 - c(0.25)).norm() < 1e-15);
        assert!(inv.d2.norm() < 1e-15);
        assert!(inv.d3.norm() < 1e-15);
        assert!((inv.tau - 0.25).abs() < 1e-15);
        assert!((inv.f - 0.0625).abs() < 1e-15);

        let ckw = cube_invariants_with(&ghz_cube(), Normalization::Ckw);
        assert!((ckw.tau - 1.0).abs() < 1e-14);
        assert!((ckw.f - 1.0).abs() < 1e-14);
    }

    #[test]
    fn w_cube_has_zero_tangle() {
        let w = named_state(NamedState::W).unwrap();
        let idx = CubeIndex::new([(0, 1), (0, 1), (0, 1)]).unwrap();
        let inv = cube_invariants(&extract_cube(&w, &idx).unwrap());
        assert_eq!(inv.d1, c(0.0));
        assert_eq!(inv.d2, c(0.0));
        assert_eq!(inv.d3, c(0.0));
        assert_eq!(inv.tau, 0.0);
    }

    #[test]
    fn scaling_a_cube_scales_f_by_the_eighth_power() {
        let cube = ghz_cube();
        let doubled = cube.scaled(c(2.0));
        let f0 = cube_invariants(&cube).f;
        let f1 = cube_invariants(&doubled).f;
        assert!((f1 / f0 - 256.0).abs() < 1e-12);
    }

    #[test]
    fn r_matrix_of_ghz_cube_is_quarter_identity() {
        let r = r_matrix(&ghz_cube());
        assert!((r[(0, 0)] - c(0.25)).norm() < 1e-15);
        assert!((r[(1, 1)] - c(0.25)).norm() < 1e-15);
        assert!(r[(0, 1)].norm() < 1e-15);
        assert!(r[(1, 0)].norm() < 1e-15);
        let det = r[(0, 0)] * r[(1, 1)] - r[(0, 1)] * r[(1, 0)];
        assert!((det.re - 0.0625).abs() < 1e-15);
    }

    #[test]
    fn r_matrix_of_zero_cube_is_zero() {
        let z = SubCube::new([C64::new(0.0, 0.0); 8]);
        assert_eq!(r_matrix(&z), Matrix2::zeros());
    }

    #[test]
    fn selection_matrix_counts_and_shapes() {
        let m2 = selection_matrices(2).unwrap();
        assert_eq!(m2.len(), 1);
        assert_eq!(m2[0].matrix(), DMatrix::identity(2, 2));

        let m3 = selection_matrices(3).unwrap();
        assert_eq!(m3.len(), 3);
        assert_eq!(
            m3.iter().map(|s| s.pair()).collect::<Vec<_>>(),
            vec![(0, 1), (0, 2), (1, 2)]
        );

        assert_eq!(selection_matrices(4).unwrap().len(), 6);
        assert!(selection_matrices(1).is_err());

        // exactly one 1 per row, rows distinct
        for s in &m3 {
            let m = s.matrix();
            for row in 0..2 {
                assert_eq!(m.row(row).iter().filter(|&&x| x == 1.0).count(), 1);
            }
            assert_ne!(m.row(0), m.row(1));
        }
    }

    #[test]
    fn extract_cube_examples() {
        let g3 = named_state(NamedState::Ghz(3)).unwrap();
        let diag = CubeIndex::new([(0, 1), (0, 1), (0, 1)]).unwrap();
        let cube = extract_cube(&g3, &diag).unwrap();
        let t = 1.0 / 3f64.sqrt();
        assert!((cube.amplitude(0, 0, 0) - c(t)).norm() < 1e-15);
        assert!((cube.amplitude(1, 1, 1) - c(t)).norm() < 1e-15);
        for i in 1..7 {
            assert_eq!(cube.at(i), c(0.0));
        }

        let mixed = CubeIndex::new([(0, 1), (0, 2), (1, 2)]).unwrap();
        let cube = extract_cube(&g3, &mixed).unwrap();
        assert!(cube.amplitudes().iter().all(|z| z.norm() == 0.0));

        let ghz = named_state(NamedState::Ghz2).unwrap();
        let ident = CubeIndex::new([(0, 1), (0, 1), (0, 1)]).unwrap();
        let cube = extract_cube(&ghz, &ident).unwrap();
        assert_eq!(cube.amplitudes().as_slice(), ghz.amplitudes());

        let bad = CubeIndex::new([(0, 2), (0, 1), (0, 1)]).unwrap();
        assert!(extract_cube(&ghz, &bad).is_err());
    }

    #[test]
    fn big_f_closed_forms() {
        let ghz = named_state(NamedState::Ghz2).unwrap();
        assert!((big_f(&ghz) - 0.5).abs() < 1e-12);

        let g3 = named_state(NamedState::Ghz(3)).unwrap();
        let expected = 3f64.powf(-0.75);
        assert!((big_f(&g3) - expected).abs() < 1e-12);

        let w = named_state(NamedState::W).unwrap();
        assert!(big_f(&w) < 1e-12);
        let wt = named_state(NamedState::WTilde).unwrap();
        assert!(big_f(&wt) < 1e-12);
    }

    #[test]
    fn big_f_vanishes_on_product_states_to_high_accuracy() {
        // cancellation must survive the fourth root, hence the dd arithmetic
        let v = [c(0.6), c(0.48), c(0.64)];
        let w = [
            C64::new(0.28, 0.4),
            C64::new(0.5, -0.3),
            C64::new(0.21, 0.62),
        ];
        let u = [c(1.0 / 2f64.sqrt()), C64::new(0.0, 1.0 / 2f64.sqrt())];
        let s = product_state(&v, &w, &u).unwrap();
        assert!(big_f(&s) < 1e-13, "F = {}", big_f(&s));
    }

    #[test]
    fn ckw_big_f_doubles_plain_value_for_qubits() {
        let ghz = named_state(NamedState::Ghz2).unwrap();
        assert!((big_f_with(&ghz, Normalization::Ckw) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cube_enumeration_counts() {
        assert_eq!(cube_indices((2, 2, 2)).len(), 1);
        assert_eq!(cube_indices((2, 2, 3)).len(), 3);
        assert_eq!(cube_indices((3, 3, 3)).len(), 27);
        assert_eq!(cube_indices((2, 3, 4)).len(), 18);
    }
}

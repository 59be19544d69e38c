//! Mixed-state machinery: the eigenvector tensor built from sub-cube
//! bilinears, its symmetric/conjugate decomposition chain, and three lower
//! bounds on the mixed-state criterion.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::kron::{self, BlockDims, STRUCTURE_TOL};
use crate::linalg;
use crate::state::SpectralDecomposition;
use crate::tangle::{cube_indices, extract_cube_for_grid, SubCube};
use crate::C64;

/// Default spectral-rank limit for the exact tensor path.
///
/// The tensor is an `r^4 x r^4` matrix; beyond `r = 6` the decomposition
/// chain stops being desk-scale and the quasi-pure path should be used.
pub const DEFAULT_RANK_LIMIT: usize = 6;

/// The bilinear form `g_{t,i}(ca, cb) = ca_{00t} cb_{11i} + ca_{11t} cb_{00i}
/// - ca_{01t} cb_{10i} - ca_{10t} cb_{01i}`.
///
/// The diagonal case `ca = cb` reproduces the standard-basis R matrix, which
/// pins the sign convention; `g` is symmetric under swapping both the cubes
/// and the two selector bits.
pub fn pair_bilinear(ca: &SubCube, cb: &SubCube, t: usize, i: usize) -> C64 {
    debug_assert!(t < 2 && i < 2, "selector bits must be 0 or 1");
    ca.at(t) * cb.at(0b110 | i) + ca.at(0b110 | t) * cb.at(i)
        - ca.at(0b010 | t) * cb.at(0b100 | i)
        - ca.at(0b100 | t) * cb.at(0b010 | i)
}

/// The rank-r eigenvector tensor, stored as an `r^4 x r^4` matrix with row
/// multi-index `(l, m, j, k)` and column multi-index `(l', m', j', k')`,
/// each index mixed-radix with the last slot fastest.
#[derive(Clone, Debug)]
pub struct ATensor {
    rank: usize,
    matrix: DMatrix<C64>,
}

impl ATensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Entry accessor by the eight indices `(l, m, j, k, l', m', j', k')`.
    pub fn entry(&self, idx: [usize; 8]) -> C64 {
        let r = self.rank;
        let row = ((idx[0] * r + idx[1]) * r + idx[2]) * r + idx[3];
        let col = ((idx[4] * r + idx[5]) * r + idx[6]) * r + idx[7];
        self.matrix[(row, col)]
    }
}

/// Builds the eigenvector tensor with the default rank limit.
pub fn a_tensor(sd: &SpectralDecomposition) -> Result<ATensor> {
    a_tensor_with_limit(sd, DEFAULT_RANK_LIMIT)
}

/// Builds the eigenvector tensor of a spectral decomposition.
///
/// Per cube, the bracket factorizes over the two doubled index pairs as the
/// polarized determinant
/// `(P00 (x) P11 + P11 (x) P00 - P01 (x) P10 - P10 (x) P01) / 2`
/// with `P_{ t t' } = sum_i G_{t,i} (x) conj(G_{t',i})` and
/// `G_{t,i}[a, b] = g_{t,i}(cube_a, cube_b)`. Keeping all four selector
/// patterns with these signs is what makes the doubled-pair exchange
/// symmetry exact; on the diagonal the bracket still collapses to
/// `det R = f`. The eigenvalue square roots enter as a diagonal congruence
/// at the end. Cubes accumulate in the fixed lexicographic order.
pub fn a_tensor_with_limit(sd: &SpectralDecomposition, limit: usize) -> Result<ATensor> {
    let r = sd.rank();
    if r > limit {
        return Err(Error::RankLimit { rank: r, limit });
    }
    let r2 = r * r;
    let r4 = r2 * r2;
    let dims = sd.dims();
    let mut acc = DMatrix::<C64>::zeros(r4, r4);

    for idx in cube_indices(dims) {
        let cubes: Vec<SubCube> = sd
            .eigenvectors
            .iter()
            .map(|psi| extract_cube_for_grid(psi, &idx))
            .collect();
        let g = |t: usize, i: usize| {
            DMatrix::from_fn(r, r, |a, b| pair_bilinear(&cubes[a], &cubes[b], t, i))
        };
        let p = |t1: usize, t2: usize| {
            let mut sum = DMatrix::<C64>::zeros(r2, r2);
            for i in 0..2 {
                let left = g(t1, i);
                let right = g(t2, i).map(|z| z.conj());
                sum += left.kronecker(&right);
            }
            sum
        };
        let (p00, p11, p01, p10) = (p(0, 0), p(1, 1), p(0, 1), p(1, 0));
        let bracket =
            p00.kronecker(&p11) + p11.kronecker(&p00) - p01.kronecker(&p10) - p10.kronecker(&p01);
        acc += bracket * C64::new(0.5, 0.0);
    }

    let roots: Vec<f64> = sd.eigenvalues.iter().map(|u| u.sqrt()).collect();
    let mut w = vec![0.0f64; r4];
    for l in 0..r {
        for m in 0..r {
            for j in 0..r {
                for k in 0..r {
                    w[((l * r + m) * r + j) * r + k] = roots[l] * roots[m] * roots[j] * roots[k];
                }
            }
        }
    }
    for col in 0..r4 {
        for row in 0..r4 {
            acc[(row, col)] *= C64::new(w[row] * w[col], 0.0);
        }
    }
    Ok(ATensor {
        rank: r,
        matrix: acc,
    })
}

/// One conjugate factor `(C_j)_m` of a chain block.
#[derive(Clone, Debug)]
pub struct ConjugateFactor {
    pub matrix: DMatrix<C64>,
    pub weight: f64,
    pub negative: bool,
}

/// One symmetric block `B_j` together with its conjugate factors.
#[derive(Clone, Debug)]
pub struct SymmetricBlock {
    pub matrix: DMatrix<C64>,
    pub weight: f64,
    /// True when the block enters the tensor reconstruction as `-B (x) B`.
    pub negative: bool,
    pub factors: Vec<ConjugateFactor>,
}

/// The two-stage decomposition of an [`ATensor`]: symmetric blocks over the
/// doubled-pair bipartition, conjugate factors over the single-index one.
#[derive(Clone, Debug)]
pub struct CChain {
    rank: usize,
    pub blocks: Vec<SymmetricBlock>,
}

impl CChain {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn factor_count(&self) -> usize {
        self.blocks.iter().map(|b| b.factors.len()).sum()
    }

    /// Number of factors entering with a minus sign; nonzero counts deserve a
    /// caller-side warning since the bound derivation assumes positivity.
    pub fn negative_factor_count(&self) -> usize {
        self.blocks
            .iter()
            .flat_map(|b| b.factors.iter())
            .filter(|f| f.negative)
            .count()
    }

    /// Number of blocks entering with a minus sign (see [`SymmetricBlock`]).
    pub fn negative_block_count(&self) -> usize {
        self.blocks.iter().filter(|b| b.negative).count()
    }

    /// Largest relative deviation of any factor from complex symmetry.
    pub fn max_factor_asymmetry(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.factors.iter())
            .map(|f| relative_asymmetry(&f.matrix))
            .fold(0.0, f64::max)
    }
}

fn relative_asymmetry(m: &DMatrix<C64>) -> f64 {
    let norm = linalg::frobenius(m);
    if norm == 0.0 {
        return 0.0;
    }
    linalg::frobenius(&(m - m.transpose())) / norm
}

/// Decomposes the tensor into its B/C chain.
///
/// The raw Takagi blocks are re-mixed within degenerate weight clusters so
/// that each block's rearrangement over the single-index bipartition is
/// Hermitian up to an overall sign: conjugation composed with the within-pair
/// index swap is an antiunitary involution commuting with the tensor, and its
/// `-1` directions only admit the conjugate split after an `-i` rotation,
/// which negates their contribution. Signs are recorded, never dropped.
pub fn c_chain(a: &ATensor) -> Result<CChain> {
    let r = a.rank;
    let r2 = r * r;
    let outer = BlockDims::new((r2, r2), (r2, r2))?;
    let inner = BlockDims::new((r, r), (r, r))?;
    let raw = kron::symmetric_kp_decompose(&a.matrix, &outer)?;
    let mut blocks = Vec::new();
    for (matrix, weight, negative) in adapt_blocks_to_swap_conjugation(raw, r) {
        let factors = kron::conjugate_kp_decompose(&matrix, &inner)?
            .into_iter()
            .map(|t| ConjugateFactor {
                matrix: t.factor,
                weight: t.weight,
                negative: t.negative,
            })
            .collect();
        blocks.push(SymmetricBlock {
            matrix,
            weight,
            negative,
            factors,
        });
    }
    Ok(CChain { rank: r, blocks })
}

// The within-pair swap on the vec index of an r^2 x r^2 block factor:
// (l,m),(l',m') -> (m,l),(m',l').
fn swap_within_pairs(v: usize, r: usize) -> usize {
    let r2 = r * r;
    let (h1c, h1r) = (v / r2, v % r2);
    let (l, m) = (h1r / r, h1r % r);
    let (lp, mp) = (h1c / r, h1c % r);
    (mp * r + lp) * r2 + (m * r + l)
}

fn apply_swap_conjugation(z: &nalgebra::DVector<C64>, r: usize) -> nalgebra::DVector<C64> {
    nalgebra::DVector::from_fn(z.len(), |v, _| z[swap_within_pairs(v, r)].conj())
}

// Re-mixes Takagi vectors within each degenerate weight cluster into
// eigenvectors of the swap-conjugation involution J. Real orthogonal mixing
// preserves the Takagi property; J = -1 vectors are rotated by -i (making
// their rearrangement Hermitian) and flagged as negated.
fn adapt_blocks_to_swap_conjugation(
    terms: Vec<kron::SymmetricTerm>,
    r: usize,
) -> Vec<(DMatrix<C64>, f64, bool)> {
    let r2 = r * r;
    let mut out = Vec::new();
    if terms.is_empty() {
        return out;
    }
    let top = terms[0].weight;
    let mut i = 0;
    while i < terms.len() {
        let mut j = i + 1;
        while j < terms.len() && terms[j - 1].weight - terms[j].weight <= 1e-8 * top {
            j += 1;
        }
        let k = j - i;
        let zs: Vec<nalgebra::DVector<C64>> = (i..j)
            .map(|t| kron::vectorize(&terms[t].factor) / C64::new(terms[t].weight.sqrt(), 0.0))
            .collect();
        let jz: Vec<nalgebra::DVector<C64>> =
            zs.iter().map(|z| apply_swap_conjugation(z, r)).collect();
        // J restricted to the cluster's real span, in the z basis
        let m = nalgebra::DMatrix::<f64>::from_fn(k, k, |a, b| zs[a].dotc(&jz[b]).re);
        let se = nalgebra::SymmetricEigen::new(m);
        for c in 0..k {
            let lambda = se.eigenvalues[c];
            if lambda.abs() < 0.9 {
                // J does not act within this cluster as expected; keep the
                // raw vector and let downstream checks report honestly
                out.push((terms[i + c].factor.clone(), terms[i + c].weight, false));
                continue;
            }
            let mut z = nalgebra::DVector::<C64>::zeros(r2 * r2);
            for (a, basis) in zs.iter().enumerate() {
                z += basis * C64::new(se.eigenvectors[(a, c)], 0.0);
            }
            let negative = lambda < 0.0;
            if negative {
                z *= C64::new(0.0, -1.0);
            }
            let weight = terms[i + c].weight;
            let scaled = z * C64::new(weight.sqrt(), 0.0);
            out.push((kron::unvectorize(&scaled, r2, r2), weight, negative));
        }
        i = j;
    }
    out
}

/// `max(sigma_1 - sum_{i>1} sigma_i, 0)` over the singular values of `m`.
pub fn lambda_gap(m: &DMatrix<C64>) -> f64 {
    let sv = linalg::singular_values(m);
    match sv.split_first() {
        None => 0.0,
        Some((first, rest)) => (first - rest.iter().sum::<f64>()).max(0.0),
    }
}

/// Which lower bound to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMethod {
    /// Maximize the gap over both the per-block weights `z` (quartic
    /// constraint) and the per-factor weights `Z` (quadratic constraint).
    Zz,
    /// Uniform block weights: `(1/r')^{1/4}` times the gap maximized over
    /// the per-factor weights alone.
    Uniform,
    /// The gap of the single factor with the largest combined weight
    /// `sqrt(sigma_j) * sqrt(sigma'_jm)`.
    Dominant,
}

/// Optimizer parameters; any feasible point yields a valid bound, so the
/// restart/refine budget only affects tightness, never soundness.
#[derive(Clone, Copy, Debug)]
pub struct BoundParams {
    pub method: BoundMethod,
    pub restarts: u32,
    pub refine_steps: u32,
    pub seed: u64,
}

impl BoundParams {
    pub fn new(method: BoundMethod) -> Self {
        BoundParams {
            method,
            restarts: 512,
            refine_steps: 64,
            seed: 0,
        }
    }
}

struct FlatFactor {
    block: usize,
    matrix: DMatrix<C64>,
    combined_weight: f64,
}

fn flatten(chain: &CChain) -> Vec<FlatFactor> {
    let mut out = Vec::with_capacity(chain.factor_count());
    for (j, block) in chain.blocks.iter().enumerate() {
        for f in &block.factors {
            // the gap formula presumes complex-symmetric matrices; the
            // symmetric part preserves the diagonal values it bounds
            let matrix = if relative_asymmetry(&f.matrix) > STRUCTURE_TOL {
                (&f.matrix + f.matrix.transpose()) * C64::new(0.5, 0.0)
            } else {
                f.matrix.clone()
            };
            out.push(FlatFactor {
                block: j,
                matrix,
                combined_weight: block.weight.sqrt() * f.weight.sqrt(),
            });
        }
    }
    out
}

/// Evaluates one of the three lower bounds on the mixed-state criterion.
///
/// Deterministic for fixed `(method, restarts, refine_steps, seed)`.
pub fn lower_bound(chain: &CChain, params: &BoundParams) -> Result<f64> {
    if params.restarts < 1 {
        return Err(Error::OutOfRange {
            name: "restarts",
            value: params.restarts as f64,
            lo: 1.0,
            hi: f64::INFINITY,
        });
    }
    if chain.is_empty() || chain.factor_count() == 0 {
        return Ok(0.0);
    }
    let flat = flatten(chain);
    match params.method {
        BoundMethod::Dominant => {
            let best = flat
                .iter()
                .max_by(|a, b| a.combined_weight.partial_cmp(&b.combined_weight).unwrap())
                .unwrap();
            Ok(lambda_gap(&best.matrix))
        }
        BoundMethod::Zz => Ok(optimize(&flat, chain.blocks.len(), params, true)),
        BoundMethod::Uniform => {
            let scale = (1.0 / chain.blocks.len() as f64).powf(0.25);
            Ok(scale * optimize(&flat, chain.blocks.len(), params, false))
        }
    }
}

struct Point {
    block_mags: Vec<f64>,
    factor_mags: Vec<f64>,
    phases: Vec<f64>, // block phases first (when used), then factor phases
}

fn evaluate(flat: &[FlatFactor], nb: usize, with_z: bool, pt: &Point) -> f64 {
    let d = flat[0].matrix.nrows();
    let mut m = DMatrix::<C64>::zeros(d, d);
    for (idx, f) in flat.iter().enumerate() {
        let z = if with_z {
            C64::from_polar(pt.block_mags[f.block], pt.phases[f.block])
        } else {
            C64::new(1.0, 0.0)
        };
        let offset = if with_z { nb } else { 0 };
        let zz = C64::from_polar(pt.factor_mags[idx], pt.phases[offset + idx]);
        m += &f.matrix * (z * zz);
    }
    lambda_gap(&m)
}

/// Random restarts on the constraint surfaces plus coordinate-wise
/// golden-section refinement of the best candidate's phases.
fn optimize(flat: &[FlatFactor], nb: usize, params: &BoundParams, with_z: bool) -> f64 {
    let nf = flat.len();
    let nphases = if with_z { nb + nf } else { nf };

    let dominant = flat
        .iter()
        .enumerate()
        .max_by(|a, b| {
            a.1.combined_weight
                .partial_cmp(&b.1.combined_weight)
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();

    let mut best_pt: Option<Point> = None;
    let mut best = f64::NEG_INFINITY;

    for restart in 0..params.restarts {
        let pt = match restart {
            // all weight on the dominant factor: reproduces the dominant bound
            0 => {
                let mut block_mags = vec![0.0; nb];
                block_mags[flat[dominant].block] = 1.0;
                let mut factor_mags = vec![0.0; nf];
                factor_mags[dominant] = 1.0;
                Point {
                    block_mags,
                    factor_mags,
                    phases: vec![0.0; nphases],
                }
            }
            // uniform magnitudes on both constraint surfaces
            1 => Point {
                block_mags: vec![(nb as f64).powf(-0.25); nb],
                factor_mags: vec![(nf as f64).sqrt().recip(); nf],
                phases: vec![0.0; nphases],
            },
            _ => {
                let stream = params
                    .seed
                    .wrapping_add((restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let mut rng = ChaCha8Rng::seed_from_u64(stream);
                let mut block_mags: Vec<f64> = (0..nb)
                    .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
                    .collect();
                let q: f64 = block_mags.iter().map(|x| x.powi(4)).sum();
                let qn = q.sqrt().sqrt().max(f64::MIN_POSITIVE);
                for x in block_mags.iter_mut() {
                    *x /= qn;
                }
                let mut factor_mags: Vec<f64> = (0..nf)
                    .map(|_| rng.sample::<f64, _>(StandardNormal).abs())
                    .collect();
                let n: f64 = factor_mags.iter().map(|y| y * y).sum::<f64>().sqrt();
                for y in factor_mags.iter_mut() {
                    *y /= n.max(f64::MIN_POSITIVE);
                }
                let phases: Vec<f64> = (0..nphases)
                    .map(|_| rng.random::<f64>() * std::f64::consts::TAU)
                    .collect();
                Point {
                    block_mags,
                    factor_mags,
                    phases,
                }
            }
        };
        let value = evaluate(flat, nb, with_z, &pt);
        if value > best {
            best = value;
            best_pt = Some(pt);
        }
    }

    let mut pt = best_pt.unwrap();
    if params.refine_steps > 0 {
        for coord in 0..nphases {
            let center = pt.phases[coord];
            let (lo, hi) = (
                center - std::f64::consts::FRAC_PI_2,
                center + std::f64::consts::FRAC_PI_2,
            );
            let (phase, value) = golden_max(lo, hi, params.refine_steps, |theta| {
                let mut probe = Point {
                    block_mags: pt.block_mags.clone(),
                    factor_mags: pt.factor_mags.clone(),
                    phases: pt.phases.clone(),
                };
                probe.phases[coord] = theta;
                evaluate(flat, nb, with_z, &probe)
            });
            if value > best {
                best = value;
                pt.phases[coord] = phase;
            }
        }
    }
    best
}

/// Golden-section search for the maximum of `f` on `[lo, hi]`.
fn golden_max(lo: f64, hi: f64, steps: u32, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    for _ in 0..steps {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        if fc > best.1 {
            best = (c, fc);
        }
        if fd > best.1 {
            best = (d, fd);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{
        ghz_w_mixture, named_state, spectral_decompose_default, DensityMatrix, NamedState,
    };
    use crate::tangle::{big_f, extract_cube, CubeIndex};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rank_one(kind: NamedState) -> SpectralDecomposition {
        let s = named_state(kind).unwrap();
        let rho = DensityMatrix::from_pure_state(&s).unwrap();
        spectral_decompose_default(&rho).unwrap()
    }

    #[test]
    fn pair_bilinear_examples() {
        let ghz = named_state(NamedState::Ghz2).unwrap();
        let idx = CubeIndex::new([(0, 1), (0, 1), (0, 1)]).unwrap();
        let cube = extract_cube(&ghz, &idx).unwrap();
        assert!((pair_bilinear(&cube, &cube, 0, 1) - c(0.5)).norm() < 1e-15);
        assert!((pair_bilinear(&cube, &cube, 1, 0) - c(0.5)).norm() < 1e-15);
        assert!(pair_bilinear(&cube, &cube, 0, 0).norm() < 1e-15);

        let zero = SubCube::new([c(0.0); 8]);
        assert_eq!(pair_bilinear(&cube, &zero, 0, 1), c(0.0));
    }

    #[test]
    fn pair_bilinear_swap_symmetry() {
        let a = SubCube::new([
            C64::new(0.3, 0.1),
            C64::new(-0.2, 0.5),
            C64::new(0.7, 0.0),
            C64::new(0.1, -0.4),
            C64::new(0.0, 0.9),
            C64::new(-0.6, 0.2),
            C64::new(0.4, 0.4),
            C64::new(0.2, -0.1),
        ]);
        let b = SubCube::new([
            C64::new(-0.1, 0.2),
            C64::new(0.8, -0.3),
            C64::new(0.05, 0.6),
            C64::new(-0.7, 0.1),
            C64::new(0.3, 0.3),
            C64::new(0.2, -0.9),
            C64::new(-0.4, 0.0),
            C64::new(0.6, 0.5),
        ]);
        for t in 0..2 {
            for i in 0..2 {
                let lhs = pair_bilinear(&a, &b, t, i);
                let rhs = pair_bilinear(&b, &a, i, t);
                assert!((lhs - rhs).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn rank_one_tensor_is_fourth_power_of_f() {
        let sd = rank_one(NamedState::Ghz2);
        let a = a_tensor(&sd).unwrap();
        assert_eq!(a.rank(), 1);
        let scalar = a.matrix()[(0, 0)];
        assert!((scalar - c(0.0625)).norm() < 1e-12, "got {scalar}");

        let sd = rank_one(NamedState::W);
        let a = a_tensor(&sd).unwrap();
        assert!(a.matrix()[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn rank_limit_is_enforced() {
        let rho = crate::state::white_noise_mixture(&named_state(NamedState::Ghz2).unwrap(), 0.5)
            .unwrap();
        let sd = spectral_decompose_default(&rho).unwrap();
        assert_eq!(sd.rank(), 8);
        assert!(matches!(
            a_tensor(&sd),
            Err(Error::RankLimit { rank: 8, limit: 6 })
        ));
    }

    #[test]
    fn ghz_chain_is_scalar_half() {
        let sd = rank_one(NamedState::Ghz2);
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        assert_eq!(chain.blocks.len(), 1);
        assert!((chain.blocks[0].matrix[(0, 0)] - c(0.25)).norm() < 1e-12);
        assert!(!chain.blocks[0].negative);
        assert_eq!(chain.blocks[0].factors.len(), 1);
        let f0 = &chain.blocks[0].factors[0];
        assert!((f0.matrix[(0, 0)] - c(0.5)).norm() < 1e-12);
        assert!(!f0.negative);
        assert_eq!(chain.negative_factor_count(), 0);
    }

    #[test]
    fn w_chain_is_empty() {
        let sd = rank_one(NamedState::W);
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        assert!(chain.is_empty());
        for method in [BoundMethod::Zz, BoundMethod::Uniform, BoundMethod::Dominant] {
            let v = lower_bound(&chain, &BoundParams::new(method)).unwrap();
            assert_eq!(v, 0.0);
        }
    }

    #[test]
    fn chain_reconstructions_meet_contract() {
        let rho = ghz_w_mixture(0.8).unwrap();
        let sd = spectral_decompose_default(&rho).unwrap();
        let a = a_tensor(&sd).unwrap();
        let chain = c_chain(&a).unwrap();
        let r2 = sd.rank() * sd.rank();

        let mut recon = DMatrix::<C64>::zeros(r2 * r2, r2 * r2);
        for b in &chain.blocks {
            let sign = if b.negative { -1.0 } else { 1.0 };
            recon += b.matrix.kronecker(&b.matrix) * c(sign);
        }
        let norm = linalg::frobenius(a.matrix());
        assert!(linalg::frobenius(&(recon - a.matrix())) < 1e-7 * norm.max(1.0));

        for b in &chain.blocks {
            let mut sum = DMatrix::<C64>::zeros(r2, r2);
            for f in &b.factors {
                let conj = f.matrix.map(|z| z.conj());
                let sign = if f.negative { -1.0 } else { 1.0 };
                sum += f.matrix.kronecker(&conj) * c(sign);
            }
            let bn = linalg::frobenius(&b.matrix);
            assert!(linalg::frobenius(&(sum - &b.matrix)) < 1e-7 * bn.max(1.0));
        }
    }

    #[test]
    fn lambda_gap_examples() {
        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(3.0), c(1.0), c(1.0)]));
        assert!((lambda_gap(&m) - 1.0).abs() < 1e-14);

        let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(1.0)]));
        assert_eq!(lambda_gap(&m), 0.0);

        let m = DMatrix::from_row_slice(1, 1, &[c(0.5)]);
        assert!((lambda_gap(&m) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dominant_bound_on_pure_ghz_is_exact() {
        let sd = rank_one(NamedState::Ghz2);
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        let v = lower_bound(&chain, &BoundParams::new(BoundMethod::Dominant)).unwrap();
        assert!((v - 0.5).abs() < 1e-10);
        let ghz = named_state(NamedState::Ghz2).unwrap();
        assert!((v - big_f(&ghz)).abs() < 1e-10);
    }

    #[test]
    fn bounds_are_deterministic_given_seed() {
        let rho = ghz_w_mixture(0.9).unwrap();
        let sd = spectral_decompose_default(&rho).unwrap();
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        let mut params = BoundParams::new(BoundMethod::Zz);
        params.restarts = 32;
        params.refine_steps = 16;
        params.seed = 42;
        let v1 = lower_bound(&chain, &params).unwrap();
        let v2 = lower_bound(&chain, &params).unwrap();
        assert_eq!(v1.to_bits(), v2.to_bits());
    }

    #[test]
    fn zz_bound_never_falls_below_dominant() {
        let rho = ghz_w_mixture(0.85).unwrap();
        let sd = spectral_decompose_default(&rho).unwrap();
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        let dominant = lower_bound(&chain, &BoundParams::new(BoundMethod::Dominant)).unwrap();
        let mut params = BoundParams::new(BoundMethod::Zz);
        params.restarts = 64;
        params.refine_steps = 16;
        let zz = lower_bound(&chain, &params).unwrap();
        assert!(zz >= dominant - 1e-12, "zz {zz} < dominant {dominant}");
    }

    #[test]
    fn invalid_restarts_rejected() {
        let sd = rank_one(NamedState::Ghz2);
        let chain = c_chain(&a_tensor(&sd).unwrap()).unwrap();
        let mut params = BoundParams::new(BoundMethod::Zz);
        params.restarts = 0;
        assert!(lower_bound(&chain, &params).is_err());
    }
}

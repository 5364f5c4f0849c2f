//! Universal₂ hashing over GF(2) and the privacy-amplification bound.
//!
//! The family is the set of all `out_len × in_len` binary matrices. For
//! distinct `a, b` a uniform member collides with probability exactly
//! `2^-out_len`, since `F(a) = F(b)` iff `F(a ⊕ b) = 0`.

use std::fmt;

use rand::Rng;
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HashFn {
    matrix: BitMatrix,
}

impl HashFn {
    pub fn from_matrix(matrix: BitMatrix) -> Self {
        HashFn { matrix }
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    pub fn in_len(&self) -> usize {
        self.matrix.cols()
    }

    pub fn out_len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, x: &BitVec) -> Result<BitVec> {
        self.matrix.mat_vec_mul(x)
    }
}

impl fmt::Debug for HashFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HashFn({}x{})", self.out_len(), self.in_len())
    }
}

/// A uniformly random member of the linear family.
pub fn sample_hash<R: Rng + ?Sized>(in_len: usize, out_len: usize, rng: &mut R) -> Result<HashFn> {
    if out_len > in_len {
        return Err(Error::InvalidParams(format!(
            "hash output {out_len} longer than input {in_len}"
        )));
    }
    Ok(HashFn::from_matrix(BitMatrix::random(out_len, in_len, rng)))
}

pub fn apply_hash(f: &HashFn, x: &BitVec) -> Result<BitVec> {
    f.apply(x)
}

fn matrix_from_index(index: u64, rows: usize, cols: usize) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if index >> (r * cols + c) & 1 == 1 {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// Every `out_len × in_len` matrix. Only for `in_len·out_len ≤ 24`.
pub fn all_linear_maps(in_len: usize, out_len: usize) -> Result<Vec<HashFn>> {
    let bits = in_len * out_len;
    if bits > 24 {
        return Err(Error::BudgetExceeded {
            estimate: 1u128 << bits.min(127),
            budget: 1 << 24,
        });
    }
    Ok((0..1u64 << bits)
        .map(|i| HashFn::from_matrix(matrix_from_index(i, out_len, in_len)))
        .collect())
}

/// The systematic sub-family `{[I | A]}` with `2^{out(in-out)}` members.
///
/// It is universal₂ as well: `[I | A](a ⊕ b) = 0` forces the first `out`
/// coordinates of `a ⊕ b` to equal `A` times the rest, which for a uniform `A`
/// happens with probability `2^-out` when the rest is nonzero, and never
/// when it is zero (then the first coordinates would have to be zero too).
pub fn systematic_maps(in_len: usize, out_len: usize) -> Result<Vec<HashFn>> {
    if out_len > in_len {
        return Err(Error::InvalidParams(format!(
            "hash output {out_len} longer than input {in_len}"
        )));
    }
    let free = in_len - out_len;
    let bits = out_len * free;
    if bits > 24 {
        return Err(Error::BudgetExceeded {
            estimate: 1u128 << bits.min(127),
            budget: 1 << 24,
        });
    }
    Ok((0..1u64 << bits)
        .map(|i| {
            let a = matrix_from_index(i, out_len, free);
            let mut m = BitMatrix::zeros(out_len, in_len);
            for r in 0..out_len {
                m.set(r, r, true);
                for c in 0..free {
                    m.set(r, out_len + c, a.get(r, c));
                }
            }
            HashFn::from_matrix(m)
        })
        .collect())
}

/// A distribution on outcomes `0..len`; for bit strings, outcome `i` is the
/// string [`BitVec::from_u64`]`(i, k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiniteDistribution {
    mass: Vec<f64>,
}

impl FiniteDistribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::OutOfRange("negative or NaN probability".into()));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::OutOfRange(format!("masses sum to {total}")));
        }
        Ok(FiniteDistribution { mass })
    }

    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::OutOfRange("weights sum to zero".into()));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(len: usize) -> Self {
        FiniteDistribution {
            mass: vec![1.0 / len as f64; len],
        }
    }

    pub fn point(len: usize, at: usize) -> Self {
        let mut mass = vec![0.0; len];
        mass[at] = 1.0;
        FiniteDistribution { mass }
    }

    /// Uniform on the listed outcomes of a space of size `len`.
    pub fn uniform_on(len: usize, support: &[usize]) -> Result<Self> {
        let mut w = vec![0.0; len];
        for &s in support {
            w[s] = 1.0;
        }
        Self::from_weights(&w)
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }
}

pub fn shannon_entropy(mass: &[f64]) -> f64 {
    mass.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `P_c(A) = Σ p²`.
pub fn collision_probability(d: &FiniteDistribution) -> f64 {
    d.mass.iter().map(|p| p * p).sum()
}

/// Rényi entropy of order two, `-log2 P_c(A)`.
pub fn renyi2(d: &FiniteDistribution) -> f64 {
    -collision_probability(d).log2()
}

/// Lower bound on `H(F(A) | F, D = d)` for an `l`-bit universal₂ output when
/// `R(A | D = d) ≥ c`: `l - log2(1 + 2^{l-c})`.
pub fn pa_bound(l: usize, c: f64) -> f64 {
    let l = l as f64;
    l - (l - c).exp2().ln_1p() / std::f64::consts::LN_2
}

/// The weaker form `l - 2^{l-c} / ln 2`.
pub fn pa_bound_weak(l: usize, c: f64) -> f64 {
    l as f64 - (l as f64 - c).exp2() / std::f64::consts::LN_2
}

/// Leakage ceiling `min(l, log2(1 + 2^{l-c}))` implied by [`pa_bound`].
pub fn pa_leakage(l: usize, c: f64) -> f64 {
    (l as f64 - pa_bound(l, c)).min(l as f64)
}

/// Entropy of the image distribution of `d` under `f`.
fn image_entropy(d: &FiniteDistribution, in_len: usize, f: &HashFn) -> f64 {
    let mut image = vec![0.0; 1usize << f.out_len()];
    for (a, &p) in d.mass.iter().enumerate() {
        if p > 0.0 {
            let y = f.apply(&BitVec::from_u64(a as u64, in_len)).expect("lengths match");
            image[y.to_u64() as usize] += p;
        }
    }
    shannon_entropy(&image)
}

/// All subspaces of `GF(2)^k` for `k ≤ 6`, each as a membership mask over
/// the `2^k` vectors.
fn all_subspaces(k: usize) -> Vec<u64> {
    let size = 1usize << k;
    let mut seen: FxHashSet<u64> = FxHashSet::default();
    let mut frontier = vec![1u64];
    seen.insert(1);
    while let Some(space) = frontier.pop() {
        for v in 0..size {
            if space >> v & 1 == 1 {
                continue;
            }
            let mut grown = space;
            for u in 0..size {
                if space >> u & 1 == 1 {
                    grown |= 1u64 << (u ^ v);
                }
            }
            if seen.insert(grown) {
                frontier.push(grown);
            }
        }
    }
    let mut out: Vec<u64> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// Number of `out × in` matrices whose kernel is a fixed subspace of
/// dimension `in - rank`: the injective linear maps from a rank-dimensional
/// quotient into `GF(2)^out`.
fn matrices_with_kernel(rank: usize, out_len: usize) -> f64 {
    (0..rank)
        .map(|i| (2f64).powi(out_len as i32) - (2f64).powi(i as i32))
        .product()
}

/// Exact `H(F(A) | F)` averaged over the whole linear family.
///
/// `H(F(A))` depends on `F` only through its kernel, so for `in_len ≤ 6` the
/// average runs over subspaces weighted by how many matrices share each
/// kernel. For larger inputs with `in_len·out_len ≤ 24` every matrix is
/// enumerated directly.
pub fn exact_hash_entropy(d: &FiniteDistribution, out_len: usize) -> Result<f64> {
    let in_len = d.len().trailing_zeros() as usize;
    if d.len() != 1 << in_len {
        return Err(Error::Dimension(format!(
            "distribution over {} outcomes is not over bit strings",
            d.len()
        )));
    }
    if in_len > 10 {
        return Err(Error::BudgetExceeded {
            estimate: 1u128 << (in_len * out_len).min(127),
            budget: 1 << 24,
        });
    }
    if in_len <= 6 {
        let total = (2f64).powi((in_len * out_len) as i32);
        let mut acc = 0.0;
        for space in all_subspaces(in_len) {
            let dim = space.count_ones().trailing_zeros() as usize;
            let rank = in_len - dim;
            if rank > out_len {
                continue;
            }
            let weight = matrices_with_kernel(rank, out_len);
            if weight == 0.0 {
                continue;
            }
            acc += weight * coset_entropy(d, space, in_len);
        }
        return Ok(acc / total);
    }
    let maps = all_linear_maps(in_len, out_len)?;
    let total: f64 = maps.iter().map(|f| image_entropy(d, in_len, f)).sum();
    Ok(total / maps.len() as f64)
}

/// Entropy of the coset of `A` modulo the subspace `space`.
fn coset_entropy(d: &FiniteDistribution, space: u64, in_len: usize) -> f64 {
    let size = 1usize << in_len;
    let mut label = vec![usize::MAX; size];
    let mut cosets: Vec<f64> = Vec::new();
    for a in 0..size {
        if label[a] != usize::MAX {
            continue;
        }
        let id = cosets.len();
        let mut p = 0.0;
        for u in 0..size {
            if space >> u & 1 == 1 {
                label[a ^ u] = id;
                p += d.mass[a ^ u];
            }
        }
        cosets.push(p);
    }
    shannon_entropy(&cosets)
}

/// Exact collision count `#{F : F(a) = F(b)}` over the full family, by
/// enumeration (`in_len·out_len ≤ 24`).
pub fn exact_collision_count(a: &BitVec, b: &BitVec, out_len: usize) -> Result<u64> {
    let in_len = a.len();
    let bits = in_len * out_len;
    if bits > 24 {
        return Err(Error::BudgetExceeded {
            estimate: 1u128 << bits.min(127),
            budget: 1 << 24,
        });
    }
    let diff = a.xor(b)?;
    Ok((0..1u64 << bits)
        .filter(|&i| {
            let f = matrix_from_index(i, out_len, in_len);
            f.mat_vec_mul(&diff).unwrap().is_zero()
        })
        .count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn one_by_one_family_is_balanced() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let trials = 20_000;
        let ones = (0..trials)
            .filter(|_| sample_hash(1, 1, &mut rng).unwrap().matrix().get(0, 0))
            .count();
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((ones as f64 - trials as f64 / 2.0).abs() < 4.0 * sigma);
        assert!(sample_hash(2, 3, &mut rng).is_err());
    }

    #[test]
    fn sampled_collision_rate() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let a = BitVec::parse("1010").unwrap();
        let b = BitVec::parse("0110").unwrap();
        let trials = 40_000;
        let hits = (0..trials)
            .filter(|_| {
                let f = sample_hash(4, 2, &mut rng).unwrap();
                f.apply(&a).unwrap() == f.apply(&b).unwrap()
            })
            .count();
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        assert!(hits as f64 <= trials as f64 / 4.0 + 3.0 * sigma);
    }

    #[test]
    fn exact_universality() {
        for in_len in 1..=6 {
            for out_len in 1..=(18 / in_len).min(in_len) {
                for a in [0u64, 1, (1 << in_len) - 1] {
                    let b = (a * 5 + 3) % (1 << in_len);
                    if a == b {
                        continue;
                    }
                    let count = exact_collision_count(
                        &BitVec::from_u64(a, in_len),
                        &BitVec::from_u64(b, in_len),
                        out_len,
                    )
                    .unwrap();
                    // Exactly 2^{out(in-1)} of the 2^{out·in} maps send a⊕b to 0.
                    assert_eq!(count, 1u64 << (out_len * (in_len - 1)));
                }
            }
        }
    }

    #[test]
    fn systematic_family_is_universal() {
        for in_len in 1..=5 {
            for out_len in 1..=in_len {
                let fam = systematic_maps(in_len, out_len).unwrap();
                assert_eq!(fam.len(), 1 << (out_len * (in_len - out_len)));
                for a in 0..1u64 << in_len {
                    for b in (a + 1)..1u64 << in_len {
                        let va = BitVec::from_u64(a, in_len);
                        let vb = BitVec::from_u64(b, in_len);
                        let c = fam
                            .iter()
                            .filter(|f| f.apply(&va).unwrap() == f.apply(&vb).unwrap())
                            .count();
                        assert!(c * (1 << out_len) <= fam.len());
                    }
                }
            }
        }
    }

    #[test]
    fn collision_and_renyi_examples() {
        assert!((collision_probability(&FiniteDistribution::uniform(4)) - 0.25).abs() < 1e-15);
        assert_eq!(collision_probability(&FiniteDistribution::point(4, 2)), 1.0);
        let d = FiniteDistribution::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((collision_probability(&d) - 0.375).abs() < 1e-15);
        assert!((renyi2(&d) - (8.0f64 / 3.0).log2()).abs() < 1e-12);
        assert!((renyi2(&d) - 1.415).abs() < 1e-3);
        assert!((renyi2(&FiniteDistribution::uniform(32)) - 5.0).abs() < 1e-12);
        assert_eq!(renyi2(&FiniteDistribution::point(8, 0)), 0.0);
        assert!(FiniteDistribution::new(vec![0.5, 0.4]).is_err());
    }

    #[test]
    fn pa_bound_examples() {
        assert!((pa_bound(5, 5.0) - 4.0).abs() < 1e-12);
        assert!((pa_bound(3, 1e6) - 3.0).abs() < 1e-12);
        assert!((pa_bound(1, 3.0) - (1.0 - 1.25f64.log2())).abs() < 1e-12);
        assert!((pa_bound(1, 3.0) - 0.6781).abs() < 1e-4);
        assert!(pa_bound_weak(1, 3.0) <= pa_bound(1, 3.0));
    }

    #[test]
    fn exact_entropy_examples() {
        let u2 = FiniteDistribution::uniform(4);
        let h = exact_hash_entropy(&u2, 1).unwrap();
        assert!(h >= pa_bound(1, 2.0));
        // Three of the four 1x2 maps are balanced on a uniform input.
        assert!((h - 0.75).abs() < 1e-12);
        assert_eq!(exact_hash_entropy(&FiniteDistribution::point(8, 3), 2).unwrap(), 0.0);
        let four = FiniteDistribution::uniform_on(8, &[0, 3, 5, 6]).unwrap();
        assert!((renyi2(&four) - 2.0).abs() < 1e-12);
        assert!(exact_hash_entropy(&four, 1).unwrap() >= 1.0 - 1.5f64.log2());
    }

    #[test]
    fn kernel_method_matches_direct_enumeration() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for in_len in 1..=4 {
            for out_len in 1..=in_len {
                let w: Vec<f64> = (0..1 << in_len).map(|_| rng.random::<f64>()).collect();
                let d = FiniteDistribution::from_weights(&w).unwrap();
                let maps = all_linear_maps(in_len, out_len).unwrap();
                let direct: f64 =
                    maps.iter().map(|f| image_entropy(&d, in_len, f)).sum::<f64>() / maps.len() as f64;
                let fast = exact_hash_entropy(&d, out_len).unwrap();
                assert!((direct - fast).abs() < 1e-12, "in={in_len} out={out_len}");
            }
        }
    }

    #[test]
    fn subspace_counts_match_gaussian_binomials() {
        // Sum over j of the Gaussian binomial [k choose j]_2.
        let expected = [1usize, 2, 5, 16, 67, 374, 2825];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(all_subspaces(k).len(), e);
        }
    }

    proptest! {
        #[test]
        fn pa_bound_monotone_and_capped(l in 0usize..64, c in -10.0f64..80.0, dc in 0.0f64..5.0) {
            prop_assert!(pa_bound(l, c) <= l as f64);
            prop_assert!(pa_bound(l, c + dc) >= pa_bound(l, c) - 1e-12);
        }

        #[test]
        fn apply_is_linear(seed in any::<u64>(), in_len in 1usize..100, frac in 0.0f64..=1.0) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let out_len = ((in_len as f64) * frac) as usize;
            let f = sample_hash(in_len, out_len, &mut rng).unwrap();
            let a = BitVec::random(in_len, &mut rng);
            let b = BitVec::random(in_len, &mut rng);
            let lhs = f.apply(&a.xor(&b).unwrap()).unwrap();
            let rhs = f.apply(&a).unwrap().xor(&f.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

//! Ranking and unranking of fixed-size subsets.
//!
//! Subsets of `{0, .., universe-1}` are numbered in colexicographic order by
//! the combinatorial number system: the sorted subset `c_1 < .. < c_k` has
//! rank `sum C(c_i, i)`. Bit strings are read as big-endian integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// Exact binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> Result<BigUint> {
    if k > n {
        return Err(Error::OutOfRange(format!("C({n}, {k}) with k > n")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// Smallest `m` with `2^m >= value`, i.e. `ceil(log2 value)` for `value >= 1`.
pub fn ceil_log2(value: &BigUint) -> usize {
    if value.is_zero() || value.is_one() {
        return 0;
    }
    let v = value - 1u32;
    v.bits() as usize
}

/// `log2` of a big integer, accurate to roughly 1e-12 relative.
pub fn log2_big(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 60 {
        return (value.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 60;
    let top: BigUint = value >> shift;
    (top.iter_u64_digits().next().unwrap_or(0) as f64).log2() + shift as f64
}

pub fn bitvec_to_biguint(s: &BitVec) -> BigUint {
    let mut bytes = vec![0u8; s.len().div_ceil(8)];
    // Big-endian: bit 0 of `s` is the most significant.
    let pad = bytes.len() * 8 - s.len();
    for (i, b) in s.iter().enumerate() {
        if b {
            let p = pad + i;
            bytes[p / 8] |= 0x80 >> (p % 8);
        }
    }
    BigUint::from_bytes_be(&bytes)
}

pub fn biguint_to_bitvec(value: &BigUint, len: usize) -> Result<BitVec> {
    if value.bits() as usize > len {
        return Err(Error::OutOfRange(format!(
            "{} bits do not fit in {len}",
            value.bits()
        )));
    }
    let mut out = BitVec::zeros(len);
    for i in 0..value.bits() {
        if value.bit(i) {
            out.set(len - 1 - i as usize, true);
        }
    }
    Ok(out)
}

/// Uniform integer in `[0, bound)` by rejection on `bits(bound)`-bit draws.
pub fn random_below<R: Rng + ?Sized>(bound: &BigUint, rng: &mut R) -> BigUint {
    assert!(!bound.is_zero(), "empty range");
    let bits = bound.bits() as usize;
    loop {
        let candidate = bitvec_to_biguint(&BitVec::random(bits, rng));
        if &candidate < bound {
            return candidate;
        }
    }
}

/// Running value of `C(x, j)` that can be stepped one unit at a time.
struct BinomialWalker {
    x: usize,
    j: usize,
    value: BigUint,
}

impl BinomialWalker {
    fn inc_x(&mut self) {
        // C(x+1, j) = C(x, j) (x+1) / (x+1-j)
        self.value *= self.x + 1;
        self.value /= self.x + 1 - self.j;
        self.x += 1;
    }

    fn dec_x(&mut self) {
        // C(x-1, j) = C(x, j) (x-j) / x
        self.value *= self.x - self.j;
        self.value /= self.x;
        self.x -= 1;
    }
}

/// The codec behind the subset maps of the malicious-user protocols.
#[derive(Clone, Debug)]
pub struct SubsetCodec {
    universe: usize,
    size: usize,
    count: BigUint,
    m_bits: usize,
}

impl SubsetCodec {
    pub fn new(universe: usize, size: usize) -> Result<Self> {
        let count = binomial(universe, size)?;
        let m_bits = ceil_log2(&count);
        Ok(SubsetCodec {
            universe,
            size,
            count,
            m_bits,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn subset_size(&self) -> usize {
        self.size
    }

    /// `C(universe, subset_size)`.
    pub fn count(&self) -> &BigUint {
        &self.count
    }

    /// `ceil(log2 C(universe, subset_size))`.
    pub fn m_bits(&self) -> usize {
        self.m_bits
    }

    /// `C / 2^m`, the fraction of m-bit strings that encode a subset.
    pub fn density(&self) -> f64 {
        (log2_big(&self.count) - self.m_bits as f64).exp2()
    }

    /// Colex rank of a subset (any order; duplicates rejected).
    pub fn rank(&self, subset: &[usize]) -> Result<BigUint> {
        if subset.len() != self.size {
            return Err(Error::OutOfRange(format!(
                "subset of size {} for a codec of size {}",
                subset.len(),
                self.size
            )));
        }
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OutOfRange("repeated element in subset".into()));
        }
        if sorted.last().is_some_and(|&c| c >= self.universe) {
            return Err(Error::OutOfRange(format!(
                "element outside universe of size {}",
                self.universe
            )));
        }
        let mut rank = BigUint::zero();
        // Walker holds C(x, j); start at C(0, 0).
        let mut w = BinomialWalker {
            x: 0,
            j: 0,
            value: BigUint::one(),
        };
        for (idx, &c) in sorted.iter().enumerate() {
            let i = idx + 1;
            if c < i {
                // C(c, i) = 0 and the walker stays below the diagonal.
                continue;
            }
            // Raise j to i, keeping x >= j.
            while w.j < i {
                if w.x <= w.j {
                    w.x = w.j + 1;
                    w.j += 1;
                    w.value = BigUint::one();
                    // C(j, j) = 1
                } else {
                    // C(x, j+1) = C(x, j) (x-j) / (j+1)
                    w.value *= w.x - w.j;
                    w.value /= w.j + 1;
                    w.j += 1;
                }
            }
            if w.x > c {
                w = BinomialWalker {
                    x: c,
                    j: i,
                    value: binomial(c, i)?,
                };
            }
            while w.x < c {
                w.inc_x();
            }
            rank += &w.value;
        }
        Ok(rank)
    }

    /// The subset of colex rank `r`, sorted ascending.
    pub fn unrank(&self, r: &BigUint) -> Result<Vec<usize>> {
        if r >= &self.count {
            return Err(Error::OutOfRange(format!(
                "rank {r} not below C({}, {})",
                self.universe, self.size
            )));
        }
        let k = self.size;
        let mut out = vec![0usize; k];
        if k == 0 {
            return Ok(out);
        }
        let mut r = r.clone();
        let top = self.universe - 1;
        let mut w = BinomialWalker {
            x: top,
            j: k,
            value: if k > top { BigUint::zero() } else { binomial(top, k)? },
        };
        let mut i = k;
        loop {
            // Largest c (<= w.x) with C(c, i) <= r.
            while w.value > r {
                w.dec_x();
            }
            let c = w.x;
            out[i - 1] = c;
            r -= &w.value;
            if i == 1 {
                break;
            }
            if c < i {
                // Remaining elements are forced to 0..i-1.
                for (p, slot) in out.iter_mut().take(i - 1).enumerate() {
                    *slot = p;
                }
                break;
            }
            // C(c-1, i-1) = C(c, i) i / c
            w.value *= i;
            w.value /= c;
            w.x = c - 1;
            w.j = i - 1;
            i -= 1;
        }
        Ok(out)
    }

    /// Whether an m-bit string lies in the coded range `[0, C)`.
    pub fn contains(&self, s: &BitVec) -> bool {
        s.len() == self.m_bits && bitvec_to_biguint(s) < self.count
    }

    /// The bijective map on `[0, C)`; strings outside the range are rejected.
    pub fn string_to_subset(&self, s: &BitVec) -> Result<Vec<usize>> {
        self.check_len(s)?;
        self.unrank(&bitvec_to_biguint(s))
    }

    /// The onto map `s -> unrank(int(s) mod C)`.
    pub fn string_to_subset_onto(&self, s: &BitVec) -> Result<Vec<usize>> {
        self.check_len(s)?;
        self.unrank(&(bitvec_to_biguint(s) % &self.count))
    }

    /// The m-bit encoding of a subset (its rank as a big-endian string).
    pub fn subset_to_string(&self, subset: &[usize]) -> Result<BitVec> {
        biguint_to_bitvec(&self.rank(subset)?, self.m_bits)
    }

    fn check_len(&self, s: &BitVec) -> Result<()> {
        if s.len() != self.m_bits {
            return Err(Error::Dimension(format!(
                "string of length {} for an {}-bit codec",
                s.len(),
                self.m_bits
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// All k-subsets of 0..n in colex order, generated independently.
    fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = (0u32..1 << n)
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        // Colex: compare by largest differing element, i.e. by the mask value.
        all.sort_by_key(|s: &Vec<usize>| s.iter().map(|&i| 1u32 << i).sum::<u32>());
        all
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(5, 2).unwrap(), big(10));
        assert_eq!(binomial(9, 0).unwrap(), big(1));
        assert_eq!(binomial(9, 9).unwrap(), big(1));
        assert!(binomial(3, 4).is_err());
        assert_eq!(binomial(60, 30).unwrap(), big(118264581564861424));
    }

    #[test]
    fn unrank_examples() {
        let c = SubsetCodec::new(5, 2).unwrap();
        assert_eq!(c.unrank(&big(0)).unwrap(), vec![0, 1]);
        assert_eq!(c.unrank(&big(9)).unwrap(), vec![3, 4]);
        assert_eq!(c.rank(&[0, 1]).unwrap(), big(0));
        assert_eq!(c.rank(&[4, 3]).unwrap(), big(9));
        assert!(c.unrank(&big(10)).is_err());
        assert!(c.rank(&[1]).is_err());
    }

    #[test]
    fn rank_unrank_match_colex_enumeration() {
        for n in 0..=12 {
            for k in 0..=n {
                let c = SubsetCodec::new(n, k).unwrap();
                let all = colex_subsets(n, k);
                assert_eq!(BigUint::from(all.len()), *c.count());
                for (r, s) in all.iter().enumerate() {
                    assert_eq!(c.unrank(&big(r as u64)).unwrap(), *s, "n={n} k={k} r={r}");
                    assert_eq!(c.rank(s).unwrap(), big(r as u64));
                }
            }
        }
    }

    #[test]
    fn onto_map_wraps_and_balances() {
        let c = SubsetCodec::new(6, 2).unwrap();
        assert_eq!(c.m_bits(), 4);
        assert_eq!(c.string_to_subset_onto(&BitVec::zeros(4)).unwrap(), vec![0, 1]);
        let wrap = BitVec::from_u64(15, 4);
        assert_eq!(c.string_to_subset_onto(&wrap).unwrap(), vec![0, 1]);
        let mut hist = std::collections::HashMap::new();
        for v in 0..16u64 {
            *hist
                .entry(c.string_to_subset_onto(&BitVec::from_u64(v, 4)).unwrap())
                .or_insert(0) += 1;
        }
        assert_eq!(hist.len(), 15);
        assert!(hist.values().all(|&h| h == 1 || h == 2));
    }

    #[test]
    fn membership_is_integer_range() {
        let c = SubsetCodec::new(6, 2).unwrap();
        assert!(c.contains(&BitVec::from_u64(14, 4)));
        assert!(!c.contains(&BitVec::from_u64(15, 4)));
        assert!(c.string_to_subset(&BitVec::from_u64(15, 4)).is_err());
    }

    #[test]
    fn large_codec_round_trip() {
        let c = SubsetCodec::new(2000, 500).unwrap();
        assert!((c.m_bits() as f64 - log2_big(c.count())).abs() < 1.0);
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        for _ in 0..5 {
            let r = random_below(c.count(), &mut rng);
            let s = c.unrank(&r).unwrap();
            assert_eq!(s.len(), 500);
            assert_eq!(c.rank(&s).unwrap(), r);
        }
        let packed: Vec<usize> = (0..500).collect();
        assert_eq!(c.rank(&packed).unwrap(), BigUint::zero());
        let top: Vec<usize> = (1500..2000).collect();
        assert_eq!(c.rank(&top).unwrap(), c.count() - 1u32);
    }

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(&big(1)), 0);
        assert_eq!(ceil_log2(&big(2)), 1);
        assert_eq!(ceil_log2(&big(15)), 4);
        assert_eq!(ceil_log2(&big(16)), 4);
        assert_eq!(ceil_log2(&big(17)), 5);
    }

    proptest! {
        #[test]
        fn bitvec_biguint_round_trip(v in any::<u64>(), extra in 0usize..70) {
            let len = 64 + extra;
            let s = biguint_to_bitvec(&big(v), len).unwrap();
            prop_assert_eq!(bitvec_to_biguint(&s), big(v));
            prop_assert_eq!(BitVec::from_u64(v, 64).to_u64(), v);
        }

        #[test]
        fn rank_inverts_unrank(n in 1usize..80, frac in 0.0f64..1.0, seed in any::<u64>()) {
            let k = ((n as f64) * frac) as usize;
            let c = SubsetCodec::new(n, k).unwrap();
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let r = random_below(c.count(), &mut rng);
            let s = c.unrank(&r).unwrap();
            prop_assert!(s.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(c.rank(&s).unwrap(), r);
        }
    }
}

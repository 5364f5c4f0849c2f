//! Bit vectors and bit matrices over GF(2).
//!
//! Rows are packed into `u64` words; every contract is stated on the logical
//! bit sequence, with bit `0` the first (most significant in lexicographic
//! order) element.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length sequence of bits.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
    len: usize,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = BitVec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    /// Parses a string over `{0,1}`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::OutOfRange(format!("bit character {other:?}"))),
            }
        }
        Ok(v)
    }

    /// Bits of `value`, most significant first, in a vector of length `len`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len.min(64) {
            if (value >> i) & 1 == 1 {
                v.set(len - 1 - i, true);
            }
        }
        v
    }

    /// Inverse of [`BitVec::from_u64`]; only the last 64 bits are kept.
    pub fn to_u64(&self) -> u64 {
        let mut out = 0u64;
        for i in 0..self.len {
            out = (out << 1) | self.get(i) as u64;
        }
        out
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut words: Vec<u64> = (0..words_for(len)).map(|_| rng.random()).collect();
        mask_tail(&mut words, len);
        BitVec { words, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, bit);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product mod 2. Panics on length mismatch.
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of unequal lengths");
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn xor(&self, other: &BitVec) -> Result<BitVec> {
        if self.len != other.len {
            return Err(Error::Dimension(format!(
                "xor of lengths {} and {}",
                self.len, other.len
            )));
        }
        let mut out = self.clone();
        out.xor_in_place(other);
        Ok(out)
    }

    pub(crate) fn xor_in_place(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    /// `x|_A` for an ordered list of positions.
    pub fn select(&self, positions: &[usize]) -> BitVec {
        let mut out = BitVec::zeros(positions.len());
        for (j, &p) in positions.iter().enumerate() {
            out.set(j, self.get(p));
        }
        out
    }

    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        for b in other.iter() {
            out.push(b);
        }
        out
    }

    /// Index of the first position where the two vectors differ.
    fn first_difference(&self, other: &BitVec) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(w, (a, b))| w * WORD + (a ^ b).trailing_zeros() as usize)
    }

    #[allow(dead_code)]
    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

fn mask_tail(words: &mut [u64], len: usize) {
    let rem = len % WORD;
    if rem != 0 {
        if let Some(last) = words.last_mut() {
            *last &= (1u64 << rem) - 1;
        }
    }
}

impl Ord for BitVec {
    /// Lexicographic order on equal-length vectors; shorter vectors sort first.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.len.cmp(&other.len) {
            Ordering::Equal => {}
            o => return o,
        }
        match self.first_difference(other) {
            None => Ordering::Equal,
            Some(i) if self.get(i) => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

impl Serialize for BitVec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        BitVec::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A dense `rows × cols` matrix over GF(2), stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: Vec<BitVec>,
    cols: usize,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix {
            rows: vec![BitVec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = BitMatrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<BitVec>, cols: usize) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Dimension(format!(
                "row of length {} in a matrix with {cols} columns",
                r.len()
            )));
        }
        Ok(BitMatrix { rows, cols })
    }

    /// Parses rows written as `0/1` strings, e.g. `["110", "011"]`.
    pub fn parse(rows: &[&str]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| BitVec::parse(r))
            .collect::<Result<Vec<_>>>()?;
        BitMatrix::from_rows(rows, cols)
    }

    /// Uniform over all `rows × cols` binary matrices.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Self {
        BitMatrix {
            rows: (0..rows).map(|_| BitVec::random(cols, rng)).collect(),
            cols,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &BitVec> {
        self.rows.iter()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        self.rows[r].set(c, bit);
    }

    /// `m · v` over GF(2).
    pub fn mat_vec_mul(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "{}x{} matrix times vector of length {}",
                self.rows(),
                self.cols,
                v.len()
            )));
        }
        let mut out = BitVec::zeros(self.rows());
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, p);
            let pivot = rows[rank].clone();
            for r in rows.iter_mut().skip(rank + 1) {
                if r.get(col) {
                    r.xor_in_place(&pivot);
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| r.to_string()).collect();
        write!(f, "BitMatrix{rows:?}")
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}:", self.rows(), self.cols)?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Samples uniformly from all `rows × cols` matrices of rank `rows`.
///
/// Rejection sampling: a uniform matrix is redrawn until it has full row
/// rank, which keeps the output exactly uniform on the full-rank set.
pub fn random_full_rank_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<BitMatrix> {
    if rows > cols {
        return Err(Error::Dimension(format!(
            "cannot have rank {rows} with only {cols} columns"
        )));
    }
    loop {
        let m = BitMatrix::random(rows, cols, rng);
        if m.rank() == rows {
            return Ok(m);
        }
    }
}

/// The two solutions of `m · x = pi` for a full-rank `(k-1) × k` matrix,
/// returned in lexicographic order.
pub fn solve_affine_pair(m: &BitMatrix, pi: &BitVec) -> Result<(BitVec, BitVec)> {
    let k = m.cols();
    if m.rows() + 1 != k {
        return Err(Error::Dimension(format!(
            "expected a (k-1) x k matrix, got {}x{k}",
            m.rows()
        )));
    }
    if pi.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            pi.len(),
            m.rows()
        )));
    }

    // Reduced row echelon form of the augmented system.
    let mut rows: Vec<BitVec> = m.row_iter().cloned().collect();
    let mut rhs: Vec<bool> = pi.iter().collect();
    let mut pivots = Vec::with_capacity(rows.len());
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        rhs.swap(rank, p);
        let pivot = rows[rank].clone();
        let pivot_rhs = rhs[rank];
        for r in 0..rows.len() {
            if r != rank && rows[r].get(col) {
                rows[r].xor_in_place(&pivot);
                rhs[r] ^= pivot_rhs;
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rank != m.rows() {
        return Err(Error::RankDeficient {
            rank,
            needed: m.rows(),
        });
    }

    let mut is_pivot = vec![false; k];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let free = is_pivot.iter().position(|&p| !p).expect("one free column");

    let solve_with = |free_bit: bool| {
        let mut x = BitVec::zeros(k);
        x.set(free, free_bit);
        for (r, &c) in pivots.iter().enumerate() {
            x.set(c, rhs[r] ^ (free_bit && rows[r].get(free)));
        }
        x
    };
    let a = solve_with(false);
    let b = solve_with(true);
    Ok(if a < b { (a, b) } else { (b, a) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn bv(s: &str) -> BitVec {
        BitVec::parse(s).unwrap()
    }

    #[test]
    fn mat_vec_examples() {
        let id = BitMatrix::identity(3);
        assert_eq!(id.mat_vec_mul(&bv("101")).unwrap(), bv("101"));
        let zero = BitMatrix::zeros(2, 3);
        assert_eq!(zero.mat_vec_mul(&bv("111")).unwrap(), bv("00"));
        let m = BitMatrix::parse(&["110", "011"]).unwrap();
        assert_eq!(m.mat_vec_mul(&bv("101")).unwrap(), bv("11"));
    }

    #[test]
    fn mat_vec_rejects_bad_dimension() {
        let m = BitMatrix::identity(3);
        assert!(matches!(m.mat_vec_mul(&bv("10")), Err(Error::Dimension(_))));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        assert_eq!(BitMatrix::zeros(3, 4).rank(), 0);
        assert_eq!(BitMatrix::parse(&["11", "11"]).unwrap().rank(), 1);
    }

    #[test]
    fn full_rank_one_by_one() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        for _ in 0..20 {
            let m = random_full_rank_matrix(1, 1, &mut rng).unwrap();
            assert_eq!(m, BitMatrix::parse(&["1"]).unwrap());
        }
    }

    #[test]
    fn full_rank_rejects_tall_shape() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        assert!(random_full_rank_matrix(3, 2, &mut rng).is_err());
    }

    /// All rank-2 matrices of shape 2x3, by exhaustive rank filtering.
    fn rank2_2x3() -> Vec<BitMatrix> {
        (0u64..64)
            .map(|bits| {
                BitMatrix::from_rows(
                    vec![BitVec::from_u64(bits >> 3, 3), BitVec::from_u64(bits & 7, 3)],
                    3,
                )
                .unwrap()
            })
            .filter(|m| m.rank() == 2)
            .collect()
    }

    #[test]
    fn full_rank_2x3_is_uniform() {
        let all = rank2_2x3();
        // (2^3 - 1)(2^3 - 2)
        assert_eq!(all.len(), 42);
        let mut counts = std::collections::HashMap::new();
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        let samples = 100_000usize;
        for _ in 0..samples {
            let m = random_full_rank_matrix(2, 3, &mut rng).unwrap();
            assert_eq!(m.rank(), 2);
            *counts.entry(m).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), all.len());
        let p = 1.0 / all.len() as f64;
        let mean = samples as f64 * p;
        let sigma = (samples as f64 * p * (1.0 - p)).sqrt();
        for m in &all {
            let c = counts[m] as f64;
            assert!((c - mean).abs() <= 4.0 * sigma, "{m:?}: {c} vs {mean}");
        }
    }

    #[test]
    fn affine_pair_examples() {
        let (s0, s1) = solve_affine_pair(&BitMatrix::parse(&["11"]).unwrap(), &bv("1")).unwrap();
        assert_eq!((s0, s1), (bv("01"), bv("10")));
        let (s0, s1) = solve_affine_pair(&BitMatrix::parse(&["10"]).unwrap(), &bv("0")).unwrap();
        assert_eq!((s0, s1), (bv("00"), bv("01")));
    }

    #[test]
    fn affine_pair_rejects_rank_deficient() {
        let m = BitMatrix::parse(&["110", "110"]).unwrap();
        assert!(matches!(
            solve_affine_pair(&m, &bv("00")),
            Err(Error::RankDeficient { rank: 1, needed: 2 })
        ));
    }

    #[test]
    fn lexicographic_order() {
        assert!(bv("011") < bv("100"));
        assert!(bv("0") < bv("1"));
        let mut long_a = BitVec::zeros(130);
        let mut long_b = BitVec::zeros(130);
        long_a.set(129, true);
        long_b.set(70, true);
        assert!(long_a < long_b);
    }

    fn arb_full_rank(max_k: usize) -> impl Strategy<Value = (BitMatrix, BitVec)> {
        (2..=max_k, any::<u64>()).prop_map(|(k, seed)| {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = random_full_rank_matrix(k - 1, k, &mut rng).unwrap();
            let pi = BitVec::random(k - 1, &mut rng);
            (m, pi)
        })
    }

    proptest! {
        #[test]
        fn affine_pair_matches_brute_force((m, pi) in arb_full_rank(12)) {
            let k = m.cols();
            let brute: Vec<BitVec> = (0..1u64 << k)
                .map(|x| BitVec::from_u64(x, k))
                .filter(|x| m.mat_vec_mul(x).unwrap() == pi)
                .collect();
            let (s0, s1) = solve_affine_pair(&m, &pi).unwrap();
            prop_assert!(s0 < s1);
            prop_assert_eq!(brute, vec![s0, s1]);
        }

        #[test]
        fn mat_vec_is_linear(rows in 1usize..20, cols in 1usize..150, seed in any::<u64>()) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = BitMatrix::random(rows, cols, &mut rng);
            let u = BitVec::random(cols, &mut rng);
            let v = BitVec::random(cols, &mut rng);
            let lhs = m.mat_vec_mul(&u.xor(&v).unwrap()).unwrap();
            let rhs = m.mat_vec_mul(&u).unwrap().xor(&m.mat_vec_mul(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn full_rank_output_has_full_rank(rows in 1usize..40, extra in 0usize..5, seed in any::<u64>()) {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            let m = random_full_rank_matrix(rows, rows + extra, &mut rng).unwrap();
            prop_assert_eq!(m.rank(), rows);
        }

        #[test]
        fn u64_round_trip(v in any::<u64>(), len in 1usize..=64) {
            let masked = if len == 64 { v } else { v & ((1u64 << len) - 1) };
            prop_assert_eq!(BitVec::from_u64(masked, len).to_u64(), masked);
        }
    }
}

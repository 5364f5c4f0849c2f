//! Interactive hashing.
//!
//! The receiver draws a uniformly random full-rank `(k-1) × k` matrix and
//! sends its rows one at a time; the sender answers each row `Δ_i` with a bit
//! `Π_i` (honestly `Δ_i · S`). Both sides output the two solutions of
//! `M x = Π` in lexicographic order.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::error::Result;
use crate::gf2::{random_full_rank_matrix, solve_affine_pair, BitMatrix, BitVec};

/// The sender side of a run. Implementations may adapt to earlier rounds.
pub trait SenderStrategy {
    /// Answer to challenge row `delta` in round `round` (0-based).
    fn respond(&mut self, round: usize, delta: &BitVec) -> bool;

    /// The sender's committed input, if it has one.
    fn input(&self) -> Option<&BitVec> {
        None
    }
}

/// Answers `Δ_i · S`.
#[derive(Clone, Debug)]
pub struct HonestSender {
    s: BitVec,
}

impl HonestSender {
    pub fn new(s: BitVec) -> Self {
        HonestSender { s }
    }
}

impl SenderStrategy for HonestSender {
    fn respond(&mut self, _round: usize, delta: &BitVec) -> bool {
        delta.dot(&self.s)
    }

    fn input(&self) -> Option<&BitVec> {
        Some(&self.s)
    }
}

/// Keeps as many strings of a target set consistent as possible: each round
/// it answers with the bit shared by the larger half of the survivors.
#[derive(Clone, Debug)]
pub struct GreedySender {
    survivors: Vec<BitVec>,
}

impl GreedySender {
    pub fn new(good: &[BitVec]) -> Self {
        GreedySender {
            survivors: good.to_vec(),
        }
    }
}

impl SenderStrategy for GreedySender {
    fn respond(&mut self, _round: usize, delta: &BitVec) -> bool {
        let ones = self.survivors.iter().filter(|g| delta.dot(g)).count();
        let bit = 2 * ones > self.survivors.len();
        self.survivors.retain(|g| delta.dot(g) == bit);
        bit
    }
}

/// Result of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IHOutcome {
    pub s0: BitVec,
    pub s1: BitVec,
    /// Index of the sender's input among the outputs (honest senders only).
    pub phi: Option<bool>,
    pub matrix: BitMatrix,
    pub pi: BitVec,
}

impl IHOutcome {
    fn new(matrix: BitMatrix, pi: BitVec, input: Option<&BitVec>) -> Result<Self> {
        let (s0, s1) = solve_affine_pair(&matrix, &pi)?;
        assert!(s0 < s1, "outputs must be distinct and ordered");
        debug_assert_eq!(matrix.mat_vec_mul(&s0)?, pi);
        debug_assert_eq!(matrix.mat_vec_mul(&s1)?, pi);
        let phi = match input {
            Some(s) if *s == s0 => Some(false),
            Some(s) if *s == s1 => Some(true),
            Some(_) => None,
            None => None,
        };
        Ok(IHOutcome {
            s0,
            s1,
            phi,
            matrix,
            pi,
        })
    }

    pub fn output(&self, which: bool) -> &BitVec {
        if which {
            &self.s1
        } else {
            &self.s0
        }
    }
}

/// Runs the sub-protocol, invoking `on_round(i, Δ_i, Π_i)` after each round
/// so callers can record the exchange.
pub fn ih_run_with<R, S, F>(k: usize, sender: &mut S, rng: &mut R, mut on_round: F) -> Result<IHOutcome>
where
    R: Rng + ?Sized,
    S: SenderStrategy + ?Sized,
    F: FnMut(usize, &BitVec, bool),
{
    assert!(k >= 2, "interactive hashing needs k >= 2");
    let m = random_full_rank_matrix(k - 1, k, rng)?;
    let mut pi = BitVec::zeros(k - 1);
    for (i, row) in m.row_iter().enumerate() {
        let bit = sender.respond(i, row);
        pi.set(i, bit);
        on_round(i, row, bit);
    }
    let outcome = IHOutcome::new(m, pi, sender.input())?;
    if sender.input().is_some() {
        // An honest sender's input is always one of the two outputs.
        assert!(outcome.phi.is_some(), "honest input missing from outputs");
    }
    Ok(outcome)
}

pub fn ih_run<R, S>(k: usize, sender: &mut S, rng: &mut R) -> Result<IHOutcome>
where
    R: Rng + ?Sized,
    S: SenderStrategy + ?Sized,
{
    ih_run_with(k, sender, rng, |_, _, _| {})
}

/// Fraction of `trials` runs whose outputs both land in `good`, with a fresh
/// sender built by `make_sender` for every run.
pub fn ih_adversarial_hit_rate<R, F, S>(
    k: usize,
    good: &[BitVec],
    mut make_sender: F,
    trials: usize,
    rng: &mut R,
) -> Result<f64>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> S,
    S: SenderStrategy,
{
    if good.is_empty() || trials == 0 {
        return Ok(0.0);
    }
    let set: std::collections::HashSet<&BitVec> = good.iter().collect();
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut sender = make_sender(rng);
        let out = ih_run(k, &mut sender, rng)?;
        if set.contains(&out.s0) && set.contains(&out.s1) {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// The bound `15.6805 · |G| / 2^k` on the hit probability of any sender.
pub fn hit_rate_bound(k: usize, good_len: usize) -> f64 {
    15.6805 * good_len as f64 / (k as f64).exp2()
}

/// Every full-rank `(k-1) × k` matrix, in a fixed order.
pub fn all_full_rank_matrices(k: usize) -> Vec<BitMatrix> {
    let rows = k - 1;
    let bits = rows * k;
    assert!(bits <= 24, "exhaustive enumeration only for tiny k");
    (0u64..1 << bits)
        .filter_map(|idx| {
            let rows_v: Vec<BitVec> = (0..rows)
                .map(|r| BitVec::from_u64(idx >> (r * k) & ((1 << k) - 1), k))
                .collect();
            let m = BitMatrix::from_rows(rows_v, k).expect("row width");
            (m.rank() == rows).then_some(m)
        })
        .collect()
}

/// Outcome of the exhaustive honest-sender checks at one `k`.
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustiveReport {
    pub k: usize,
    pub matrices: usize,
    /// S₀ ≠ S₁ on every (matrix, input) pair.
    pub distinct_outputs: bool,
    /// The input is an output on every pair.
    pub input_recovered: bool,
    /// For each input, every other string is the co-output equally often.
    pub co_output_uniform: bool,
    /// Per co-output count observed (all equal when uniform).
    pub co_output_count: usize,
    /// For every receiver view `(M, Π)`, Φ = 0 and Φ = 1 arise from equally
    /// many inputs, so a uniform input leaves Φ uniform.
    pub phi_uniform: bool,
}

impl ExhaustiveReport {
    pub fn passed(&self) -> bool {
        self.distinct_outputs && self.input_recovered && self.co_output_uniform && self.phi_uniform
    }
}

/// Runs the honest protocol over every full-rank matrix and every input.
pub fn ih_exhaustive_check(k: usize) -> Result<ExhaustiveReport> {
    let matrices = all_full_rank_matrices(k);
    let mut distinct = true;
    let mut recovered = true;
    let mut co_uniform = true;
    let mut co_count = 0usize;
    let mut views: HashMap<(usize, u64), [usize; 2]> = HashMap::new();
    for s in 0..1u64 << k {
        let input = BitVec::from_u64(s, k);
        let mut co = vec![0usize; 1 << k];
        for (mi, m) in matrices.iter().enumerate() {
            let pi = m.mat_vec_mul(&input)?;
            let out = IHOutcome::new(m.clone(), pi.clone(), Some(&input))?;
            distinct &= out.s0 != out.s1;
            match out.phi {
                Some(phi) => {
                    co[out.output(!phi).to_u64() as usize] += 1;
                    views.entry((mi, pi.to_u64())).or_default()[phi as usize] += 1;
                }
                None => recovered = false,
            }
        }
        let others: Vec<usize> = (0..1usize << k).filter(|&v| v as u64 != s).map(|v| co[v]).collect();
        co_uniform &= co[s as usize] == 0 && others.iter().all(|&c| c == others[0]);
        co_count = others[0];
    }
    let phi_uniform = views.values().all(|c| c[0] == c[1]);
    Ok(ExhaustiveReport {
        k,
        matrices: matrices.len(),
        distinct_outputs: distinct,
        input_recovered: recovered,
        co_output_uniform: co_uniform,
        co_output_count: co_count,
        phi_uniform,
    })
}

/// One adversarial measurement.
#[derive(Clone, Debug, Serialize)]
pub struct HitRateReport {
    pub k: usize,
    pub good: usize,
    pub trials: usize,
    pub hit_rate: f64,
    pub bound: f64,
}

impl HitRateReport {
    pub fn passed(&self) -> bool {
        self.hit_rate <= self.bound
    }
}

/// Greedy-sender hit rate against a uniformly random good set of size
/// `2^k · density`.
pub fn greedy_hit_rate<R: Rng + ?Sized>(k: usize, density_log2: u32, trials: usize, rng: &mut R) -> Result<HitRateReport> {
    let good_len = (1usize << k) >> density_log2;
    let all: Vec<usize> = (0..1usize << k).collect();
    let pick = crate::rng::sample_subset(&all, good_len, rng).expect("good set fits");
    let good: Vec<BitVec> = pick.iter().map(|&v| BitVec::from_u64(v as u64, k)).collect();
    let hit_rate = ih_adversarial_hit_rate(k, &good, |_| GreedySender::new(&good), trials, rng)?;
    Ok(HitRateReport {
        k,
        good: good_len,
        trials,
        hit_rate,
        bound: hit_rate_bound(k, good_len),
    })
}

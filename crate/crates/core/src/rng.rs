//! Seeded, splittable randomness.
//!
//! Every session is driven by a single `u64` seed. Each party and the channel
//! draw from their own ChaCha20 stream of that seed, so a party's behaviour
//! can be re-derived from its own view alone.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

pub type SessionRng = ChaCha20Rng;

/// Independent randomness sources inside one session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Stream {
    Alice = 1,
    Bob = 2,
    Channel = 3,
    Cathy = 4,
    Inputs = 5,
}

pub fn rng_from_seed(seed: u64) -> SessionRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// The generator for one named stream of a session seed.
pub fn stream_rng(seed: u64, stream: Stream) -> SessionRng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// The private seed a party derives from the session seed. A party's
/// generator is `rng_from_seed(party_seed(seed, stream))`; the value itself is
/// recorded in that party's view.
pub fn party_seed(seed: u64, stream: Stream) -> u64 {
    stream_rng(seed, stream).next_u64()
}

/// Seed of trial `index` under `master_seed`. Independent of worker count and
/// scheduling order.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng.next_u64()
}

/// `count` distinct elements of `pool`, uniformly at random and in sampling
/// order (a partial Fisher–Yates shuffle).
pub fn sample_tuple<R: Rng + ?Sized>(pool: &[usize], count: usize, rng: &mut R) -> Option<Vec<usize>> {
    if count > pool.len() {
        return None;
    }
    let mut work = pool.to_vec();
    for i in 0..count {
        let j = rng.random_range(i..work.len());
        work.swap(i, j);
    }
    work.truncate(count);
    Some(work)
}

/// Like [`sample_tuple`] but returns the subset sorted.
pub fn sample_subset<R: Rng + ?Sized>(pool: &[usize], count: usize, rng: &mut R) -> Option<Vec<usize>> {
    let mut s = sample_tuple(pool, count, rng)?;
    s.sort_unstable();
    Some(s)
}

/// Sorted `pool \ remove`, both inputs sorted.
pub fn sorted_difference(pool: &[usize], remove: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(pool.len().saturating_sub(remove.len()));
    let mut j = 0;
    for &p in pool {
        while j < remove.len() && remove[j] < p {
            j += 1;
        }
        if j < remove.len() && remove[j] == p {
            continue;
        }
        out.push(p);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a1 = stream_rng(9, Stream::Alice).next_u64();
        let a2 = stream_rng(9, Stream::Alice).next_u64();
        let b = stream_rng(9, Stream::Bob).next_u64();
        assert_eq!(a1, a2);
        assert_ne!(a1, b);
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
        assert_eq!(trial_seed(1, 5), trial_seed(1, 5));
    }

    #[test]
    fn tuple_sampling_is_distinct_and_bounded() {
        let mut rng = rng_from_seed(3);
        let pool: Vec<usize> = (10..30).collect();
        let t = sample_tuple(&pool, 12, &mut rng).unwrap();
        let mut s = t.clone();
        s.sort();
        s.dedup();
        assert_eq!(s.len(), 12);
        assert!(t.iter().all(|x| pool.contains(x)));
        assert!(sample_tuple(&pool, 21, &mut rng).is_none());
    }

    #[test]
    fn subset_sampling_is_uniform_on_small_pool() {
        let mut rng = rng_from_seed(11);
        let pool = [0usize, 1, 2, 3];
        let mut counts = std::collections::HashMap::new();
        let trials = 60_000;
        for _ in 0..trials {
            *counts.entry(sample_subset(&pool, 2, &mut rng).unwrap()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 6);
        let p = 1.0 / 6.0;
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - trials as f64 * p).abs() < 4.0 * sigma);
        }
    }

    #[test]
    fn difference_of_sorted_lists() {
        assert_eq!(sorted_difference(&[1, 2, 4, 7, 9], &[2, 7, 8]), vec![1, 4, 9]);
        assert_eq!(sorted_difference(&[], &[1]), Vec::<usize>::new());
    }
}

//! Interactive hashing with an honest sender, its exhaustive property check,
//! and a greedy cheating sender against the hit-rate bound.

use wiretap_ot::gf2::BitVec;
use wiretap_ot::ih::{greedy_hit_rate, ih_exhaustive_check, ih_run_with, HonestSender};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let mut rng = rng_from_seed(2024);
    let input = BitVec::parse("101101")?;
    let out = ih_run_with(6, &mut HonestSender::new(input.clone()), &mut rng, |i, delta, pi| {
        println!("round {i}: receiver sends {delta}, sender answers {}", u8::from(pi));
    })?;
    println!("input {input} -> outputs {} / {}, input at index {:?}", out.s0, out.s1, out.phi.map(u8::from));

    for k in 2..=4 {
        let r = ih_exhaustive_check(k)?;
        println!("k = {k}: {} matrices, all properties hold: {}", r.matrices, r.passed());
    }

    for (k, d) in [(8, 3), (12, 5)] {
        let r = greedy_hit_rate(k, d, 5_000, &mut rng)?;
        println!(
            "greedy sender, k = {k}, |G| = {}: both outputs good in {:.4} of runs (bound {:.4})",
            r.good, r.hit_rate, r.bound
        );
    }
    Ok(())
}

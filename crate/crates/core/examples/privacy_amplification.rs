//! Hashing a partially known string down to a nearly uniform key, with the
//! exact post-hashing entropy next to its guaranteed lower bound.

use wiretap_ot::gf2::BitVec;
use wiretap_ot::hash::{exact_hash_entropy, pa_bound, renyi2, sample_hash, FiniteDistribution};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    // The eavesdropper knows a 6-bit string lies in one of 8 values.
    let d = FiniteDistribution::uniform_on(64, &[3, 9, 14, 22, 37, 41, 50, 63])?;
    let c = renyi2(&d);
    println!("collision entropy {c:.3} bits");
    for l in 1..=5 {
        println!(
            "  {l}-bit key: H(F(A)|F) = {:.4}, bound {:.4}",
            exact_hash_entropy(&d, l)?,
            pa_bound(l, c)
        );
    }

    let mut rng = rng_from_seed(3);
    let f = sample_hash(16, 4, &mut rng)?;
    let x = BitVec::random(16, &mut rng);
    println!("\nF: 16 -> 4 bits, F({x}) = {}", f.apply(&x)?);
    Ok(())
}

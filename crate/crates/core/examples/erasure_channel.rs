//! One broadcast over independent and degraded erasure channels, and the
//! merged view of a colluding Bob and Eve.

use wiretap_ot::channel::{erasure_sets, merge_psi, transmit, ChannelConfig};
use wiretap_ot::gf2::BitVec;
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let mut rng = rng_from_seed(7);
    let x = BitVec::random(32, &mut rng);
    println!("X   {x}");

    for cfg in [ChannelConfig::independent(0.4, 0.5)?, ChannelConfig::degraded(0.2, 0.5)?] {
        let out = transmit(&x, &cfg, &mut rng);
        let z = out.z.expect("broadcast topologies reach Eve");
        let psi = merge_psi(&out.y, &z)?;
        let (e, _) = erasure_sets(&out.y);
        println!("\n{:?}", cfg.topology);
        println!("Y   {}", out.y);
        println!("Z   {z}");
        println!("Psi {psi}");
        println!("Bob misses {} bits; Bob and Eve together miss {}", e.len(), psi.count_erased());
    }
    Ok(())
}

//! The 1-private protocol forces at least `nr` positions Bob never received
//! into the unchosen selection, so he alone cannot learn the other string.

use wiretap_ot::protocol::{run_c1p, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let p = ParamRequest::new(Variant::C1p, 0.24, 0.4, 0.6, 10_000).derive()?;
    let cfg = p.channel_config()?;
    println!("n = {}, m = {}, forced erasures nr = {}", p.n, p.m, p.nr);
    for seed in 0..5 {
        let inputs = PartyInputs::random(&p, &mut rng_from_seed(seed + 100));
        let out = run_c1p(&p, &inputs, &cfg, seed)?;
        let y = out.bob.y.as_ref().expect("Bob always receives");
        let u = out.choice();
        println!(
            "seed {seed}: U = {u}, erased in L_U = {:>4}, in L_Ubar = {:>4}, correct = {:?}",
            y.count_erased_in(&out.selections[u]),
            y.count_erased_in(&out.selections[1 - u]),
            out.correct()
        );
    }
    Ok(())
}

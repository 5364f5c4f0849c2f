//! One session of the 2-private protocol: Bob learns the string he chose,
//! and even Bob and Eve together miss enough of the other key's positions.

use wiretap_ot::analysis::montecarlo::{residual_min_entropy, secrecy_observers};
use wiretap_ot::gf2::BitVec;
use wiretap_ot::protocol::{run_c2p, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let p = ParamRequest::new(Variant::C2p, 0.16, 0.5, 0.5, 4000).derive()?;
    println!("n = {}, |L_i| = {}, string length m = {}", p.n, p.beta_n, p.m);

    let mut rng = rng_from_seed(11);
    let strings = vec![BitVec::random(p.m, &mut rng), BitVec::random(p.m, &mut rng)];
    let inputs = PartyInputs::new(strings.clone(), 1);
    let out = run_c2p(&p, &inputs, &p.channel_config()?, 99)?;

    match &out.abort {
        Some(site) => println!("aborted at {}", site.key()),
        None => {
            println!("Bob decoded K_1 correctly: {}", out.k_hat.as_ref() == Some(&strings[1]));
            let unchosen = &out.key_inputs[0];
            let left = residual_min_entropy(&out, &secrecy_observers(&out), unchosen)?;
            println!("Bob+Eve miss {left} of the {} bits hashed into K_0 (need > {})", unchosen.len(), p.m);
        }
    }
    for m in out.transcript.messages() {
        println!("  {:<4} from {}", m.label, m.sender);
    }
    Ok(())
}

//! OT between Alice and Bob alone over a single erasure channel.

use wiretap_ot::protocol::{run_two_party, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let eps = 0.3;
    let p = ParamRequest::new(Variant::TwoParty, 0.25, eps, 1.0, 5000).derive()?;
    let inputs = PartyInputs::random(&p, &mut rng_from_seed(1));
    let out = run_two_party(&p, &inputs, &p.channel_config()?, 2)?;
    println!("capacity min(eps, 1 - eps) = {}, rate {:.3}", eps.min(1.0 - eps), p.rate());
    println!("aborted: {}, correct: {:?}", out.aborted(), out.correct());
    println!("Eve takes part: {}", out.eve.is_some());
    Ok(())
}

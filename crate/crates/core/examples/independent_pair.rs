//! Alice runs OT with Bob and Cathy over one broadcast; both decode and the
//! achieved rate pair falls inside the inner region.

use wiretap_ot::analysis::rate_region;
use wiretap_ot::protocol::{run_independent_pair, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let (e1, e2) = (0.7, 0.5);
    let p = ParamRequest::new(Variant::IndependentPair, 0.12, e1, e2, 20_000)
        .cathy_rate(0.16)
        .derive()?;
    let cathy = p.cathy.as_ref().expect("Cathy's rate was set");
    let (rb, rc) = (p.rate(), cathy.set_size as f64 / p.n as f64);
    let region = rate_region(e1, e2);
    println!("achieved (r_B, r_C) = ({rb:.4}, {rc:.4}), inside inner bound: {}", region.inner.contains(rb, rc));

    let inputs = PartyInputs::random(&p, &mut rng_from_seed(8));
    let out = run_independent_pair(&p, &inputs, &p.channel_config()?, 3)?;
    let u = out.choice();
    let w = out.cathy.as_ref().and_then(|c| c.cathy_choice).expect("Cathy chose");
    println!("Bob chose {u}, Cathy chose {w}; both decoded: {:?}", out.correct());
    Ok(())
}

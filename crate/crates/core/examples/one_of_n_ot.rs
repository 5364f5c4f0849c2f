//! 1-of-N transfer: capacity shrinks as N grows and Bob still gets exactly
//! the string he asked for.

use wiretap_ot::analysis::capacity::{c1p_n, c2p_n};
use wiretap_ot::protocol::{run_one_of_n, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let (e1, e2) = (0.6, 0.8);
    for k in 2..=5 {
        println!("N = {k}: C_2P = {:.4}, C_1P = {:.4}", c2p_n(e1, e2, k), c1p_n(e1, e2, k));
    }

    for variant in [Variant::OneOfN2p, Variant::OneOfN1p] {
        let r = 0.7 * if variant == Variant::OneOfN2p { c2p_n(e1, e2, 4) } else { c1p_n(e1, e2, 4) };
        let p = ParamRequest::new(variant, r, e1, e2, 8000).branches(4).derive()?;
        let inputs = PartyInputs::random(&p, &mut rng_from_seed(5));
        let out = run_one_of_n(&p, &inputs, &p.channel_config()?, 17)?;
        println!(
            "{variant}: m = {}, Bob chose {} of {}, correct = {:?}",
            p.m,
            out.choice(),
            p.branches,
            out.correct()
        );
    }
    Ok(())
}

//! The degraded channel, where Eve hears a further-erased copy of Bob's
//! output. Bob hides his selections behind a one-time pad that Alice can
//! still undo.

use wiretap_ot::analysis::capacity::{degraded_lower, degraded_upper};
use wiretap_ot::protocol::{run_degraded, ParamRequest, PartyInputs, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let (e1, e2) = (0.1, 0.6);
    println!("capacity in [{:.3}, {:.3}]", degraded_lower(e1, e2), degraded_upper(e1, e2));
    let p = ParamRequest::new(Variant::Degraded, 0.08, e1, e2, 30_000).derive()?;
    let counts = p.degraded.as_ref().expect("degraded counts");
    println!(
        "m = {}, |L_i| = {}, |Q| = {}, pad input {} bits",
        p.m, counts.selection, counts.q_len, counts.g_large
    );
    let cfg = p.channel_config()?;
    for seed in 0..3 {
        let inputs = PartyInputs::random(&p, &mut rng_from_seed(seed));
        let out = run_degraded(&p, &inputs, &cfg, seed)?;
        let recovered = out
            .key_inputs
            .iter()
            .zip(&out.selections)
            .all(|(k, l)| l.iter().all(|x| k.binary_search(x).is_ok()));
        println!(
            "seed {seed}: Alice recovered both selections: {recovered}, Bob correct: {:?}",
            out.correct()
        );
    }
    Ok(())
}

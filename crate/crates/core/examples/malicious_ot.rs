//! The two protocols secure against a cheating party: one for ε₁ ≤ ½ and
//! one for ε₁ > ½, both built on interactive hashing.

use wiretap_ot::protocol::{
    run_malicious_gt_half, run_malicious_le_half, search_block_length, HonestAlice, HonestBob, ParamRequest,
    PartyInputs, Variant,
};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let le = ParamRequest::new(Variant::MalLeHalf, 0.005, 0.4, 0.5, 3000).derive()?;
    println!(
        "eps1 <= 1/2: n = {}, beta n = {}, gamma n = {}, hashing {} bits, m = {}",
        le.n, le.beta_n, le.gamma_n, le.ih_bits, le.m
    );
    let inputs = PartyInputs::random(&le, &mut rng_from_seed(1));
    let out = run_malicious_le_half(&le, &inputs, &le.channel_config()?, 4, &mut HonestAlice, &mut HonestBob)?;
    println!("  aborted: {:?}, correct: {:?}", out.abort.as_ref().map(|a| a.key()), out.correct());

    // The ranked subsets must fill most of the hashing range, so pick n
    // where C(n, βn) sits just under a power of two.
    let probe = ParamRequest::new(Variant::MalGtHalf, 0.01, 0.7, 0.5, 2000).derive()?;
    let (n, density) = search_block_length(0.7, probe.delta, 2000, 100)?;
    let gt = ParamRequest::new(Variant::MalGtHalf, 0.02, 0.7, 0.5, n).delta(probe.delta).derive()?;
    println!(
        "eps1 > 1/2: n = {n} (range density {density:.3}), beta n = {}, m = {}",
        gt.beta_n, gt.m
    );
    let cfg = gt.channel_config()?;
    for seed in 0..4 {
        let inputs = PartyInputs::random(&gt, &mut rng_from_seed(seed + 50));
        let out = run_malicious_gt_half(&gt, &inputs, &cfg, seed, &mut HonestAlice, &mut HonestBob)?;
        println!("  seed {seed}: aborted: {:?}, correct: {:?}", out.abort.as_ref().map(|a| a.key()), out.correct());
    }
    Ok(())
}

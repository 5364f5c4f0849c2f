//! Cheating parties against the malicious-model protocols: a Bob who swaps
//! known positions into the other tuple, a Bob who colludes with Eve to pack
//! his subset with known positions, and an Alice with a biased input.

use wiretap_ot::adversary::AttackSpec;
use wiretap_ot::analysis::{monte_carlo, McConfig};
use wiretap_ot::protocol::{search_block_length, ParamRequest, Variant};

fn main() -> wiretap_ot::Result<()> {
    let le = ParamRequest::new(Variant::MalLeHalf, 0.005, 0.4, 0.5, 3000).derive()?;
    for attack in [AttackSpec::honest(), AttackSpec::bob_swap(30), AttackSpec::bob_swap(300), AttackSpec::alice_probe(0.8)] {
        let (s, _) = monte_carlo(&McConfig::new(le.clone(), 50, 1).with_attack(attack))?;
        println!(
            "{:<12} strength {:>5}: abort {:.2}, detected {:.2}",
            attack.kind.to_string(),
            attack.strength,
            s.abort_rate,
            s.detection_rate
        );
    }

    let probe = ParamRequest::new(Variant::MalGtHalf, 0.01, 0.7, 0.5, 2000).derive()?;
    let (n, _) = search_block_length(0.7, probe.delta, 2000, 100)?;
    let gt = ParamRequest::new(Variant::MalGtHalf, 0.02, 0.7, 0.5, n).delta(probe.delta).derive()?;
    let (s, _) = monte_carlo(&McConfig::new(gt.clone(), 50, 2).with_attack(AttackSpec::bob_pack()))?;
    println!(
        "bob_pack at n = {n}: {} of {} runs completed; Bob and Eve still miss at least {:?} bits beyond m",
        s.completed, s.trials, s.min_residual_margin
    );
    Ok(())
}

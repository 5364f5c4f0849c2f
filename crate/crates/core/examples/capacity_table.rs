//! OT capacities of the erasure broadcast channel at a few operating points,
//! including the 1-of-N generalization and the degraded-channel bounds.

use wiretap_ot::analysis::capacities;

fn main() -> wiretap_ot::Result<()> {
    println!("{:>5} {:>5} {:>8} {:>8} {:>14} {:>10}", "eps1", "eps2", "C_2P", "C_1P", "C_1P regime", "C_2P(N=4)");
    for (e1, e2) in [(0.2, 0.6), (0.4, 0.6), (0.5, 0.5), (0.7, 0.6), (0.9, 1.0)] {
        let c = capacities(e1, e2, 4)?;
        println!(
            "{e1:>5} {e2:>5} {:>8.4} {:>8.4} {:>14} {:>10.4}",
            c.c2p, c.c1p, c.c1p_regime, c.c2p_n
        );
    }

    let d = capacities(0.1, 0.6, 2)?;
    println!(
        "\ndegraded channel at (0.1, 0.6): {:.4} <= C <= {:.4} (tight: {})",
        d.degraded_lower, d.degraded_upper, d.degraded_tight
    );
    Ok(())
}

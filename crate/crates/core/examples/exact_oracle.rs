//! Exact leakage of the two tiny reference instances.

use std::time::Instant;

use wiretap_ot::analysis::{exact_leakage, OracleConfig};

fn main() -> wiretap_ot::Result<()> {
    for cfg in [OracleConfig::c2p(), OracleConfig::degraded()] {
        let t = Instant::now();
        let report = exact_leakage(&cfg)?;
        println!("{} (n = {}, {:.1?})", cfg.variant, cfg.n, t.elapsed());
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    Ok(())
}

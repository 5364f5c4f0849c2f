//! A JSON-configured sweep over ε₁ with rates set as a fraction of capacity,
//! written as provenance-stamped CSV.

use std::io;

use wiretap_ot::experiment::{run_experiment, write_summary, ExperimentConfig, Format};

const CONFIG: &str = r#"{
    "variant": "c1p",
    "eps1": {"start": 0.2, "stop": 0.8, "step": 0.2},
    "eps2": 0.6,
    "rate_fraction": 0.5,
    "n": [4000],
    "trials": 40,
    "master_seed": 9
}"#;

fn main() -> wiretap_ot::Result<()> {
    let cfg = ExperimentConfig::from_json(CONFIG)?;
    let runs = run_experiment(&cfg)?;
    write_summary(&cfg, &runs, Format::Csv, io::stdout())
}

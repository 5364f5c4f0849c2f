//! Many seeded sessions reduced to summary statistics and CSV.

use std::io;

use wiretap_ot::analysis::{monte_carlo, write_summary_csv, McConfig};
use wiretap_ot::protocol::{ParamRequest, Variant};

fn main() -> wiretap_ot::Result<()> {
    let mut rows = Vec::new();
    for n in [2000, 5000, 10_000] {
        let p = ParamRequest::new(Variant::C2p, 0.2, 0.5, 0.5, n).derive()?;
        let (stats, _) = monte_carlo(&McConfig::new(p, 100, 42))?;
        println!(
            "n = {n:>6}: abort {:.2}, margin mean {:.1}, min {:?}, histogram {:?}",
            stats.abort_rate,
            stats.mean_residual_margin.unwrap_or(f64::NAN),
            stats.min_residual_margin,
            stats.margin_histogram.iter().take(4).collect::<Vec<_>>()
        );
        rows.push(stats);
    }
    write_summary_csv(&rows, io::stdout())
}

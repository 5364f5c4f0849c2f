//! Capacities, rate regions, exact leakage oracles and Monte-Carlo runs.

pub mod capacity;
pub mod montecarlo;
pub mod oracle;
pub mod region;

pub use capacity::{capacities, CapacityReport};
pub use montecarlo::{
    monte_carlo, residual_min_entropy, run_trials, write_summary_csv, write_trials_csv, McConfig, Stats, TrialRecord,
};
pub use oracle::{exact_leakage, LeakageReport, OracleConfig};
pub use region::{rate_region, Pentagon, RateRegion};

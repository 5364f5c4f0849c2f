//! Command-line runner: capacity tables, Monte-Carlo simulations, exact
//! leakage oracles and the interactive-hashing property suite.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{Map, Value};
use wiretap_ot::analysis::{exact_leakage, OracleConfig};
use wiretap_ot::experiment::{
    capacity_rows, ih_property_suite, run_experiment, write_capacity_csv, write_summary, write_trials,
    ExperimentConfig, Format, Provenance, Sweep,
};
use wiretap_ot::rng::rng_from_seed;
use wiretap_ot::Error;

const EXIT_CONFIG: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_PROPERTY: u8 = 4;

#[derive(Parser)]
#[command(name = "wiretap-ot", version, about = "Oblivious transfer over wiretapped erasure broadcast channels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity values at one point or over a grid.
    Capacity(CapacityArgs),
    /// Monte-Carlo runs of a protocol, honest or under attack.
    Simulate(Box<SimulateArgs>),
    /// Exact leakage of a tiny instance by full enumeration.
    Oracle(OracleArgs),
    /// Checks the interactive-hashing properties.
    IhCheck(IhArgs),
}

#[derive(clap::Args)]
struct CapacityArgs {
    #[arg(long, required_unless_present = "grid")]
    eps1: Option<f64>,
    #[arg(long, required_unless_present = "grid")]
    eps2: Option<f64>,
    /// Number of sender strings for the 1-of-N columns.
    #[arg(long, default_value_t = 2)]
    branches: usize,
    /// Emit one row per grid point `step, 2·step, ... < 1` on both axes.
    #[arg(long, value_name = "STEP")]
    grid: Option<f64>,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// JSON experiment config; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    variant: Option<String>,
    /// A value, a list `a,b` or a range `start:stop:step`.
    #[arg(long)]
    eps1: Option<Sweep>,
    #[arg(long)]
    eps2: Option<Sweep>,
    #[arg(long, conflicts_with = "rate_fraction")]
    r: Option<f64>,
    /// Rate as a fraction of the variant's capacity.
    #[arg(long)]
    rate_fraction: Option<f64>,
    /// Cathy's rate in the independent pair.
    #[arg(long)]
    r_c: Option<f64>,
    /// Block lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long)]
    branches: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    delta_tilde: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    master_seed: Option<u64>,
    /// honest, bob_swap, bob_pack or alice_probe.
    #[arg(long)]
    attack: Option<String>,
    /// Swapped slots for bob_swap, bias for alice_probe.
    #[arg(long)]
    attack_strength: Option<f64>,
    /// Summary file; standard output when absent.
    #[arg(long)]
    summary: Option<String>,
    /// Per-trial file.
    #[arg(long)]
    trials_out: Option<String>,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(clap::Args)]
struct OracleArgs {
    /// JSON oracle config; flags override its fields.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Starting configuration: c2p or degraded.
    #[arg(long, default_value = "c2p")]
    preset: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eps1: Option<f64>,
    #[arg(long)]
    eps2: Option<f64>,
    #[arg(long)]
    selection: Option<usize>,
    #[arg(long)]
    key_len: Option<usize>,
    #[arg(long)]
    g_large: Option<usize>,
    #[arg(long)]
    g_small: Option<usize>,
    #[arg(long)]
    x_bias: Option<f64>,
    /// Largest number of enumeration leaves allowed.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct IhArgs {
    /// Largest k for the exhaustive checks (at most 4).
    #[arg(long, default_value_t = 4)]
    k_max: usize,
    /// Input lengths for the sampled adversary (at most 12).
    #[arg(long, value_delimiter = ',', default_value = "8,10,12")]
    sampled_k: Vec<usize>,
    /// Good-set densities as negative powers of two.
    #[arg(long, value_delimiter = ',', default_value = "3,5")]
    densities: Vec<u32>,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    master_seed: u64,
    /// JSON report file.
    #[arg(long)]
    output: Option<PathBuf>,
}

enum Failure {
    Lib(Error),
    Config(String),
    Property,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<(), Failure>;

fn open(path: Option<&std::path::Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::Lib(Error::Io(format!("{}: {e}", p.display())))),
    }
}

fn read_json(path: &std::path::Path) -> Result<Map<String, Value>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(Failure::Config(format!("{}: expected a JSON object", path.display()))),
        Err(e) => Err(Failure::Config(format!("{}: {e}", path.display()))),
    }
}

fn set<T: serde::Serialize>(map: &mut Map<String, Value>, key: &str, value: Option<T>) {
    if let Some(v) = value {
        map.insert(key.to_string(), serde_json::to_value(v).expect("plain data"));
    }
}

fn capacity(args: CapacityArgs) -> Outcome {
    let rows = capacity_rows(args.eps1.unwrap_or(0.0), args.eps2.unwrap_or(0.0), args.branches, args.grid)?;
    let config = serde_json::json!({
        "eps1": args.eps1, "eps2": args.eps2, "branches": args.branches, "grid": args.grid,
    });
    let prov = Provenance::new(config, None);
    let out = open(args.output.as_deref())?;
    match args.format {
        Format::Csv => write_capacity_csv(&rows, &prov, out)?,
        Format::Json => prov.write_json("capacities", &rows, out)?,
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> Outcome {
    let mut map = match &args.config {
        Some(p) => read_json(p)?,
        None => Map::new(),
    };
    set(&mut map, "variant", args.variant);
    set(&mut map, "eps1", args.eps1);
    set(&mut map, "eps2", args.eps2);
    if args.r.is_some() {
        map.remove("rate_fraction");
        set(&mut map, "r", args.r);
    }
    if args.rate_fraction.is_some() {
        map.remove("r");
        set(&mut map, "rate_fraction", args.rate_fraction);
    }
    set(&mut map, "r_c", args.r_c);
    set(&mut map, "n", args.n);
    set(&mut map, "branches", args.branches);
    set(&mut map, "delta", args.delta);
    set(&mut map, "delta_tilde", args.delta_tilde);
    set(&mut map, "trials", args.trials);
    set(&mut map, "master_seed", args.master_seed);
    if args.attack.is_some() || args.attack_strength.is_some() {
        let attack = map.entry("attack").or_insert_with(|| serde_json::json!({"kind": "honest"}));
        if let Value::Object(a) = attack {
            set(a, "kind", args.attack);
            set(a, "strength", args.attack_strength);
        }
    }
    let output = map.entry("output").or_insert_with(|| Value::Object(Map::new()));
    if let Value::Object(o) = output {
        set(o, "summary", args.summary);
        set(o, "trials", args.trials_out);
        set(o, "format", args.format);
    }
    let cfg: ExperimentConfig =
        serde_json::from_value(Value::Object(map)).map_err(|e| Failure::Config(format!("config: {e}")))?;

    // Fail on unwritable paths before spending time on trials.
    let format = cfg.output.format;
    let summary_path = cfg.output.summary.as_ref().map(PathBuf::from);
    let trials_path = cfg.output.trials.as_ref().map(PathBuf::from);
    let summary_out = open(summary_path.as_deref())?;
    let trials_out = trials_path.as_deref().map(|p| open(Some(p))).transpose()?;
    let runs = run_experiment(&cfg)?;
    write_summary(&cfg, &runs, format, summary_out)?;
    if let Some(out) = trials_out {
        write_trials(&cfg, &runs, format, out)?;
    }
    Ok(())
}

fn oracle(args: OracleArgs) -> Outcome {
    let mut map = match (&args.config, args.preset.as_str()) {
        (Some(p), _) => read_json(p)?,
        (None, "c2p") => to_map(&OracleConfig::c2p()),
        (None, "degraded") => to_map(&OracleConfig::degraded()),
        (None, other) => return Err(Failure::Config(format!("unknown preset `{other}`, expected c2p or degraded"))),
    };
    set(&mut map, "n", args.n);
    set(&mut map, "eps1", args.eps1);
    set(&mut map, "eps2", args.eps2);
    set(&mut map, "selection", args.selection);
    set(&mut map, "key_len", args.key_len);
    set(&mut map, "g_large", args.g_large);
    set(&mut map, "g_small", args.g_small);
    set(&mut map, "x_bias", args.x_bias);
    set(&mut map, "budget", args.budget);
    let cfg: OracleConfig =
        serde_json::from_value(Value::Object(map)).map_err(|e| Failure::Config(format!("config: {e}")))?;
    let out = open(args.output.as_deref())?;
    let report = exact_leakage(&cfg)?;
    Provenance::new(&cfg, None).write_json("report", &report, out)?;
    Ok(())
}

fn to_map(cfg: &OracleConfig) -> Map<String, Value> {
    match serde_json::to_value(cfg) {
        Ok(Value::Object(m)) => m,
        _ => unreachable!("oracle configs serialize to objects"),
    }
}

fn ih_check(args: IhArgs) -> Outcome {
    let mut rng = rng_from_seed(args.master_seed);
    let suite = ih_property_suite(args.k_max, &args.sampled_k, &args.densities, args.trials, &mut rng)?;
    for c in &suite.checks {
        println!(
            "property {} ({}): {} [{}; {}]",
            c.property,
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.method,
            c.detail
        );
    }
    if let Some(path) = &args.output {
        let config = serde_json::json!({
            "k_max": args.k_max, "sampled_k": args.sampled_k, "densities": args.densities, "trials": args.trials,
        });
        Provenance::new(config, Some(args.master_seed)).write_json("suite", &suite, open(Some(path))?)?;
    }
    if suite.passed() {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Capacity(a) => capacity(a),
        Command::Simulate(a) => simulate(*a),
        Command::Oracle(a) => oracle(a),
        Command::IhCheck(a) => ih_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => {
            eprintln!("error: property check failed");
            ExitCode::from(EXIT_PROPERTY)
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::BudgetExceeded { .. } | Error::Io(_) => EXIT_RESOURCE,
                Error::Conflict(_) | Error::Replay(_) | Error::RankDeficient { .. } => 1,
                _ => EXIT_CONFIG,
            })
        }
    }
}

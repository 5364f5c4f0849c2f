//! Batch experiments: sweep configuration, rate resolution, the
//! interactive-hashing property suite and provenance-stamped output files.
//!
//! CSV outputs start with `#` comment lines carrying the tool version, the
//! master seed and the configuration as JSON; JSON outputs wrap their payload
//! in an object with a `provenance` field.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::AttackSpec;
use crate::analysis::capacity::{capacities, variant_capacity, CapacityReport};
use crate::analysis::montecarlo::{monte_carlo, write_summary_csv, write_trials_csv, McConfig, Stats, TrialRecord};
use crate::error::{Error, Result};
use crate::ih::{greedy_hit_rate, ih_exhaustive_check, ExhaustiveReport, HitRateReport};
use crate::protocol::{ParamRequest, ProtocolParams, Variant};

/// Version of the library, stamped into every output file.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest `k` for exhaustive interactive-hashing checks.
pub const IH_EXHAUSTIVE_MAX: usize = 4;
/// Largest `k` for the sampled adversary check.
pub const IH_SAMPLED_MAX: usize = 12;

/// A scalar, an explicit list, or an inclusive arithmetic range.
///
/// In JSON: `0.5`, `[0.1, 0.3]` or `{"start": 0.1, "stop": 0.5, "step": 0.1}`.
/// On the command line: `0.5`, `0.1,0.3` or `0.1:0.5:0.1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Sweep {
    Value(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl Sweep {
    /// The points of the sweep, in order.
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Sweep::Value(v) => Ok(vec![*v]),
            Sweep::List(v) if v.is_empty() => Err(Error::InvalidParams("empty sweep list".into())),
            Sweep::List(v) => Ok(v.clone()),
            &Sweep::Range { start, stop, step } => {
                if !(step > 0.0) || !(start <= stop) || !start.is_finite() || !stop.is_finite() {
                    return Err(Error::InvalidParams(format!(
                        "sweep range {start}:{stop}:{step} needs start <= stop and step > 0"
                    )));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                // Rounded to 12 decimals so `0.05 * 3` prints as `0.15`.
                Ok((0..count)
                    .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
                    .collect())
            }
        }
    }
}

impl FromStr for Sweep {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidParams(format!("`{t}` is not a number")))
        };
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            let [a, b, c] = parts.as_slice() else {
                return Err(Error::InvalidParams(format!("range `{s}` must be start:stop:step")));
            };
            return Ok(Sweep::Range {
                start: num(a)?,
                stop: num(b)?,
                step: num(c)?,
            });
        }
        if s.contains(',') {
            return s.split(',').map(num).collect::<Result<Vec<_>>>().map(Sweep::List);
        }
        num(s).map(Sweep::Value)
    }
}

/// One or more block lengths.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BlockLengths {
    One(usize),
    Many(Vec<usize>),
}

impl BlockLengths {
    pub fn values(&self) -> Vec<usize> {
        match self {
            BlockLengths::One(n) => vec![*n],
            BlockLengths::Many(v) => v.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParams(format!("unknown format `{s}`, expected csv or json"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Where a simulation writes. A missing summary path means standard output.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub summary: Option<String>,
    #[serde(default)]
    pub trials: Option<String>,
    #[serde(default)]
    pub format: Format,
}

fn two() -> usize {
    2
}

/// A Monte-Carlo experiment over the cartesian product of `eps1 × eps2 × n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub variant: Variant,
    pub eps1: Sweep,
    pub eps2: Sweep,
    /// Absolute rate. Exactly one of `r` and `rate_fraction` must be set.
    #[serde(default)]
    pub r: Option<f64>,
    /// Rate as a fraction of the variant's capacity at each sweep point.
    #[serde(default)]
    pub rate_fraction: Option<f64>,
    /// Cathy's rate (independent pair only).
    #[serde(default)]
    pub r_c: Option<f64>,
    pub n: BlockLengths,
    #[serde(default = "two")]
    pub branches: usize,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub delta_tilde: Option<f64>,
    pub trials: usize,
    #[serde(default)]
    pub attack: AttackSpec,
    pub master_seed: u64,
    #[serde(default)]
    pub output: OutputSpec,
}

/// One resolved point of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub eps1: f64,
    pub eps2: f64,
    pub n: usize,
    pub r: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("config: {e}")))
    }

    /// Every sweep point with its resolved absolute rate.
    pub fn points(&self) -> Result<Vec<SweepPoint>> {
        if self.trials == 0 {
            return Err(Error::InvalidParams("trials must be positive".into()));
        }
        let ns = self.n.values();
        if ns.is_empty() {
            return Err(Error::InvalidParams("no block lengths given".into()));
        }
        let mut out = Vec::new();
        for eps1 in self.eps1.values()? {
            for eps2 in self.eps2.values()? {
                let r = match (self.r, self.rate_fraction) {
                    (Some(r), None) => r,
                    (None, Some(f)) if f > 0.0 && f < 1.0 => f * variant_capacity(self.variant, eps1, eps2, self.branches),
                    (None, Some(f)) => {
                        return Err(Error::InvalidParams(format!("rate_fraction {f} must lie in (0, 1)")));
                    }
                    _ => return Err(Error::InvalidParams("set exactly one of r and rate_fraction".into())),
                };
                out.extend(ns.iter().map(|&n| SweepPoint { eps1, eps2, n, r }));
            }
        }
        Ok(out)
    }

    /// Protocol parameters for one sweep point.
    pub fn params(&self, point: &SweepPoint) -> Result<ProtocolParams> {
        let mut req = ParamRequest::new(self.variant, point.r, point.eps1, point.eps2, point.n).branches(self.branches);
        if let Some(d) = self.delta {
            req = req.delta(d);
        }
        if let Some(d) = self.delta_tilde {
            req = req.delta_tilde(d);
        }
        if let Some(rc) = self.r_c {
            req = req.cathy_rate(rc);
        }
        req.derive()
    }

    /// Monte-Carlo configurations for every point, validated up front.
    pub fn plan(&self) -> Result<Vec<McConfig>> {
        self.points()?
            .iter()
            .map(|pt| {
                let params = self.params(pt)?;
                self.attack.validate(&params)?;
                Ok(McConfig::new(params, self.trials, self.master_seed).with_attack(self.attack))
            })
            .collect()
    }
}

/// Results of every point of an experiment, in sweep order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<(Stats, Vec<TrialRecord>)>> {
    cfg.plan()?.iter().map(monte_carlo).collect()
}

/// Tool name, version, seed and the configuration that produced a file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance<C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub master_seed: Option<u64>,
    pub config: C,
}

impl<C: Serialize> Provenance<C> {
    pub fn new(config: C, master_seed: Option<u64>) -> Self {
        Provenance {
            tool: "wiretap-ot",
            version: VERSION,
            master_seed,
            config,
        }
    }

    /// The `#` comment lines that open a CSV file.
    pub fn write_csv_header<W: Write>(&self, out: &mut W) -> Result<()> {
        let config = serde_json::to_string(&self.config).map_err(|e| Error::Io(e.to_string()))?;
        let seed = self.master_seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        write!(out, "# {} {}\n# master_seed: {seed}\n# config: {config}\n", self.tool, self.version)
            .map_err(|e| Error::Io(e.to_string()))
    }

    /// `{"provenance": ..., key: payload}` as pretty JSON.
    pub fn write_json<W: Write, T: Serialize>(&self, key: &str, payload: &T, mut out: W) -> Result<()> {
        let value = serde_json::json!({ "provenance": self, key: payload });
        serde_json::to_writer_pretty(&mut out, &value).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Writes the experiment summary in `format`.
pub fn write_summary<W: Write>(
    cfg: &ExperimentConfig,
    runs: &[(Stats, Vec<TrialRecord>)],
    format: Format,
    mut out: W,
) -> Result<()> {
    let prov = Provenance::new(cfg, Some(cfg.master_seed));
    let stats: Vec<Stats> = runs.iter().map(|(s, _)| s.clone()).collect();
    match format {
        Format::Csv => {
            prov.write_csv_header(&mut out)?;
            write_summary_csv(&stats, out)
        }
        Format::Json => prov.write_json("summary", &stats, out),
    }
}

/// Writes one record per trial in `format`.
pub fn write_trials<W: Write>(
    cfg: &ExperimentConfig,
    runs: &[(Stats, Vec<TrialRecord>)],
    format: Format,
    mut out: W,
) -> Result<()> {
    let prov = Provenance::new(cfg, Some(cfg.master_seed));
    match format {
        Format::Csv => {
            prov.write_csv_header(&mut out)?;
            write_trials_csv(runs, out)
        }
        Format::Json => {
            let trials: Vec<&Vec<TrialRecord>> = runs.iter().map(|(_, r)| r).collect();
            prov.write_json("trials", &trials, out)
        }
    }
}

/// Capacity rows for one point, or for a `step`-spaced grid over the open
/// unit square.
pub fn capacity_rows(eps1: f64, eps2: f64, branches: usize, grid: Option<f64>) -> Result<Vec<CapacityReport>> {
    let Some(step) = grid else {
        return Ok(vec![capacities(eps1, eps2, branches)?]);
    };
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::InvalidParams(format!("grid step {step} must lie in (0, 1)")));
    }
    let axis = Sweep::Range {
        start: step,
        stop: 1.0 - step / 2.0,
        step,
    }
    .values()?;
    let mut rows = Vec::with_capacity(axis.len() * axis.len());
    for &e1 in &axis {
        for &e2 in &axis {
            rows.push(capacities(e1, e2, branches)?);
        }
    }
    Ok(rows)
}

/// Capacity rows as CSV.
pub fn write_capacity_csv<W: Write, C: Serialize>(rows: &[CapacityReport], prov: &Provenance<C>, mut out: W) -> Result<()> {
    prov.write_csv_header(&mut out)?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// The outcome of one interactive-hashing property.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyCheck {
    pub property: u8,
    pub name: &'static str,
    pub method: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IhSuite {
    pub checks: Vec<PropertyCheck>,
    pub exhaustive: Vec<ExhaustiveReport>,
    pub sampled: Vec<HitRateReport>,
}

impl IhSuite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Exhaustive checks of Properties 1 to 4 for `k = 2..=k_max` and the greedy
/// adversary of Property 5 at each of `sampled_k` and good-set densities
/// `2^-d` for `d` in `densities_log2`.
pub fn ih_property_suite<R: Rng + ?Sized>(
    k_max: usize,
    sampled_k: &[usize],
    densities_log2: &[u32],
    trials: usize,
    rng: &mut R,
) -> Result<IhSuite> {
    if !(2..=IH_EXHAUSTIVE_MAX).contains(&k_max) {
        return Err(Error::InvalidParams(format!(
            "exhaustive checks need 2 <= k_max <= {IH_EXHAUSTIVE_MAX}, got {k_max}"
        )));
    }
    if let Some(&k) = sampled_k.iter().find(|&&k| !(2..=IH_SAMPLED_MAX).contains(&k)) {
        return Err(Error::InvalidParams(format!("sampled k = {k} is outside [2, {IH_SAMPLED_MAX}]")));
    }
    if let Some(&d) = densities_log2.iter().find(|&&d| d == 0) {
        return Err(Error::InvalidParams(format!("density 2^-{d} leaves no bad strings")));
    }
    let exhaustive = (2..=k_max).map(ih_exhaustive_check).collect::<Result<Vec<_>>>()?;
    let mut sampled = Vec::new();
    for &k in sampled_k {
        for &d in densities_log2 {
            if (d as usize) < k {
                sampled.push(greedy_hit_rate(k, d, trials, rng)?);
            }
        }
    }
    let ks = format!("k = 2..{k_max}");
    let total: usize = exhaustive.iter().map(|r| r.matrices).sum();
    let exact = |property, name, pick: fn(&ExhaustiveReport) -> bool| PropertyCheck {
        property,
        name,
        method: "exhaustive".into(),
        passed: exhaustive.iter().all(pick),
        detail: format!("{ks}, {total} matrices, every input"),
    };
    let mut checks = vec![
        exact(1, "outputs differ", |r| r.distinct_outputs),
        exact(2, "input is an output", |r| r.input_recovered),
        exact(3, "co-output uniform", |r| r.co_output_uniform),
        exact(4, "choice bit uniform given receiver view", |r| r.phi_uniform),
    ];
    let worst = sampled
        .iter()
        .map(|r| r.hit_rate / r.bound)
        .fold(0.0f64, f64::max);
    checks.push(PropertyCheck {
        property: 5,
        name: "greedy sender hit rate within bound",
        method: "sampled".into(),
        passed: !sampled.is_empty() && sampled.iter().all(|r| r.passed()),
        detail: format!("{} configurations x {trials} trials, worst rate/bound {worst:.3}", sampled.len()),
    });
    Ok(IhSuite {
        checks,
        exhaustive,
        sampled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn sweep_syntax() {
        assert_eq!("0.5".parse::<Sweep>().unwrap().values().unwrap(), vec![0.5]);
        assert_eq!("0.1,0.3".parse::<Sweep>().unwrap().values().unwrap(), vec![0.1, 0.3]);
        assert_eq!(
            "0.1:0.5:0.1".parse::<Sweep>().unwrap().values().unwrap(),
            vec![0.1, 0.2, 0.3, 0.4, 0.5]
        );
        assert!("0.5:0.1:0.1".parse::<Sweep>().unwrap().values().is_err());
        assert!("a".parse::<Sweep>().is_err());
        assert!("1:2".parse::<Sweep>().is_err());
    }

    #[test]
    fn capacity_grid_has_361_rows() {
        let rows = capacity_rows(0.0, 0.0, 2, Some(0.05)).unwrap();
        assert_eq!(rows.len(), 361);
        assert!((rows[0].eps1 - 0.05).abs() < 1e-12 && (rows[360].eps2 - 0.95).abs() < 1e-12);
    }

    #[test]
    fn config_from_json() {
        let cfg = ExperimentConfig::from_json(
            r#"{"variant": "c2p", "eps1": {"start": 0.3, "stop": 0.5, "step": 0.1}, "eps2": 0.5,
                "rate_fraction": 0.5, "n": [1000, 2000], "trials": 3, "master_seed": 7}"#,
        )
        .unwrap();
        let pts = cfg.points().unwrap();
        assert_eq!(pts.len(), 6);
        assert!((pts[0].r - 0.5 * 0.5 * 0.3).abs() < 1e-12);
        assert_eq!(cfg.plan().unwrap().len(), 6);
        assert!(ExperimentConfig::from_json(r#"{"variant": "c2p"}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"variant": "c2p", "eps1": 0.5, "eps2": 0.5, "n": 10, "trials": 1, "master_seed": 1, "bogus": 1}"#).is_err());
    }

    #[test]
    fn rate_must_be_given_once() {
        let mut cfg = ExperimentConfig::from_json(
            r#"{"variant": "c2p", "eps1": 0.5, "eps2": 0.5, "r": 0.1, "n": 1000, "trials": 1, "master_seed": 1}"#,
        )
        .unwrap();
        assert!(cfg.points().is_ok());
        cfg.rate_fraction = Some(0.5);
        assert!(cfg.points().is_err());
        cfg.r = None;
        cfg.rate_fraction = Some(1.0);
        assert!(cfg.points().is_err());
    }

    #[test]
    fn csv_outputs_carry_provenance() {
        let cfg = ExperimentConfig::from_json(
            r#"{"variant": "c2p", "eps1": 0.5, "eps2": 0.5, "r": 0.1, "n": 1000, "trials": 2, "master_seed": 5}"#,
        )
        .unwrap();
        let runs = run_experiment(&cfg).unwrap();
        let mut out = Vec::new();
        write_summary(&cfg, &runs, Format::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], format!("# wiretap-ot {VERSION}"));
        assert_eq!(lines[1], "# master_seed: 5");
        assert!(lines[2].starts_with("# config: {"));
        assert!(lines[3].starts_with("variant,attack,n,eps1,eps2,rate,trials,correct_rate"));
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn small_ih_suite_passes() {
        let suite = ih_property_suite(3, &[6], &[2], 200, &mut rng_from_seed(1)).unwrap();
        assert!(suite.passed(), "{:?}", suite.checks);
        assert_eq!(suite.checks.len(), 5);
        assert!(ih_property_suite(5, &[8], &[3], 1, &mut rng_from_seed(1)).is_err());
        assert!(ih_property_suite(3, &[13], &[3], 1, &mut rng_from_seed(1)).is_err());
    }
}

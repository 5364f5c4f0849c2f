//! Monte-Carlo runs of the session engine.
//!
//! Trial `i` uses session seed [`trial_seed`]`(master_seed, i)` and inputs
//! drawn from that seed's input stream, so results do not depend on how
//! trials are spread across threads.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::{merge_views, run_attack, AttackSpec};
use crate::error::{Error, Result};
use crate::hash::pa_leakage;
use crate::protocol::{Party, PartyInputs, ProtocolParams, SessionOutcome, Variant};
use crate::rng::{stream_rng, trial_seed, Stream};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub params: ProtocolParams,
    #[serde(default)]
    pub attack: AttackSpec,
    pub trials: usize,
    pub master_seed: u64,
}

impl McConfig {
    pub fn new(params: ProtocolParams, trials: usize, master_seed: u64) -> Self {
        McConfig {
            params,
            attack: AttackSpec::honest(),
            trials,
            master_seed,
        }
    }

    pub fn with_attack(mut self, attack: AttackSpec) -> Self {
        self.attack = attack;
        self
    }
}

/// Count of positions of `selection` erased in the merged channel view of
/// `observers`: the conditional Rényi entropy, in bits, of `X` there.
pub fn residual_min_entropy(outcome: &SessionOutcome, observers: &[Party], selection: &[usize]) -> Result<usize> {
    if let Some(&p) = selection.iter().find(|&&p| p >= outcome.params.n) {
        return Err(Error::OutOfRange(format!("position {p} outside a block of {}", outcome.params.n)));
    }
    let view = merge_views(outcome, observers)?;
    Ok(match view.observations()? {
        Some(obs) => obs.count_erased_in(selection),
        None => selection.len(),
    })
}

/// The coalition whose knowledge bounds the secrecy of the unchosen strings.
pub fn secrecy_observers(outcome: &SessionOutcome) -> Vec<Party> {
    let mut parties = vec![Party::Bob];
    let two_private = matches!(
        outcome.variant,
        Variant::C2p | Variant::OneOfN2p | Variant::MalLeHalf | Variant::MalGtHalf
    );
    if two_private && outcome.eve.is_some() {
        parties.push(Party::Eve);
    }
    if outcome.variant == Variant::IndependentPair && outcome.cathy.is_some() {
        parties.push(Party::Cathy);
    }
    parties
}

/// Per-trial summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: u64,
    pub seed: u64,
    pub aborted: bool,
    pub abort_site: Option<String>,
    pub detected: bool,
    pub correct: Option<bool>,
    /// Smallest residual entropy over the unchosen keys' inputs.
    pub residual: Option<usize>,
    /// `residual − m`.
    pub margin: Option<i64>,
    /// Privacy-amplification bound on the unchosen key's leakage, in bits.
    pub leakage_bound: Option<f64>,
}

impl TrialRecord {
    pub fn from_outcome(index: u64, outcome: &SessionOutcome) -> Result<Self> {
        let mut residual = None;
        if !outcome.aborted() && !outcome.key_inputs.is_empty() {
            let observers = secrecy_observers(outcome);
            let u = outcome.choice();
            for (i, inputs) in outcome.key_inputs.iter().enumerate() {
                if i != u {
                    let c = residual_min_entropy(outcome, &observers, inputs)?;
                    residual = Some(residual.map_or(c, |r: usize| r.min(c)));
                }
            }
        }
        let m = outcome.params.m;
        Ok(TrialRecord {
            index,
            seed: outcome.seed,
            aborted: outcome.aborted(),
            abort_site: outcome.abort.as_ref().map(|a| a.key()),
            detected: outcome.abort.as_ref().is_some_and(|a| a.detection),
            correct: outcome.correct(),
            residual,
            margin: residual.map(|c| c as i64 - m as i64),
            leakage_bound: residual.map(|c| pa_leakage(m, c as f64)),
        })
    }
}

/// Runs `cfg.trials` sessions and maps each outcome through `f`, in trial
/// order.
pub fn run_trials<T, F>(cfg: &McConfig, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &SessionOutcome) -> Result<T> + Sync,
{
    if cfg.trials == 0 {
        return Err(Error::InvalidParams("at least one trial is needed".into()));
    }
    cfg.attack.validate(&cfg.params)?;
    let channel = cfg.params.channel_config()?;
    (0..cfg.trials as u64)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.master_seed, i);
            let inputs = PartyInputs::random(&cfg.params, &mut stream_rng(seed, Stream::Inputs));
            let outcome = run_attack(&cfg.params, &inputs, &channel, seed, &cfg.attack)?;
            f(i, &outcome)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub variant: Variant,
    pub eps1: f64,
    pub eps2: f64,
    pub n: usize,
    pub m: usize,
    pub rate: f64,
    pub attack: AttackSpec,
    pub master_seed: u64,
    pub trials: usize,
    pub aborts: usize,
    pub abort_sites: BTreeMap<String, usize>,
    pub completed: usize,
    pub correct: usize,
    pub detected: usize,
    pub correct_rate: Option<f64>,
    pub abort_rate: f64,
    pub detection_rate: f64,
    pub mean_residual_margin: Option<f64>,
    pub min_residual_margin: Option<i64>,
    /// `(lower edge, count)` pairs of equal-width margin bins.
    pub margin_histogram: Vec<(i64, usize)>,
}

const HISTOGRAM_BINS: i64 = 20;

impl Stats {
    pub fn from_records(cfg: &McConfig, records: &[TrialRecord]) -> Self {
        let p = &cfg.params;
        let mut abort_sites = BTreeMap::new();
        for site in records.iter().filter_map(|r| r.abort_site.as_ref()) {
            *abort_sites.entry(site.clone()).or_insert(0) += 1;
        }
        let trials = records.len();
        let aborts = records.iter().filter(|r| r.aborted).count();
        let completed = trials - aborts;
        let correct = records.iter().filter(|r| r.correct == Some(true)).count();
        let detected = records.iter().filter(|r| r.detected).count();
        let margins: Vec<i64> = records.iter().filter_map(|r| r.margin).collect();
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        Stats {
            variant: p.variant,
            eps1: p.eps1,
            eps2: p.eps2,
            n: p.n,
            m: p.m,
            rate: p.rate(),
            attack: cfg.attack,
            master_seed: cfg.master_seed,
            trials,
            aborts,
            abort_sites,
            completed,
            correct,
            detected,
            correct_rate: (completed > 0).then(|| ratio(correct, completed)),
            abort_rate: ratio(aborts, trials),
            detection_rate: ratio(detected, trials),
            mean_residual_margin: (!margins.is_empty())
                .then(|| margins.iter().map(|&m| m as f64).sum::<f64>() / margins.len() as f64),
            min_residual_margin: margins.iter().copied().min(),
            margin_histogram: histogram(&margins),
        }
    }
}

fn histogram(values: &[i64]) -> Vec<(i64, usize)> {
    let (Some(&lo), Some(&hi)) = (values.iter().min(), values.iter().max()) else {
        return Vec::new();
    };
    let width = ((hi - lo + 1) + HISTOGRAM_BINS - 1) / HISTOGRAM_BINS;
    let bins = ((hi - lo) / width + 1) as usize;
    let mut counts = vec![0usize; bins];
    for &v in values {
        counts[((v - lo) / width) as usize] += 1;
    }
    counts.into_iter().enumerate().map(|(i, c)| (lo + i as i64 * width, c)).collect()
}

/// Runs the configured trials and reduces them to per-trial records and
/// summary statistics.
pub fn monte_carlo(cfg: &McConfig) -> Result<(Stats, Vec<TrialRecord>)> {
    let records = run_trials(cfg, TrialRecord::from_outcome)?;
    Ok((Stats::from_records(cfg, &records), records))
}

fn fmt_opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One summary row per configuration. `detection_rate` is included when any
/// row comes from an attack run.
pub fn write_summary_csv<W: Write>(stats: &[Stats], out: W) -> Result<()> {
    let attacks = stats.iter().any(|s| !s.attack.is_honest());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec![
        "variant",
        "attack",
        "n",
        "eps1",
        "eps2",
        "rate",
        "trials",
        "correct_rate",
        "abort_rate",
        "mean_residual_margin",
    ];
    if attacks {
        header.push("detection_rate");
    }
    w.write_record(&header).map_err(csv_error)?;
    for s in stats {
        let mut row = vec![
            s.variant.to_string(),
            s.attack.kind.to_string(),
            s.n.to_string(),
            s.eps1.to_string(),
            s.eps2.to_string(),
            s.rate.to_string(),
            s.trials.to_string(),
            fmt_opt(s.correct_rate),
            s.abort_rate.to_string(),
            fmt_opt(s.mean_residual_margin),
        ];
        if attacks {
            row.push(s.detection_rate.to_string());
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// One row per trial, prefixed with the configuration the trial belongs to.
pub fn write_trials_csv<W: Write>(runs: &[(Stats, Vec<TrialRecord>)], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "variant",
        "attack",
        "n",
        "eps1",
        "eps2",
        "index",
        "seed",
        "aborted",
        "abort_site",
        "detected",
        "correct",
        "residual",
        "margin",
        "leakage_bound",
    ])
    .map_err(csv_error)?;
    for (s, records) in runs {
        for r in records {
            w.write_record([
                s.variant.to_string(),
                s.attack.kind.to_string(),
                s.n.to_string(),
                s.eps1.to_string(),
                s.eps2.to_string(),
                r.index.to_string(),
                r.seed.to_string(),
                r.aborted.to_string(),
                r.abort_site.clone().unwrap_or_default(),
                r.detected.to_string(),
                fmt_opt(r.correct),
                fmt_opt(r.residual),
                fmt_opt(r.margin),
                fmt_opt(r.leakage_bound),
            ])
            .map_err(csv_error)?;
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

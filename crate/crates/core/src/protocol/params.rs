//! Protocol variants and parameter derivation.
//!
//! Every variant takes a target rate `r` and a block length `n` and turns
//! them into integer set sizes and key lengths. The slack terms (`δ`, `δ̃`,
//! `δ′`) can be set explicitly; otherwise they are chosen from the
//! concentration width of the erasure counts at this `n`. After rounding the
//! variant's rate inequality is checked again.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::analysis::capacity;
use crate::channel::{ChannelConfig, Topology};
use crate::codec::{binomial, ceil_log2};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "c2p")]
    C2p,
    #[serde(rename = "c1p")]
    C1p,
    #[serde(rename = "oneofN_2p")]
    OneOfN2p,
    #[serde(rename = "oneofN_1p")]
    OneOfN1p,
    #[serde(rename = "mal_le_half")]
    MalLeHalf,
    #[serde(rename = "mal_gt_half")]
    MalGtHalf,
    #[serde(rename = "independent_pair")]
    IndependentPair,
    #[serde(rename = "degraded")]
    Degraded,
    #[serde(rename = "two_party")]
    TwoParty,
}

impl Variant {
    pub const ALL: [Variant; 9] = [
        Variant::C2p,
        Variant::C1p,
        Variant::OneOfN2p,
        Variant::OneOfN1p,
        Variant::MalLeHalf,
        Variant::MalGtHalf,
        Variant::IndependentPair,
        Variant::Degraded,
        Variant::TwoParty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::C2p => "c2p",
            Variant::C1p => "c1p",
            Variant::OneOfN2p => "oneofN_2p",
            Variant::OneOfN1p => "oneofN_1p",
            Variant::MalLeHalf => "mal_le_half",
            Variant::MalGtHalf => "mal_gt_half",
            Variant::IndependentPair => "independent_pair",
            Variant::Degraded => "degraded",
            Variant::TwoParty => "two_party",
        }
    }

    /// The broadcast topology the variant runs over.
    pub fn topology(self) -> Topology {
        match self {
            Variant::Degraded => Topology::Degraded,
            Variant::TwoParty => Topology::Single,
            _ => Topology::Independent,
        }
    }

    /// Whether secrecy is required against colluding pairs.
    pub fn two_private(self) -> bool {
        matches!(self, Variant::C2p | Variant::OneOfN2p | Variant::IndependentPair)
    }

    pub fn is_malicious(self) -> bool {
        matches!(self, Variant::MalLeHalf | Variant::MalGtHalf)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown variant {s:?}")))
    }
}

/// Cathy's half of the independent pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CathyParams {
    pub r_c: f64,
    /// `|L|`, the positions handed to the two-party phase.
    pub pool: usize,
    /// `|L_W| = |L_W̄|`, also Cathy's string length.
    pub set_size: usize,
}

/// Counts specific to the degraded-channel protocol.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegradedCounts {
    /// `|L_U| = |L_Ū|`.
    pub selection: usize,
    /// `|Q| = |L₀ ∪ L₁|`.
    pub q_len: usize,
    /// `|G̃_L|`, input length of the pad hash `F_L`.
    pub g_large: usize,
    /// `|G̃_S|`.
    pub g_small: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolParams {
    pub variant: Variant,
    pub eps1: f64,
    pub eps2: f64,
    pub n: usize,
    /// Length of each of Alice's strings (Bob's strings in the pair variant).
    pub m: usize,
    pub r: f64,
    pub delta: f64,
    pub delta_tilde: f64,
    pub delta_prime: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Number of sender strings `N`.
    pub branches: usize,
    pub beta_n: usize,
    pub gamma_n: usize,
    /// `⌊nr⌋`: erased positions forced into each bad set (1-privacy), or the
    /// set size of the two-party protocol.
    pub nr: usize,
    /// Input length of interactive hashing (malicious variants).
    pub ih_bits: usize,
    pub cathy: Option<CathyParams>,
    pub degraded: Option<DegradedCounts>,
}

impl ProtocolParams {
    /// The channel this variant runs over, at the parameters' erasure
    /// probabilities.
    pub fn channel_config(&self) -> Result<ChannelConfig> {
        match self.variant.topology() {
            Topology::Single => ChannelConfig::single(self.eps1),
            t => ChannelConfig::new(self.eps1, self.eps2, t),
        }
    }

    /// Achieved string rate `m / n`.
    pub fn rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }
}

const TOL: f64 = 1e-12;

fn count(x: f64) -> usize {
    (x + 1e-9).floor().max(0.0) as usize
}

fn ceil_hundredth(x: f64) -> f64 {
    (x * 100.0 - 1e-9).ceil() / 100.0
}

/// `3.5` standard deviations of an erasure fraction at block length `n`.
pub fn concentration_slack(eps1: f64, eps2: f64, n: usize) -> f64 {
    let var = (eps1 * (1.0 - eps1)).max(eps2 * (1.0 - eps2));
    3.5 * (var / n as f64).sqrt()
}

/// Largest `δ ∈ [0, hi]` with `bound(δ) ≥ r`, for a nonincreasing `bound`.
fn largest_slack(bound: impl Fn(f64) -> f64, r: f64, hi: f64) -> f64 {
    if bound(0.0) < r {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bound(mid) >= r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Builder for [`ProtocolParams`]; unset slacks are chosen automatically.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamRequest {
    pub variant: Variant,
    pub r: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub n: usize,
    pub branches: usize,
    pub delta: Option<f64>,
    pub delta_tilde: Option<f64>,
    pub r_c: f64,
}

impl ParamRequest {
    pub fn new(variant: Variant, r: f64, eps1: f64, eps2: f64, n: usize) -> Self {
        ParamRequest {
            variant,
            r,
            eps1,
            eps2,
            n,
            branches: 2,
            delta: None,
            delta_tilde: None,
            r_c: 0.0,
        }
    }

    pub fn branches(mut self, branches: usize) -> Self {
        self.branches = branches;
        self
    }

    pub fn delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn delta_tilde(mut self, delta_tilde: f64) -> Self {
        self.delta_tilde = Some(delta_tilde);
        self
    }

    /// Cathy's target rate in the independent pair.
    pub fn cathy_rate(mut self, r_c: f64) -> Self {
        self.r_c = r_c;
        self
    }

    fn too_high(&self, rate: f64, bound: f64) -> Error {
        Error::RateTooHigh {
            variant: self.variant.to_string(),
            rate,
            bound,
        }
    }

    fn base(&self) -> ProtocolParams {
        ProtocolParams {
            variant: self.variant,
            eps1: self.eps1,
            eps2: self.eps2,
            n: self.n,
            m: 0,
            r: self.r,
            delta: 0.0,
            delta_tilde: 0.0,
            delta_prime: 0.0,
            beta: 0.0,
            gamma: 0.0,
            branches: 2,
            beta_n: 0,
            gamma_n: 0,
            nr: 0,
            ih_bits: 0,
            cathy: None,
            degraded: None,
        }
    }

    pub fn derive(&self) -> Result<ProtocolParams> {
        for (name, e) in [("eps1", self.eps1), ("eps2", self.eps2)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::OutOfRange(format!("{name} = {e} is not in [0, 1]")));
            }
        }
        if !(self.r > 0.0) {
            return Err(Error::InvalidParams(format!("rate must be positive, got {}", self.r)));
        }
        if self.n == 0 {
            return Err(Error::InvalidParams("block length must be positive".into()));
        }
        if matches!(self.variant, Variant::C2p | Variant::C1p) && self.branches != 2 {
            return Err(Error::InvalidParams(format!("{} has exactly two strings", self.variant)));
        }
        if self.branches < 2 {
            return Err(Error::InvalidParams("need at least two strings".into()));
        }
        let p = match self.variant {
            Variant::C2p | Variant::OneOfN2p | Variant::IndependentPair => self.selection(true)?,
            Variant::C1p | Variant::OneOfN1p => self.selection(false)?,
            Variant::TwoParty => self.two_party()?,
            Variant::Degraded => self.degraded()?,
            Variant::MalLeHalf => self.mal_le_half()?,
            Variant::MalGtHalf => self.mal_gt_half()?,
        };
        let p = if self.variant == Variant::IndependentPair {
            self.with_cathy(p)?
        } else {
            p
        };
        if p.m == 0 {
            return Err(Error::InvalidParams(format!(
                "block length {} is too small: the key length rounds to zero",
                self.n
            )));
        }
        Ok(p)
    }

    fn auto_tilde(&self, cap: f64) -> Result<f64> {
        let conc = concentration_slack(self.eps1, self.eps2, self.n);
        let dt = self.delta_tilde.unwrap_or_else(|| conc.min(cap));
        if !(dt > 0.0 && dt < 2.0 * cap) {
            return Err(Error::InvalidParams(format!("δ̃ = {dt} is outside (0, {})", 2.0 * cap)));
        }
        Ok(dt)
    }

    fn resolve_delta(&self, bound: &dyn Fn(f64) -> f64, hi: f64) -> Result<f64> {
        let conc = concentration_slack(self.eps1, self.eps2, self.n);
        let delta = match self.delta {
            Some(d) => d,
            None => conc.min(largest_slack(bound, self.r, hi) / 2.0),
        };
        if !(delta >= 0.0 && delta < hi) {
            return Err(Error::InvalidParams(format!("δ = {delta} is outside [0, {hi})")));
        }
        let b = bound(delta);
        if self.r > b + TOL {
            return Err(self.too_high(self.r, b));
        }
        Ok(delta)
    }

    fn selection(&self, two_private: bool) -> Result<ProtocolParams> {
        let (e1, e2, n) = (self.eps1, self.eps2, self.n);
        let k = self.branches as f64;
        let cap = if two_private {
            capacity::c2p_n(e1, e2, self.branches)
        } else {
            capacity::c1p_n(e1, e2, self.branches)
        };
        if !(self.r < cap) {
            return Err(self.too_high(self.r, cap));
        }
        let bound = move |d: f64| {
            if two_private {
                (e2 - d) * ((e1 - d) / (k - 1.0)).min(1.0 - e1 - d)
            } else {
                ((e1 - d) / (k - 1.0)).min((e2 - d) / k).min((e2 - d) * (1.0 - e1 - d))
            }
        };
        let delta = self.resolve_delta(&bound, e2.min(e1).min(1.0 - e1))?;
        let delta_tilde = self.auto_tilde(self.r / 2.0)?;
        let beta = self.r / (e2 - delta);
        let beta_n = count(beta * n as f64);
        if self.branches * beta_n > n {
            return Err(Error::InvalidParams(format!(
                "{} selections of {beta_n} positions do not fit in n = {n}",
                self.branches
            )));
        }
        let mut p = self.base();
        p.branches = self.branches;
        p.delta = delta;
        p.delta_tilde = delta_tilde;
        p.delta_prime = delta_tilde;
        p.beta = beta;
        p.beta_n = beta_n;
        p.nr = if two_private { 0 } else { count(self.r * n as f64) };
        p.m = count(n as f64 * (self.r - delta_tilde));
        Ok(p)
    }

    fn two_party(&self) -> Result<ProtocolParams> {
        let cap = self.eps1.min(1.0 - self.eps1);
        if !(self.r < cap) {
            return Err(self.too_high(self.r, cap));
        }
        let mut p = self.base();
        p.beta = self.r;
        p.nr = count(self.r * self.n as f64);
        p.beta_n = p.nr;
        p.m = p.nr;
        Ok(p)
    }

    fn with_cathy(&self, mut p: ProtocolParams) -> Result<ProtocolParams> {
        if self.r_c <= 0.0 {
            return Ok(p);
        }
        let (e1, e2) = (self.eps1, self.eps2);
        let cap = (2.0 * e1 - 1.0).max(0.0) * e2.min(1.0 - e2);
        if !(self.r_c < cap) {
            return Err(Error::RateTooHigh {
                variant: "independent_pair (Cathy)".into(),
                rate: self.r_c,
                bound: cap,
            });
        }
        let share = e1 - p.delta - p.beta;
        let bound = share * (e2.min(1.0 - e2) - p.delta);
        if self.r_c > bound + TOL {
            return Err(Error::RateTooHigh {
                variant: "independent_pair (Cathy)".into(),
                rate: self.r_c,
                bound,
            });
        }
        let n = self.n as f64;
        let set_size = count(self.r_c * n);
        if set_size == 0 {
            return Err(Error::InvalidParams("Cathy's string length rounds to zero".into()));
        }
        p.cathy = Some(CathyParams {
            r_c: self.r_c,
            pool: count(share * n),
            set_size,
        });
        Ok(p)
    }

    fn degraded(&self) -> Result<ProtocolParams> {
        let (e1, e2, n) = (self.eps1, self.eps2, self.n as f64);
        let cap = capacity::degraded_lower(e1, e2);
        if !(self.r < cap) {
            return Err(self.too_high(self.r, cap));
        }
        let bound = move |d: f64| ((e2 - d) * (1.0 - e1 - d) / 3.0).min(e1 - d);
        let delta = self.resolve_delta(&bound, e2.min(e1))?;
        let delta_tilde = self.auto_tilde(self.r / 4.0)?;
        if delta_tilde >= self.r / 2.0 {
            return Err(Error::InvalidParams(format!("δ̃ = {delta_tilde} must be below r/2")));
        }
        let beta = (self.r - delta_tilde) / (e2 - delta);
        let beta_n = count(beta * n);
        let selection = count(n * (self.r - delta_tilde));
        let counts = DegradedCounts {
            selection,
            q_len: 2 * selection,
            g_large: count(2.0 * n * self.r / (e2 - delta)),
            g_small: beta_n.saturating_sub(selection),
        };
        if selection == 0 || counts.q_len > counts.g_large {
            return Err(Error::InvalidParams(format!("block length {n} is too small")));
        }
        let mut p = self.base();
        p.delta = delta;
        p.delta_tilde = delta_tilde;
        p.delta_prime = delta_tilde;
        p.beta = beta;
        p.beta_n = beta_n;
        p.m = count(n * (self.r - 2.0 * delta_tilde));
        p.degraded = Some(counts);
        Ok(p)
    }

    fn mal_le_half_slacks(&self) -> Result<(f64, f64)> {
        let e1 = self.eps1;
        if e1 > 0.5 {
            return Err(Error::InvalidParams(format!("mal_le_half needs eps1 <= 1/2, got {e1}")));
        }
        let conc = 3.5 * (e1 * (1.0 - e1) / self.n as f64).sqrt();
        let delta = self.delta.unwrap_or_else(|| ((conc * 100.0).round() / 100.0).max(0.01));
        let delta_tilde = self
            .delta_tilde
            .unwrap_or_else(|| (2.0 * delta / 3.0).min(0.5 - e1 - delta / 2.0));
        Ok((delta, delta_tilde))
    }

    fn mal_gt_half_shape(&self) -> Result<(usize, f64)> {
        let e1 = self.eps1;
        if e1 <= 0.5 {
            return Err(Error::InvalidParams(format!("mal_gt_half needs eps1 > 1/2, got {e1}")));
        }
        let n = self.n as f64;
        let delta = self.delta.unwrap_or_else(|| {
            let b = 1.0 - e1;
            let window = 3.0 * (b * (1.0 - b) * (1.0 - b) / (b * n)).sqrt();
            let conc = 3.5 * (e1 * (1.0 - e1) / n).sqrt();
            ceil_hundredth(window.max(conc))
        });
        let beta_n = count((1.0 - e1 - delta) * n);
        if beta_n == 0 || delta <= 0.0 {
            return Err(Error::InvalidParams(format!("δ = {delta} leaves no room for β")));
        }
        Ok((beta_n, 1.0 - e1 - beta_n as f64 / n))
    }

    /// The largest rate the malicious variants admit with the resolved slacks
    /// (`ε₁ε₂ − 5δ − 2δ̃` below one half, `β(ε₁ε₂ − 3δ)` above).
    pub fn malicious_rate_bound(&self) -> Result<f64> {
        let e12 = self.eps1 * self.eps2;
        match self.variant {
            Variant::MalLeHalf => {
                let (d, dt) = self.mal_le_half_slacks()?;
                Ok(e12 - 5.0 * d - 2.0 * dt)
            }
            Variant::MalGtHalf => {
                let (beta_n, d) = self.mal_gt_half_shape()?;
                Ok(beta_n as f64 / self.n as f64 * (e12 - 3.0 * d))
            }
            v => Err(Error::InvalidParams(format!("{v} is not a malicious variant"))),
        }
    }

    fn mal_le_half(&self) -> Result<ProtocolParams> {
        let (delta, delta_tilde) = self.mal_le_half_slacks()?;
        let (e1, n) = (self.eps1, self.n as f64);
        let gamma = 0.5 - e1 - delta_tilde;
        let beta = 0.5 - delta - delta_tilde;
        if !(gamma > 0.0 && beta > gamma) {
            return Err(Error::InvalidParams(format!("need 0 < γ < β, got γ = {gamma}, β = {beta}")));
        }
        let bound = self.malicious_rate_bound()?;
        if !(self.r < bound) {
            return Err(self.too_high(self.r, bound));
        }
        let beta_n = count(beta * n);
        let gamma_n = count(gamma * n);
        if gamma_n == 0 {
            return Err(Error::InvalidParams(format!("block length {n} is too small for γn ≥ 1")));
        }
        let ih_bits = ceil_log2(&binomial(beta_n, gamma_n)?);
        if ih_bits < 2 {
            return Err(Error::InvalidParams("hashing input must have at least two bits".into()));
        }
        let mut p = self.base();
        p.delta = delta;
        p.delta_tilde = delta_tilde;
        p.delta_prime = bound - self.r;
        p.beta = beta;
        p.gamma = gamma;
        p.beta_n = beta_n;
        p.gamma_n = gamma_n;
        p.ih_bits = ih_bits;
        p.m = count(self.r * n).min(beta_n);
        Ok(p)
    }

    fn mal_gt_half(&self) -> Result<ProtocolParams> {
        let (beta_n, delta) = self.mal_gt_half_shape()?;
        let n = self.n as f64;
        let beta = beta_n as f64 / n;
        let bound = self.malicious_rate_bound()?;
        if !(self.r < bound) {
            return Err(self.too_high(self.r, bound));
        }
        let m = count(self.r * n);
        let stripped = count(beta_n as f64 * (1.0 - beta - delta));
        if m > stripped {
            return Err(Error::InvalidParams(format!(
                "key length {m} exceeds the smallest stripped set {stripped}"
            )));
        }
        let mut p = self.base();
        p.delta = delta;
        p.delta_prime = self.eps1 * self.eps2 - 3.0 * delta - self.r / beta;
        p.beta = beta;
        p.beta_n = beta_n;
        p.ih_bits = ceil_log2(&binomial(self.n, beta_n)?);
        p.m = m;
        Ok(p)
    }
}

/// [`ParamRequest::derive`] with automatic slacks.
pub fn derive_params(variant: Variant, r: f64, eps1: f64, eps2: f64, n: usize) -> Result<ProtocolParams> {
    ParamRequest::new(variant, r, eps1, eps2, n).derive()
}

/// Picks the block length in `[target − window, target + window]` that
/// maximizes `C(n, βn) / 2^m` for the gt-half variant, so that interactive
/// hashing rarely lands outside the ranked range. Returns `(n, density)`.
pub fn search_block_length(eps1: f64, delta: f64, target: usize, window: usize) -> Result<(usize, f64)> {
    if eps1 <= 0.5 || !(delta > 0.0) {
        return Err(Error::InvalidParams("search needs eps1 > 1/2 and δ > 0".into()));
    }
    let mut best: Option<(usize, f64)> = None;
    for n in target.saturating_sub(window).max(1)..=target + window {
        let beta_n = count((1.0 - eps1 - delta) * n as f64);
        if beta_n == 0 {
            continue;
        }
        let c = binomial(n, beta_n)?;
        let density = crate::codec::log2_big(&c) - ceil_log2(&c) as f64;
        let density = density.exp2();
        if best.is_none_or(|(_, d)| density > d) {
            best = Some((n, density));
        }
    }
    best.ok_or_else(|| Error::InvalidParams("empty search window".into()))
}

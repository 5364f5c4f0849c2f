//! Exact leakage of tiny protocol instances by full enumeration.
//!
//! Every random choice (channel erasures, `X`, `U`, Bob's selections,
//! Alice's hashes and strings) is enumerated with its exact probability and
//! the joint law of secrets and views is accumulated directly. All
//! quantities are conditioned on the session not aborting.
//!
//! The work is sliced by a variable that is a function of the view (Eve's
//! erasure pattern, or `X`), so only one slice of the joint table is ever in
//! memory.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::systematic_maps;
use crate::protocol::{DegradedCounts, ProtocolParams, Variant};

/// The largest block length the oracle accepts.
pub const MAX_N: usize = 8;
pub const DEFAULT_BUDGET: u64 = 1 << 30;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub variant: Variant,
    pub n: usize,
    pub eps1: f64,
    pub eps2: f64,
    /// `|L₀| = |L₁|` for `c2p`; `|L_U| = |L_Ū|` for `degraded`.
    pub selection: usize,
    pub key_len: usize,
    /// `|G̃_L|` and `|G̃_S|` (degraded only).
    #[serde(default)]
    pub g_large: usize,
    #[serde(default)]
    pub g_small: usize,
    /// `P[X_i = 1]`. An honest Alice uses ½.
    #[serde(default = "half")]
    pub x_bias: f64,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn half() -> f64 {
    0.5
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

impl OracleConfig {
    /// The 2-private protocol at `n = 6`, `|L_i| = 2`, one-bit strings.
    pub fn c2p() -> Self {
        OracleConfig {
            variant: Variant::C2p,
            n: 6,
            eps1: 0.5,
            eps2: 0.5,
            selection: 2,
            key_len: 1,
            g_large: 0,
            g_small: 0,
            x_bias: 0.5,
            budget: DEFAULT_BUDGET,
        }
    }

    /// The degraded-channel protocol at `n = 8` with `|Q| = 2`.
    pub fn degraded() -> Self {
        OracleConfig {
            variant: Variant::Degraded,
            n: 8,
            eps1: 0.25,
            eps2: 0.5,
            selection: 1,
            key_len: 1,
            g_large: 2,
            g_small: 1,
            x_bias: 0.5,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn q_len(&self) -> usize {
        2 * self.selection
    }

    /// Number of leaves the enumeration visits.
    pub fn enumeration_size(&self) -> u128 {
        let n = self.n as u32;
        let draws = (0..=self.n)
            .map(|a| small_binomial(a, self.selection) * small_binomial(self.n - a, self.selection))
            .max()
            .unwrap_or(0);
        match self.variant {
            Variant::Degraded => 2u128
                .saturating_mul(3u128.saturating_pow(n))
                .saturating_mul(2u128.saturating_pow(n))
                .saturating_mul(2)
                .saturating_mul(draws),
            _ => {
                let free = self.selection.saturating_sub(self.key_len) * self.key_len;
                let family = 2u128.saturating_pow(free as u32);
                2u128
                    .saturating_pow(3 * n)
                    .saturating_mul(2)
                    .saturating_mul(draws)
                    .saturating_mul(family.saturating_mul(family))
                    .saturating_mul(2u128.saturating_pow(2 * self.key_len as u32))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let estimate = self.enumeration_size();
        if estimate > u128::from(self.budget) {
            return Err(Error::BudgetExceeded {
                estimate,
                budget: u128::from(self.budget),
            });
        }
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.n > MAX_N || self.n == 0 {
            return bad(format!("oracle block length must be in 1..={MAX_N}, got {}", self.n));
        }
        for (name, p) in [("eps1", self.eps1), ("eps2", self.eps2), ("x_bias", self.x_bias)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::OutOfRange(format!("{name} = {p}")));
            }
        }
        if self.selection == 0 || self.key_len == 0 {
            return bad("selection and key length must be positive".into());
        }
        match self.variant {
            Variant::C2p => {
                if self.key_len > self.selection || 2 * self.selection > self.n {
                    return bad("need key_len ≤ selection and 2·selection ≤ n".into());
                }
            }
            Variant::Degraded => {
                if self.g_large != self.q_len() {
                    return bad(format!("the identity F_L needs g_large = |Q| = {}", self.q_len()));
                }
                if 2 * self.selection + self.g_large + self.g_small > self.n {
                    return bad("selections and G̃ do not fit in the block".into());
                }
                if self.key_len > self.selection + self.g_small {
                    return bad("key longer than Bob's key positions".into());
                }
            }
            v => return bad(format!("no oracle for {v}")),
        }
        Ok(())
    }

    /// Parameters under which the session engine runs the same instance, so
    /// Monte-Carlo abort and error rates can be compared with the oracle.
    /// The engine samples its hashes from the full linear family, which
    /// affects neither.
    pub fn session_params(&self) -> Result<ProtocolParams> {
        self.validate()?;
        let mut p = ProtocolParams {
            variant: self.variant,
            eps1: self.eps1,
            eps2: self.eps2,
            n: self.n,
            m: self.key_len,
            r: self.key_len as f64 / self.n as f64,
            delta: 0.0,
            delta_tilde: 0.0,
            delta_prime: 0.0,
            beta: self.selection as f64 / self.n as f64,
            gamma: 0.0,
            branches: 2,
            beta_n: self.selection,
            gamma_n: 0,
            nr: 0,
            ih_bits: 0,
            cathy: None,
            degraded: None,
        };
        if self.variant == Variant::Degraded {
            p.delta = 1.0;
            p.degraded = Some(DegradedCounts {
                selection: self.selection,
                q_len: self.q_len(),
                g_large: self.g_large,
                g_small: self.g_small,
            });
        }
        Ok(p)
    }
}

fn small_binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    StructuralZero,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeakageReport {
    pub config: OracleConfig,
    /// `"restricted-family: ..."` when a sub-family of hashes is enumerated.
    pub family: String,
    pub restricted: bool,
    pub enumeration_size: u128,
    pub abort_probability: f64,
    /// `P[K̂_U ≠ K_U | no abort]`.
    pub p_err: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_u_aliceeve: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_kbar_bobeve: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_all_eve: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_u_alice: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_u_eve: Option<f64>,
    /// Analytic upper bounds for the same configuration, keyed like the
    /// quantities they bound.
    pub bounds: BTreeMap<String, f64>,
    pub methods: BTreeMap<String, Method>,
    pub notes: Vec<String>,
}

/// Runs the oracle for `cfg.variant` (`c2p` or `degraded`).
pub fn exact_leakage(cfg: &OracleConfig) -> Result<LeakageReport> {
    cfg.validate()?;
    match cfg.variant {
        Variant::C2p => c2p_oracle(cfg),
        _ => degraded_oracle(cfg),
    }
}

/// Accumulates `I(S; V)` from unnormalized weights, one slice at a time,
/// as `I(S; slice) + Σ P(slice) · I(S; V | slice)`. Each term is a log-ratio
/// that vanishes exactly when `S` and `V` are independent.
struct MutualInfo {
    secret_bits: u32,
    joint: FxHashMap<u64, f64>,
    slice_secret: Vec<f64>,
    slices: Vec<Vec<f64>>,
    conditional: f64,
}

fn mi_terms<'a>(cells: impl Iterator<Item = (u64, usize, f64)> + Clone + 'a, secret: &[f64]) -> f64 {
    let mut views: FxHashMap<u64, f64> = FxHashMap::default();
    for (v, _, w) in cells.clone() {
        *views.entry(v).or_default() += w;
    }
    let total: f64 = secret.iter().sum();
    cells
        .filter(|&(_, _, w)| w > 0.0)
        .map(|(v, s, w)| w * (w * total / (secret[s] * views[&v])).log2())
        .sum()
}

impl MutualInfo {
    fn new(secret_bits: u32) -> Self {
        MutualInfo {
            secret_bits,
            joint: FxHashMap::default(),
            slice_secret: vec![0.0; 1 << secret_bits],
            slices: Vec::new(),
            conditional: 0.0,
        }
    }

    fn add(&mut self, view: u64, secret: u64, w: f64) {
        debug_assert!(view >> (64 - self.secret_bits) == 0, "view key too wide");
        *self.joint.entry(view << self.secret_bits | secret).or_default() += w;
        self.slice_secret[secret as usize] += w;
    }

    /// Closes a slice. Views in different slices must differ.
    fn flush(&mut self) {
        if self.joint.is_empty() {
            return;
        }
        let bits = self.secret_bits;
        let mask = (1u64 << bits) - 1;
        let cells = self.joint.iter().map(|(&k, &w)| (k >> bits, (k & mask) as usize, w));
        self.conditional += mi_terms(cells, &self.slice_secret);
        self.joint.clear();
        let fresh = vec![0.0; self.slice_secret.len()];
        self.slices.push(std::mem::replace(&mut self.slice_secret, fresh));
    }

    fn finish(mut self) -> f64 {
        self.flush();
        let mut secret = vec![0.0; 1 << self.secret_bits];
        for row in &self.slices {
            for (t, w) in secret.iter_mut().zip(row) {
                *t += w;
            }
        }
        let total: f64 = secret.iter().sum();
        if total == 0.0 {
            return 0.0;
        }
        let cells = self
            .slices
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(s, &w)| (i as u64, s, w)));
        (self.conditional + mi_terms(cells, &secret)) / total
    }
}

/// Packs fields into a `u64` key.
#[derive(Default)]
struct Key(u64, u32);

impl Key {
    fn put(mut self, value: u64, bits: u32) -> Self {
        debug_assert!(value >> bits == 0 && self.1 + bits <= 64);
        self.0 = self.0 << bits | value;
        self.1 += bits;
        self
    }
}

/// Bits of `x` at the set positions of `mask`, lowest position first.
fn gather(x: u64, mask: u64) -> u64 {
    let (mut out, mut j, mut m) = (0, 0, mask);
    while m != 0 {
        let p = m.trailing_zeros();
        out |= (x >> p & 1) << j;
        j += 1;
        m &= m - 1;
    }
    out
}

/// The lowest `k` set bits of `mask`.
fn lowest(mask: u64, k: usize) -> u64 {
    let mut m = mask;
    for _ in 0..k {
        m &= m - 1;
    }
    mask & !m
}

fn subsets_of_size(mask: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut sub = mask;
    loop {
        if sub.count_ones() as usize == k {
            out.push(sub);
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & mask;
    }
    out.reverse();
    out
}

/// `Π_i p^{[i ∈ mask]}(1−p)^{[i ∉ mask]}` over `n` positions.
fn pattern_weight(mask: u64, n: usize, p: f64) -> f64 {
    let ones = mask.count_ones() as i32;
    p.powi(ones) * (1.0 - p).powi(n as i32 - ones)
}

fn apply_rows(rows: &[u64], v: u64) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0, |acc, (r, &row)| acc | (u64::from((row & v).count_ones() & 1) << r))
}

/// `min(l, log₂(1 + 2^{l−c}))`: the most a length-`l` key hashed from `c`
/// unknown bits can leak under a universal₂ family.
fn pad_deficit(l: usize, c: usize) -> f64 {
    (l as f64).min((1.0 + (2f64).powi(l as i32 - c as i32)).log2())
}

fn c2p_oracle(cfg: &OracleConfig) -> Result<LeakageReport> {
    let n = cfg.n;
    let (bn, l) = (cfg.selection, cfg.key_len);
    let full = (1u64 << n) - 1;
    let family: Vec<Vec<u64>> = systematic_maps(bn, l)?
        .iter()
        .map(|f| f.matrix().row_iter().map(|r| r.to_u64()).collect())
        .collect();
    let nf = family.len();
    let fbits = nf.trailing_zeros();
    let (nb, lb) = (n as u32, l as u32);
    let pf = 1.0 / nf as f64;
    let pk = (0.5f64).powi(l as i32);
    let subsets: Vec<Vec<u64>> = (0..=full).map(|m| subsets_of_size(m, bn)).collect();

    let mut i_ae = MutualInfo::new(1);
    let mut i_be = MutualInfo::new(lb);
    let mut i_e = MutualInfo::new(2 * lb + 1);
    let (mut abort, mut live, mut err) = (0.0, 0.0, 0.0);
    let (mut bound_be, mut bound_e) = (0.0, 0.0);

    for ez in 0..=full {
        let pz = pattern_weight(ez, n, cfg.eps2);
        for ey in 0..=full {
            let pe = pz * pattern_weight(ey, n, cfg.eps1);
            let ebar = full & !ey;
            if (ebar.count_ones() as usize) < bn || (ey.count_ones() as usize) < bn {
                abort += pe;
                continue;
            }
            let (goods, bads) = (&subsets[ebar as usize], &subsets[ey as usize]);
            let psel = 1.0 / (goods.len() * bads.len()) as f64;
            live += pe;
            for x in 0..=full {
                let px = pe * pattern_weight(x, n, cfg.x_bias);
                for u in 0..2u64 {
                    for &g in goods {
                        for &b in bads {
                            let w_sel = px * 0.5 * psel;
                            let sel = if u == 0 { [g, b] } else { [b, g] };
                            bound_be += w_sel * pad_deficit(l, (b & ey & ez).count_ones() as usize);
                            bound_e += w_sel
                                * sel
                                    .iter()
                                    .map(|&s| pad_deficit(l, (s & ez).count_ones() as usize))
                                    .sum::<f64>();
                            let inputs = [gather(x, sel[0]), gather(x, sel[1])];
                            let bob_bits = gather(x & ebar, sel[u as usize]);
                            for (f0, rows0) in family.iter().enumerate() {
                                for (f1, rows1) in family.iter().enumerate() {
                                    let rows = [rows0, rows1];
                                    let pads = [apply_rows(rows0, inputs[0]), apply_rows(rows1, inputs[1])];
                                    let w_f = w_sel * pf * pf;
                                    for k0 in 0..1u64 << l {
                                        for k1 in 0..1u64 << l {
                                            let w = w_f * pk * pk;
                                            let k = [k0, k1];
                                            let c = [k0 ^ pads[0], k1 ^ pads[1]];
                                            let k_hat = c[u as usize] ^ apply_rows(rows[u as usize], bob_bits);
                                            if k_hat != k[u as usize] {
                                                err += w;
                                            }
                                            let (f0, f1) = (f0 as u64, f1 as u64);
                                            let ae = Key::default()
                                                .put(k0, lb)
                                                .put(k1, lb)
                                                .put(x, nb)
                                                .put(sel[0], nb)
                                                .put(sel[1], nb)
                                                .put(f0, fbits)
                                                .put(f1, fbits);
                                            i_ae.add(ae.0, u, w);
                                            let be = Key::default()
                                                .put(u, 1)
                                                .put(ey, nb)
                                                .put(x & !(ey & ez), nb)
                                                .put(sel[0], nb)
                                                .put(sel[1], nb)
                                                .put(f0, fbits)
                                                .put(f1, fbits)
                                                .put(c[0], lb)
                                                .put(c[1], lb);
                                            i_be.add(be.0, k[1 - u as usize], w);
                                            let e = Key::default()
                                                .put(x & !ez, nb)
                                                .put(sel[0], nb)
                                                .put(sel[1], nb)
                                                .put(f0, fbits)
                                                .put(f1, fbits)
                                                .put(c[0], lb)
                                                .put(c[1], lb);
                                            i_e.add(e.0, (k0 << lb | k1) << 1 | u, w);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        i_ae.flush();
        i_be.flush();
        i_e.flush();
    }

    let norm = if live > 0.0 { 1.0 / live } else { 0.0 };
    let mut bounds = BTreeMap::new();
    bounds.insert("i_kbar_bobeve".to_string(), bound_be * norm);
    bounds.insert("i_all_eve".to_string(), bound_e * norm);
    let methods = ["i_u_aliceeve", "i_kbar_bobeve", "i_all_eve", "p_err"]
        .into_iter()
        .map(|k| (k.to_string(), Method::Exact))
        .collect();
    Ok(LeakageReport {
        config: cfg.clone(),
        family: format!("restricted-family: systematic [I|A] maps {bn}->{l} ({nf} members)"),
        restricted: true,
        enumeration_size: cfg.enumeration_size(),
        abort_probability: abort,
        p_err: err * norm,
        i_u_aliceeve: Some(i_ae.finish()),
        i_kbar_bobeve: Some(i_be.finish()),
        i_all_eve: Some(i_e.finish()),
        i_u_alice: None,
        i_u_eve: None,
        bounds,
        methods,
        notes: vec![
            "bounds: sum over keys of E[min(l, log2(1 + 2^(l - c)))] with c the erased count of the observer on the key's selection"
                .into(),
        ],
    })
}

fn degraded_oracle(cfg: &OracleConfig) -> Result<LeakageReport> {
    let n = cfg.n;
    let full = (1u64 << n) - 1;
    let (sel, gl, gs, q) = (cfg.selection, cfg.g_large, cfg.g_small, cfg.q_len());
    let (nb, qb) = (n as u32, q as u32);
    let subsets: Vec<Vec<u64>> = (0..=full).map(|m| subsets_of_size(m, sel)).collect();
    let aborts = |ey: u64| {
        let ebar = full & !ey;
        (ebar.count_ones() as usize) < sel + gl + gs || (ey.count_ones() as usize) < sel
    };
    // Weight of Bob's erasures `ey` inside Eve's `ez` (the degraded cascade).
    let weight = |ey: u64, ez: u64| {
        let only_eve = (ez & !ey).count_ones() as i32;
        let clear = n as i32 - ez.count_ones() as i32;
        cfg.eps1.powi(ey.count_ones() as i32)
            * ((1.0 - cfg.eps1) * cfg.eps2).powi(only_eve)
            * ((1.0 - cfg.eps1) * (1.0 - cfg.eps2)).powi(clear)
    };

    // One session: returns (gt, bt, qc, g_large mask, error flag).
    let session = |x: u64, ey: u64, u: u64, good: u64, bad: u64| {
        let ebar = full & !ey;
        let l1 = if u == 1 { good } else { bad };
        let gt = ebar & !good;
        let bt = ey & !bad;
        let g_large = lowest(gt, gl);
        let g_small = lowest(gt & !g_large, gs);
        let union = good | bad;
        let qv = gather(l1, union);
        let qc = qv ^ gather(x, g_large);
        // Alice's reconstruction from (X, G̃, B̃, QC).
        let union_a = full & !(gt | bt);
        let q_a = qc ^ gather(x, lowest(gt, gl));
        let mut l1_a = 0;
        for (j, p) in (0..n).filter(|&p| union_a >> p & 1 == 1).enumerate() {
            if q_a >> j & 1 == 1 {
                l1_a |= 1 << p;
            }
        }
        let l0_a = union_a & !l1_a;
        let l0 = union & !l1;
        let bob_known = (good | g_small) & ey == 0;
        let wrong = l1_a != l1 || l0_a != l0 || !bob_known;
        (gt, bt, qc, g_large, wrong)
    };

    let mut abort = 0.0;
    let mut live = 0.0;
    let mut err = 0.0;
    let mut residual = 0.0;

    // V_E, sliced by Eve's erasure pattern.
    let mut i_e = MutualInfo::new(1);
    for ez in 0..=full {
        let mut ey = ez;
        loop {
            let pe = weight(ey, ez);
            if aborts(ey) {
                abort += pe;
            } else {
                live += pe;
                let ebar = full & !ey;
                let (goods, bads) = (&subsets[ebar as usize], &subsets[ey as usize]);
                let psel = 1.0 / (goods.len() * bads.len()) as f64;
                for x in 0..=full {
                    let px = pe * pattern_weight(x, n, cfg.x_bias);
                    for u in 0..2u64 {
                        for &good in goods {
                            for &bad in bads {
                                let w = px * 0.5 * psel;
                                let (gt, bt, qc, g_large, wrong) = session(x, ey, u, good, bad);
                                if wrong {
                                    err += w;
                                }
                                residual += w * q.min((g_large & ez).count_ones() as usize) as f64;
                                let key = Key::default().put(x & !ez, nb).put(gt, nb).put(bt, nb).put(qc, qb);
                                i_e.add(key.0, u, w);
                            }
                        }
                    }
                }
            }
            if ey == 0 {
                break;
            }
            ey = (ey - 1) & ez;
        }
        i_e.flush();
    }

    // V_A, sliced by X.
    let mut i_a = MutualInfo::new(1);
    for x in 0..=full {
        let px = pattern_weight(x, n, cfg.x_bias);
        for ey in 0..=full {
            if aborts(ey) {
                continue;
            }
            let pe = px * pattern_weight(ey, n, cfg.eps1);
            let ebar = full & !ey;
            let (goods, bads) = (&subsets[ebar as usize], &subsets[ey as usize]);
            let psel = 1.0 / (goods.len() * bads.len()) as f64;
            for u in 0..2u64 {
                for &good in goods {
                    for &bad in bads {
                        let (gt, bt, qc, _, _) = session(x, ey, u, good, bad);
                        let key = Key::default().put(gt, nb).put(bt, nb).put(qc, qb);
                        i_a.add(key.0, u, pe * 0.5 * psel);
                    }
                }
            }
        }
        i_a.flush();
    }

    let norm = if live > 0.0 { 1.0 / live } else { 0.0 };
    let mut bounds = BTreeMap::new();
    bounds.insert("i_u_eve".to_string(), (q as f64 - residual * norm).max(0.0));
    let methods = ["i_u_alice", "i_u_eve", "p_err"]
        .into_iter()
        .map(|k| (k.to_string(), Method::Exact))
        .collect();
    Ok(LeakageReport {
        config: cfg.clone(),
        family: format!("restricted-family: identity F_L on {gl} bits"),
        restricted: true,
        enumeration_size: cfg.enumeration_size(),
        abort_probability: abort,
        p_err: err * norm,
        i_u_aliceeve: None,
        i_kbar_bobeve: None,
        i_all_eve: None,
        i_u_alice: Some(i_a.finish()),
        i_u_eve: Some(i_e.finish()),
        bounds,
        methods,
        notes: vec![
            "Alice's strings and final hashes are marginalized: each C_i is masked by an independent uniform K_i".into(),
            "p_err counts runs where Alice's reconstruction of (L0, L1) or Bob's decoding fails".into(),
            "bound: |Q| - E[min(|Q|, erased count of Z on G_L)]".into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers() {
        assert_eq!(gather(0b1010_1100, 0b1111_0000), 0b1010);
        assert_eq!(gather(0b0101, 0b0110), 0b10);
        assert_eq!(lowest(0b1011_0100, 2), 0b0001_0100);
        assert_eq!(subsets_of_size(0b1011, 2).len(), 3);
        assert_eq!(small_binomial(6, 3), 20);
        assert!((pad_deficit(1, 2) - 1.5f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn mutual_info_of_copy_and_independent() {
        let mut copy = MutualInfo::new(1);
        copy.add(0, 0, 0.5);
        copy.add(1, 1, 0.5);
        assert!((copy.finish() - 1.0).abs() < 1e-12);
        let mut ind = MutualInfo::new(1);
        for v in 0..4 {
            for s in 0..2 {
                ind.add(v, s, 0.125);
            }
        }
        assert!(ind.finish().abs() < 1e-12);
    }

    #[test]
    fn budget_is_enforced() {
        let cfg = OracleConfig {
            n: 16,
            ..OracleConfig::c2p()
        };
        match exact_leakage(&cfg) {
            Err(Error::BudgetExceeded { estimate, .. }) => assert!(estimate > 1 << 30),
            other => panic!("expected a budget error, got {other:?}"),
        }
    }

    #[test]
    fn eve_blind_learns_nothing() {
        let cfg = OracleConfig {
            n: 4,
            eps2: 1.0,
            selection: 1,
            ..OracleConfig::c2p()
        };
        let r = exact_leakage(&cfg).unwrap();
        assert!(r.i_all_eve.unwrap().abs() < 1e-9);
        assert!(r.i_u_aliceeve.unwrap().abs() < 1e-9);
        assert_eq!(r.p_err, 0.0);
    }
}

//! Protocols secure against a malicious Bob.
//!
//! Bob's choices are delegated to a [`BobStrategy`] so attacks can be
//! plugged in without touching the honest steps. Alice's channel input goes
//! through an [`AliceStrategy`].

use std::collections::HashSet;

use rand::Rng;

use crate::channel::{erasure_sets, ChannelConfig, TritString};
use crate::codec::SubsetCodec;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::ih::{ih_run_with, HonestSender};
use crate::rng::{sample_subset, sample_tuple, sorted_difference, SessionRng};

use super::hbc::{alice_encrypt, decrypt};
use super::{AbortSite, Ending, Party, PartyInputs, Payload, ProtocolParams, Session, SessionOutcome, Source, Variant};

const MISMATCH: &str = "reveal mismatch";

/// What Bob can consult when deciding on a message.
pub struct BobContext<'a> {
    pub params: &'a ProtocolParams,
    pub choice: usize,
    pub y: &'a TritString,
    /// Eve's output, present only when Bob colludes with her.
    pub z: Option<&'a TritString>,
    pub e: &'a [usize],
    pub ebar: &'a [usize],
}

impl BobContext<'_> {
    /// The bit Bob knows at `pos`, from `Y` or else from a colluding Eve.
    pub fn known(&self, pos: usize) -> Option<bool> {
        self.y
            .get(pos)
            .bit()
            .or_else(|| self.z.and_then(|z| z.get(pos).bit()))
    }
}

/// Bob's step-3 message when `ε₁ ≤ ½`: the IH input `S` and the ordered
/// tuples for his chosen and unchosen strings.
#[derive(Clone, Debug, PartialEq)]
pub struct LeHalfTuples {
    pub s: BitVec,
    pub good: Vec<usize>,
    pub bad: Vec<usize>,
}

pub trait BobStrategy {
    fn name(&self) -> String {
        "honest".into()
    }

    fn colludes_with_eve(&self) -> bool {
        false
    }

    fn tuples_le_half(&mut self, ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<LeHalfTuples> {
        honest_le_half_tuples(ctx, codec, rng)
    }

    fn choose_string_gt_half(&mut self, ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<BitVec> {
        honest_gt_half_string(ctx, codec, rng)
    }

    /// The bit Bob claims for `X` at `pos`: his knowledge if any, else a coin.
    fn reveal_bit(&mut self, ctx: &BobContext, pos: usize, rng: &mut SessionRng) -> bool {
        ctx.known(pos).unwrap_or_else(|| rng.random())
    }
}

pub trait AliceStrategy {
    fn name(&self) -> String {
        "honest".into()
    }

    fn channel_input(&mut self, n: usize, rng: &mut SessionRng) -> BitVec {
        BitVec::random(n, rng)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct HonestBob;

impl BobStrategy for HonestBob {}

#[derive(Clone, Copy, Debug, Default)]
pub struct HonestAlice;

impl AliceStrategy for HonestAlice {}

/// The prescribed step 3 for `ε₁ ≤ ½`. `S` is uniform and `J = Q(S)` marks
/// the slots of the unchosen tuple that hold unerased positions.
pub fn honest_le_half_tuples(ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<LeHalfTuples> {
    let (beta_n, gamma_n) = (ctx.params.beta_n, ctx.params.gamma_n);
    let s = BitVec::random(codec.m_bits(), rng);
    let j = codec.string_to_subset_onto(&s)?;
    let short = || Error::InvalidParams("too few positions for the tuples".into());
    let good = sample_tuple(ctx.ebar, beta_n, rng).ok_or_else(short)?;
    let mut sorted_good = good.clone();
    sorted_good.sort_unstable();
    let rest = sorted_difference(ctx.ebar, &sorted_good);
    let mut unerased = sample_tuple(&rest, gamma_n, rng).ok_or_else(short)?.into_iter();
    let mut erased = sample_tuple(ctx.e, beta_n - gamma_n, rng).ok_or_else(short)?.into_iter();
    let in_j: HashSet<usize> = j.into_iter().collect();
    let bad = (0..beta_n)
        .map(|slot| {
            if in_j.contains(&slot) {
                unerased.next()
            } else {
                erased.next()
            }
            .expect("slot counts match")
        })
        .collect();
    Ok(LeHalfTuples { s, good, bad })
}

/// The prescribed step 4 for `ε₁ > ½`: with probability `C / 2^m` the rank
/// of a uniform `βn`-subset of `Ē`, otherwise a uniform out-of-range string.
pub fn honest_gt_half_string(ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<BitVec> {
    let t = BitVec::random(codec.m_bits(), rng);
    if !codec.contains(&t) {
        return Ok(t);
    }
    let g = sample_subset(ctx.ebar, codec.subset_size(), rng)
        .ok_or_else(|| Error::InvalidParams("too few unerased positions".into()))?;
    codec.subset_to_string(&g)
}

fn bits_at(x: &BitVec, positions: &[usize]) -> BitVec {
    x.select(positions)
}

fn well_formed(l0: &[usize], l1: &[usize], len: usize, n: usize) -> bool {
    let mut seen = HashSet::with_capacity(2 * len);
    l0.len() == len && l1.len() == len && l0.iter().chain(l1).all(|&p| p < n && seen.insert(p))
}

/// Runs the IH exchange with Bob as sender and Alice as receiver, recording
/// each round.
fn interactive_hashing(
    s: &mut Session,
    k: usize,
    input: BitVec,
) -> Result<crate::ih::IHOutcome> {
    let mut sender = HonestSender::new(input);
    let tx = &mut s.tx;
    ih_run_with(k, &mut sender, &mut s.alice_rng, |i, delta, bit| {
        tx.push(format!("IH.D{i}"), Party::Alice, Payload::Bits(delta.clone()));
        tx.push(format!("IH.P{i}"), Party::Bob, Payload::Bit(bit));
    })
}

fn expect(params: &ProtocolParams, variant: Variant) -> Result<()> {
    if params.variant == variant {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{} parameters passed to a {variant} runner", params.variant)))
    }
}

pub(crate) fn le_half_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
    source: &Source,
) -> Result<SessionOutcome> {
    expect(params, Variant::MalLeHalf)?;
    inputs.check(params)?;
    let mut s = Session::open(params, cfg, source, |n, rng| alice.channel_input(n, rng))?;
    let (n, beta_n, gamma_n) = (params.n, params.beta_n, params.gamma_n);
    let u = inputs.choice;
    let y = s.out.y.clone();
    let z = if bob.colludes_with_eve() { s.out.z.clone() } else { None };
    let (e, ebar) = erasure_sets(&y);

    // Step 2.
    if ebar.len() < beta_n + gamma_n || e.len() < beta_n - gamma_n {
        let site = AbortSite::new(2, Party::Bob, "insufficient erasures/non-erasures");
        return Ok(s.finish(inputs, Ending::abort(site)));
    }
    let ctx = BobContext {
        params,
        choice: u,
        y: &y,
        z: z.as_ref(),
        e: &e,
        ebar: &ebar,
    };

    // Step 3.
    let codec = SubsetCodec::new(beta_n, gamma_n)?;
    let tuples = bob.tuples_le_half(&ctx, &codec, &mut s.bob_rng)?;
    let mut sel = vec![Vec::new(), Vec::new()];
    sel[u] = tuples.good.clone();
    sel[1 - u] = tuples.bad.clone();
    s.tx.push("L0", Party::Bob, Payload::Indices(sel[0].clone()));
    s.tx.push("L1", Party::Bob, Payload::Indices(sel[1].clone()));

    // Step 4.
    if !well_formed(&sel[0], &sel[1], beta_n, n) {
        let end = Ending {
            selections: sel,
            ..Ending::abort(AbortSite::check(4, "malformed/overlapping selections"))
        };
        return Ok(s.finish(inputs, end));
    }
    let l = [sel[0].clone(), sel[1].clone()];

    // Step 5.
    let ih = interactive_hashing(&mut s, params.ih_bits, tuples.s.clone())?;
    let phi = ih.phi.expect("honest sender");
    let j = [codec.string_to_subset_onto(&ih.s0)?, codec.string_to_subset_onto(&ih.s1)?];

    // Step 6.
    let theta = phi ^ (u == 1);
    s.tx.push("THETA", Party::Bob, Payload::Bit(theta));
    let checked = [
        j[usize::from(!theta)].iter().map(|&k| l[0][k]).collect::<Vec<_>>(),
        j[usize::from(theta)].iter().map(|&k| l[1][k]).collect::<Vec<_>>(),
    ];
    for (i, positions) in checked.iter().enumerate() {
        let bits: Vec<bool> = positions.iter().map(|&p| bob.reveal_bit(&ctx, p, &mut s.bob_rng)).collect();
        s.tx.push(format!("R{i}"), Party::Bob, Payload::Bits(BitVec::from_bools(&bits)));
    }

    // Step 7.
    let theta_a = s.tx.bit("THETA").expect("sent above");
    let alice_checked = [
        j[usize::from(!theta_a)].iter().map(|&k| l[0][k]).collect::<Vec<_>>(),
        j[usize::from(theta_a)].iter().map(|&k| l[1][k]).collect::<Vec<_>>(),
    ];
    let honest_reveal = (0..2).all(|i| s.tx.bits(&format!("R{i}")) == Some(&bits_at(&s.x, &alice_checked[i])));
    if !honest_reveal {
        let end = Ending {
            selections: sel,
            ..Ending::abort(AbortSite::check(7, MISMATCH))
        };
        return Ok(s.finish(inputs, end));
    }

    // Step 8.
    let key_inputs = l.to_vec();
    alice_encrypt(&mut s.tx, &s.x, &mut s.alice_rng, &inputs.strings, &key_inputs)?;

    // Step 9.
    let bits: Vec<bool> = sel[u].iter().map(|&p| bob.reveal_bit(&ctx, p, &mut s.bob_rng)).collect();
    let k_hat = decrypt(&s.tx, u, Some(BitVec::from_bools(&bits)))?;
    let end = Ending {
        k_hat,
        selections: sel,
        key_inputs,
        ..Ending::default()
    };
    Ok(s.finish(inputs, end))
}

pub(crate) fn gt_half_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
    source: &Source,
) -> Result<SessionOutcome> {
    expect(params, Variant::MalGtHalf)?;
    inputs.check(params)?;
    let mut s = Session::open(params, cfg, source, |n, rng| alice.channel_input(n, rng))?;
    let (n, beta_n) = (params.n, params.beta_n);
    let u = inputs.choice;
    let y = s.out.y.clone();
    let z = if bob.colludes_with_eve() { s.out.z.clone() } else { None };
    let (e, ebar) = erasure_sets(&y);

    // Step 2.
    if ebar.len() < beta_n {
        let site = AbortSite::new(2, Party::Bob, "insufficient non-erasures");
        return Ok(s.finish(inputs, Ending::abort(site)));
    }
    let ctx = BobContext {
        params,
        choice: u,
        y: &y,
        z: z.as_ref(),
        e: &e,
        ebar: &ebar,
    };

    // Steps 3 and 4.
    let codec = SubsetCodec::new(n, beta_n)?;
    let input = bob.choose_string_gt_half(&ctx, &codec, &mut s.bob_rng)?;
    if input.len() != codec.m_bits() {
        return Err(Error::Dimension(format!("IH input of length {} for {} bits", input.len(), codec.m_bits())));
    }

    // Step 5.
    let ih = interactive_hashing(&mut s, params.ih_bits, input)?;
    if !codec.contains(&ih.s0) || !codec.contains(&ih.s1) {
        let site = AbortSite::new(5, Party::Alice, "hashing output outside the ranked range");
        return Ok(s.finish(inputs, Ending::abort(site)));
    }
    let l = [codec.string_to_subset(&ih.s0)?, codec.string_to_subset(&ih.s1)?];
    let phi = ih.phi.expect("honest sender");
    let sel = l.to_vec();

    // Step 6.
    let common: Vec<usize> = sorted_difference(&l[0], &sorted_difference(&l[0], &l[1]));
    let (beta, delta, bn) = (params.beta, params.delta, beta_n as f64);
    let size = common.len() as f64;
    if size < (beta - delta) * bn - 1e-9 || size > (beta + delta) * bn + 1e-9 {
        let end = Ending {
            selections: sel,
            ..Ending::abort(AbortSite::new(6, Party::Alice, "overlap outside the expected window"))
        };
        return Ok(s.finish(inputs, end));
    }

    // Step 7.
    let theta = phi ^ (u == 1);
    s.tx.push("THETA", Party::Bob, Payload::Bit(theta));
    let bits: Vec<bool> = common.iter().map(|&p| bob.reveal_bit(&ctx, p, &mut s.bob_rng)).collect();
    s.tx.push("R", Party::Bob, Payload::Bits(BitVec::from_bools(&bits)));

    // Step 8.
    if s.tx.bits("R") != Some(&bits_at(&s.x, &common)) {
        let end = Ending {
            selections: sel,
            ..Ending::abort(AbortSite::check(8, MISMATCH))
        };
        return Ok(s.finish(inputs, end));
    }

    // Step 9.
    let theta_a = s.tx.bit("THETA").expect("sent above");
    let key_inputs = vec![
        sorted_difference(&l[usize::from(theta_a)], &common),
        sorted_difference(&l[usize::from(!theta_a)], &common),
    ];
    alice_encrypt(&mut s.tx, &s.x, &mut s.alice_rng, &inputs.strings, &key_inputs)?;

    // Step 10.
    let own = sorted_difference(&l[usize::from(phi)], &common);
    let bits: Vec<bool> = own.iter().map(|&p| bob.reveal_bit(&ctx, p, &mut s.bob_rng)).collect();
    let k_hat = decrypt(&s.tx, u, Some(BitVec::from_bools(&bits)))?;
    let end = Ending {
        k_hat,
        selections: sel,
        key_inputs,
        ..Ending::default()
    };
    Ok(s.finish(inputs, end))
}

/// The protocol for `ε₁ ≤ ½` against a malicious Bob.
pub fn run_malicious_le_half(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
) -> Result<SessionOutcome> {
    le_half_session(params, inputs, cfg, alice, bob, &Source::Seed(seed))
}

/// The protocol for `ε₁ > ½` against a malicious Bob.
pub fn run_malicious_gt_half(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
    alice: &mut dyn AliceStrategy,
    bob: &mut dyn BobStrategy,
) -> Result<SessionOutcome> {
    gt_half_session(params, inputs, cfg, alice, bob, &Source::Seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ParamRequest;
    use crate::rng::rng_from_seed;

    #[test]
    fn honest_le_half_decodes() {
        let p = ParamRequest::new(Variant::MalLeHalf, 0.005, 0.4, 0.5, 3000).derive().unwrap();
        assert_eq!((p.beta_n, p.gamma_n, p.m), (1350, 240, 15));
        let cfg = ChannelConfig::independent(0.4, 0.5).unwrap();
        let mut ok = 0;
        for seed in 0..6 {
            let inputs = PartyInputs::random(&p, &mut rng_from_seed(100 + seed));
            let out = run_malicious_le_half(&p, &inputs, &cfg, seed, &mut HonestAlice, &mut HonestBob).unwrap();
            if out.correct() == Some(true) {
                ok += 1;
            }
            assert!(out.abort.as_ref().is_none_or(|a| !a.detection));
        }
        assert!(ok >= 5);
    }

    #[test]
    fn honest_gt_half_never_trips_a_check() {
        let p = ParamRequest::new(Variant::MalGtHalf, 0.04, 0.6, 0.5, 2000).derive().unwrap();
        let cfg = ChannelConfig::independent(0.6, 0.5).unwrap();
        let mut done = 0;
        for seed in 0..20 {
            let inputs = PartyInputs::random(&p, &mut rng_from_seed(200 + seed));
            let out = run_malicious_gt_half(&p, &inputs, &cfg, seed, &mut HonestAlice, &mut HonestBob).unwrap();
            match &out.abort {
                None => {
                    done += 1;
                    assert_eq!(out.correct(), Some(true));
                }
                Some(a) => assert!(!a.detection, "{a}"),
            }
        }
        assert!(done > 0);
    }

    #[test]
    fn wrong_variant_is_rejected() {
        let p = ParamRequest::new(Variant::MalGtHalf, 0.04, 0.6, 0.5, 2000).derive().unwrap();
        let cfg = ChannelConfig::independent(0.6, 0.5).unwrap();
        let inputs = PartyInputs::random(&p, &mut rng_from_seed(1));
        assert!(run_malicious_le_half(&p, &inputs, &cfg, 0, &mut HonestAlice, &mut HonestBob).is_err());
    }
}

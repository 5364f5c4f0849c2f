//! Protocols for honest-but-curious parties over the independent channel,
//! and the two-party protocol they embed.

use crate::channel::{erasure_sets, ChannelConfig, TritString};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::hash::sample_hash;
use crate::rng::{sample_subset, sorted_difference, SessionRng};

use super::{
    known_bits, uniform_input, AbortSite, Ending, Party, PartyInputs, Payload, ProtocolParams, Session,
    SessionOutcome, Source, Transcript, Variant,
};

const SHORT: &str = "insufficient erasures/non-erasures";

/// Merge of two sorted, disjoint index lists.
pub(crate) fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

fn expect_variant(params: &ProtocolParams, allowed: &[Variant]) -> Result<()> {
    if allowed.contains(&params.variant) {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("parameters for {} passed to a {:?} runner", params.variant, allowed)))
    }
}

/// Alice samples `F_i` for every key and publishes `F_i`, then
/// `K_i ⊕ F_i(X|positions_i)`.
pub(crate) fn alice_encrypt(
    tx: &mut Transcript,
    x: &BitVec,
    rng: &mut SessionRng,
    strings: &[BitVec],
    positions: &[Vec<usize>],
) -> Result<()> {
    let hashes = positions
        .iter()
        .zip(strings)
        .map(|(pos, k)| sample_hash(pos.len(), k.len(), rng))
        .collect::<Result<Vec<_>>>()?;
    for (i, f) in hashes.iter().enumerate() {
        tx.push(format!("F{i}"), Party::Alice, Payload::Hash(f.matrix().clone()));
    }
    for (i, ((f, pos), k)) in hashes.iter().zip(positions).zip(strings).enumerate() {
        let c = k.xor(&f.apply(&x.select(pos))?)?;
        tx.push(format!("C{i}"), Party::Alice, Payload::Bits(c));
    }
    Ok(())
}

/// The receiver's decryption of string `index` from known bits at
/// `positions`. `None` if any of those bits is unknown.
pub(crate) fn decrypt(tx: &Transcript, index: usize, bits: Option<BitVec>) -> Result<Option<BitVec>> {
    let Some(bits) = bits else { return Ok(None) };
    let f = tx
        .hash(&format!("F{index}"))
        .ok_or_else(|| Error::Replay(format!("missing F{index}")))?;
    let c = tx
        .bits(&format!("C{index}"))
        .ok_or_else(|| Error::Replay(format!("missing C{index}")))?;
    Ok(Some(c.xor(&f.mat_vec_mul(&bits)?)?))
}

/// Bob's step 3 of the selection protocols: the good set from `Ē`, and the
/// bad sets from `E` (2-privacy) or with `nr` forced erasures each
/// (1-privacy).
fn build_selections(
    p: &ProtocolParams,
    choice: usize,
    e: &[usize],
    ebar: &[usize],
    rng: &mut SessionRng,
) -> Vec<Vec<usize>> {
    let mut sel = vec![Vec::new(); p.branches];
    sel[choice] = sample_subset(ebar, p.beta_n, rng).expect("size checked at step 2");
    let others: Vec<usize> = (0..p.branches).filter(|&j| j != choice).collect();
    let mut e_pool = e.to_vec();
    if p.variant.two_private() {
        for &j in &others {
            let l = sample_subset(&e_pool, p.beta_n, rng).expect("size checked at step 2");
            e_pool = sorted_difference(&e_pool, &l);
            sel[j] = l;
        }
    } else {
        let mut forced = Vec::with_capacity(others.len());
        for _ in &others {
            let l = sample_subset(&e_pool, p.nr, rng).expect("size checked at step 2");
            e_pool = sorted_difference(&e_pool, &l);
            forced.push(l);
        }
        let mut pool = sorted_union(&sorted_difference(ebar, &sel[choice]), &e_pool);
        for (&j, l) in others.iter().zip(forced) {
            let extra = sample_subset(&pool, p.beta_n - p.nr, rng).expect("N·βn ≤ n");
            pool = sorted_difference(&pool, &extra);
            sel[j] = sorted_union(&l, &extra);
        }
    }
    sel
}

fn selection_steps(s: &mut Session, inputs: &PartyInputs) -> Result<Ending> {
    let p = s.params;
    let (e, ebar) = erasure_sets(&s.out.y);
    let bad = p.branches - 1;
    let need_e = bad * if p.variant.two_private() { p.beta_n } else { p.nr };
    if ebar.len() < p.beta_n || e.len() < need_e {
        return Ok(Ending::abort(AbortSite::new(2, Party::Bob, SHORT)));
    }
    let sel = build_selections(p, inputs.choice, &e, &ebar, &mut s.bob_rng);
    for (i, l) in sel.iter().enumerate() {
        s.tx.push(format!("L{i}"), Party::Bob, Payload::Indices(l.clone()));
    }

    let published: Vec<Vec<usize>> = (0..p.branches)
        .map(|i| s.tx.indices(&format!("L{i}")).map(<[usize]>::to_vec).unwrap_or_default())
        .collect();
    alice_encrypt(&mut s.tx, &s.x, &mut s.alice_rng, &inputs.strings, &published)?;

    let k_hat = decrypt(&s.tx, inputs.choice, known_bits(&s.out.y, &sel[inputs.choice]))?;
    Ok(Ending {
        k_hat,
        selections: sel,
        key_inputs: published,
        ..Ending::default()
    })
}

pub(crate) fn selection_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    source: &Source,
) -> Result<SessionOutcome> {
    inputs.check(params)?;
    let mut s = Session::open(params, cfg, source, uniform_input)?;
    let end = selection_steps(&mut s, inputs)?;
    Ok(s.finish(inputs, end))
}

/// The 2-private protocol for two strings.
pub fn run_c2p(params: &ProtocolParams, inputs: &PartyInputs, cfg: &ChannelConfig, seed: u64) -> Result<SessionOutcome> {
    expect_variant(params, &[Variant::C2p])?;
    selection_session(params, inputs, cfg, &Source::Seed(seed))
}

/// The 1-private protocol for two strings.
pub fn run_c1p(params: &ProtocolParams, inputs: &PartyInputs, cfg: &ChannelConfig, seed: u64) -> Result<SessionOutcome> {
    expect_variant(params, &[Variant::C1p])?;
    selection_session(params, inputs, cfg, &Source::Seed(seed))
}

/// 1-of-N transfer. With `N = 2` this is exactly [`run_c2p`] or [`run_c1p`].
pub fn run_one_of_n(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
) -> Result<SessionOutcome> {
    expect_variant(params, &[Variant::OneOfN2p, Variant::OneOfN1p, Variant::C2p, Variant::C1p])?;
    selection_session(params, inputs, cfg, &Source::Seed(seed))
}

/// The two-party protocol run by Alice and a receiver over the positions in
/// `universe`, using raw bits as one-time pads.
pub(crate) struct PadExchange<'a> {
    pub prefix: &'a str,
    pub receiver: Party,
    pub abort_step: u8,
    pub obs: &'a TritString,
    pub universe: &'a [usize],
    pub count: usize,
}

pub(crate) struct PadResult {
    pub abort: Option<AbortSite>,
    pub estimate: Option<BitVec>,
    pub selections: Vec<Vec<usize>>,
    pub key_inputs: Vec<Vec<usize>>,
}

pub(crate) fn pad_exchange(
    ex: &PadExchange,
    tx: &mut Transcript,
    x: &BitVec,
    receiver_rng: &mut SessionRng,
    strings: &[BitVec],
    choice: usize,
) -> Result<PadResult> {
    let (mut e, mut ebar) = (Vec::new(), Vec::new());
    for &i in ex.universe {
        if ex.obs.is_erased(i) {
            e.push(i);
        } else {
            ebar.push(i);
        }
    }
    if e.len() < ex.count || ebar.len() < ex.count {
        return Ok(PadResult {
            abort: Some(AbortSite::new(ex.abort_step, ex.receiver, SHORT)),
            estimate: None,
            selections: Vec::new(),
            key_inputs: Vec::new(),
        });
    }
    let mut sel = vec![Vec::new(), Vec::new()];
    sel[choice] = sample_subset(&ebar, ex.count, receiver_rng).expect("size checked");
    sel[1 - choice] = sample_subset(&e, ex.count, receiver_rng).expect("size checked");
    for (i, l) in sel.iter().enumerate() {
        tx.push(format!("{}L{i}", ex.prefix), ex.receiver, Payload::Indices(l.clone()));
    }
    let published: Vec<Vec<usize>> = (0..2)
        .map(|i| tx.indices(&format!("{}L{i}", ex.prefix)).map(<[usize]>::to_vec).unwrap_or_default())
        .collect();
    for (i, (k, pos)) in strings.iter().zip(&published).enumerate() {
        tx.push(format!("{}C{i}", ex.prefix), Party::Alice, Payload::Bits(k.xor(&x.select(pos))?));
    }
    let estimate = match known_bits(ex.obs, &sel[choice]) {
        Some(pad) => {
            let c = tx.bits(&format!("{}C{choice}", ex.prefix)).expect("just pushed");
            Some(c.xor(&pad)?)
        }
        None => None,
    };
    Ok(PadResult {
        abort: None,
        estimate,
        selections: sel,
        key_inputs: published,
    })
}

pub(crate) fn two_party_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    source: &Source,
) -> Result<SessionOutcome> {
    inputs.check(params)?;
    let mut s = Session::open(params, cfg, source, uniform_input)?;
    let universe: Vec<usize> = (0..params.n).collect();
    let y = s.out.y.clone();
    let ex = PadExchange {
        prefix: "",
        receiver: Party::Bob,
        abort_step: 2,
        obs: &y,
        universe: &universe,
        count: params.nr,
    };
    let r = pad_exchange(&ex, &mut s.tx, &s.x, &mut s.bob_rng, &inputs.strings, inputs.choice)?;
    let end = Ending {
        abort: r.abort,
        k_hat: r.estimate,
        selections: r.selections,
        key_inputs: r.key_inputs,
        ..Ending::default()
    };
    Ok(s.finish(inputs, end))
}

/// The two-party protocol over a single erasure channel.
pub fn run_two_party(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
) -> Result<SessionOutcome> {
    expect_variant(params, &[Variant::TwoParty])?;
    two_party_session(params, inputs, cfg, &Source::Seed(seed))
}

pub(crate) fn pair_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    source: &Source,
) -> Result<SessionOutcome> {
    inputs.check(params)?;
    let mut s = Session::open(params, cfg, source, uniform_input)?;
    let p = params;
    let (e, ebar) = erasure_sets(&s.out.y);
    if ebar.len() < p.beta_n || e.len() < p.beta_n {
        return Ok(s.finish(inputs, Ending::abort(AbortSite::new(2, Party::Bob, SHORT))));
    }
    let u = inputs.choice;
    let mut sel = vec![Vec::new(), Vec::new()];
    sel[u] = sample_subset(&ebar, p.beta_n, &mut s.bob_rng).expect("size checked");
    sel[1 - u] = sample_subset(&e, p.beta_n, &mut s.bob_rng).expect("size checked");
    let shared = match &p.cathy {
        Some(c) => {
            let rest = sorted_difference(&e, &sel[1 - u]);
            match sample_subset(&rest, c.pool, &mut s.bob_rng) {
                Some(l) => l,
                None => {
                    let site = AbortSite::new(3, Party::Bob, "insufficient erasures for Cathy's positions");
                    return Ok(s.finish(inputs, Ending::abort(site)));
                }
            }
        }
        None => Vec::new(),
    };
    for (i, l) in sel.iter().enumerate() {
        s.tx.push(format!("L{i}"), Party::Bob, Payload::Indices(l.clone()));
    }
    s.tx.push("L", Party::Bob, Payload::Indices(shared.clone()));

    let published: Vec<Vec<usize>> = (0..2)
        .map(|i| s.tx.indices(&format!("L{i}")).map(<[usize]>::to_vec).unwrap_or_default())
        .collect();
    alice_encrypt(&mut s.tx, &s.x, &mut s.alice_rng, &inputs.strings, &published)?;
    let k_hat = decrypt(&s.tx, u, known_bits(&s.out.y, &sel[u]))?;

    let mut end = Ending {
        k_hat,
        selections: sel,
        key_inputs: published,
        ..Ending::default()
    };
    if let (Some(c), Some((j, w))) = (&p.cathy, &inputs.cathy) {
        let universe = s.tx.indices("L").map(<[usize]>::to_vec).unwrap_or_default();
        let z = s.out.z.clone().expect("independent topology carries Z");
        let ex = PadExchange {
            prefix: "C.",
            receiver: Party::Cathy,
            abort_step: 6,
            obs: &z,
            universe: &universe,
            count: c.set_size,
        };
        let r = pad_exchange(&ex, &mut s.tx, &s.x, &mut s.cathy_rng, j, *w)?;
        end.abort = r.abort;
        end.j_hat = r.estimate;
        end.cathy_key_inputs = r.key_inputs;
    }
    Ok(s.finish(inputs, end))
}

/// Independent transfers to Bob and to Cathy. Cathy's phase runs only when
/// the parameters carry a positive Cathy rate (which needs `ε₁ > 1/2`).
pub fn run_independent_pair(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
) -> Result<SessionOutcome> {
    expect_variant(params, &[Variant::IndependentPair])?;
    pair_session(params, inputs, cfg, &Source::Seed(seed))
}

//! The 1-private protocol for the degraded channel, where Eve's erasures
//! contain Bob's. Bob cannot publish his selections directly, so he sends
//! their complements and a padded membership string `Q`.

use crate::channel::{erasure_sets, ChannelConfig};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::hash::sample_hash;
use crate::rng::{sample_subset, sorted_difference};

use super::hbc::{alice_encrypt, decrypt, sorted_union};
use super::{
    known_bits, uniform_input, AbortSite, DegradedCounts, Ending, Party, PartyInputs, Payload, ProtocolParams,
    Session, SessionOutcome, Source, Transcript, Variant,
};

/// Alice's reading of the published `G̃, B̃, F_L, Q ⊕ F_L(X|G̃_L)`:
/// `(L₀, L₁, G̃_S)`, or `None` if the messages are inconsistent.
pub(crate) fn reconstruct(
    x: &BitVec,
    tx: &Transcript,
    counts: &DegradedCounts,
) -> Result<Option<(Vec<usize>, Vec<usize>, Vec<usize>)>> {
    let n = x.len();
    let (Some(g), Some(b), Some(pad_hash), Some(masked_q)) =
        (tx.indices("Gt"), tx.indices("Bt"), tx.hash("FL"), tx.bits("QC"))
    else {
        return Ok(None);
    };
    let (g_large, g_small) = (counts.g_large, counts.g_small);
    if g.len() < g_large + g_small || g.iter().chain(b).any(|&i| i >= n) {
        return Ok(None);
    }
    let mut g = g.to_vec();
    g.sort_unstable();
    let mut b = b.to_vec();
    b.sort_unstable();
    let all: Vec<usize> = (0..n).collect();
    let union = sorted_difference(&sorted_difference(&all, &g), &b);
    if union.len() != masked_q.len() || pad_hash.cols() != g_large || pad_hash.rows() != union.len() {
        return Ok(None);
    }
    let q = masked_q.xor(&pad_hash.mat_vec_mul(&x.select(&g[..g_large]))?)?;
    let (mut l0, mut l1) = (Vec::new(), Vec::new());
    for (i, &pos) in union.iter().enumerate() {
        if q.get(i) {
            l1.push(pos);
        } else {
            l0.push(pos);
        }
    }
    Ok(Some((l0, l1, g[g_large..g_large + g_small].to_vec())))
}

pub(crate) fn degraded_session(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    source: &Source,
) -> Result<SessionOutcome> {
    inputs.check(params)?;
    let counts = params
        .degraded
        .clone()
        .ok_or_else(|| Error::InvalidParams("degraded counts missing".into()))?;
    let mut s = Session::open(params, cfg, source, uniform_input)?;
    let n = params.n as f64;
    let (e1, delta) = (params.eps1, params.delta);

    // Step 2.
    let (e, ebar) = erasure_sets(&s.out.y);
    if (ebar.len() as f64) < (1.0 - e1 - delta) * n - 1e-9 || (e.len() as f64) < (e1 - delta) * n - 1e-9 {
        let site = AbortSite::new(2, Party::Bob, "insufficient erasures/non-erasures");
        return Ok(s.finish(inputs, Ending::abort(site)));
    }
    let (Some(good), Some(bad)) = (
        sample_subset(&ebar, counts.selection, &mut s.bob_rng),
        sample_subset(&e, counts.selection, &mut s.bob_rng),
    ) else {
        let site = AbortSite::new(2, Party::Bob, "insufficient erasures/non-erasures");
        return Ok(s.finish(inputs, Ending::abort(site)));
    };

    // Step 3.
    let u = inputs.choice;
    let mut sel = vec![Vec::new(), Vec::new()];
    sel[u] = good;
    sel[1 - u] = bad;
    let g_tilde = sorted_difference(&ebar, &sel[u]);
    let b_tilde = sorted_difference(&e, &sel[1 - u]);
    s.tx.push("Gt", Party::Bob, Payload::Indices(g_tilde.clone()));
    s.tx.push("Bt", Party::Bob, Payload::Indices(b_tilde));

    // Step 4.
    let union = sorted_union(&sel[0], &sel[1]);
    let mut q = BitVec::zeros(union.len());
    for (i, pos) in union.iter().enumerate() {
        q.set(i, sel[1].binary_search(pos).is_ok());
    }

    // Step 5.
    if g_tilde.len() < counts.g_large + counts.g_small {
        let site = AbortSite::new(5, Party::Bob, "degraded: G̃ underflow");
        return Ok(s.finish(inputs, Ending::abort(site)));
    }
    let g_large = &g_tilde[..counts.g_large];
    let g_small = g_tilde[counts.g_large..counts.g_large + counts.g_small].to_vec();

    // Step 6.
    let f_l = sample_hash(counts.g_large, union.len(), &mut s.bob_rng)?;
    let pad = f_l.apply(&known_bits(&s.out.y, g_large).expect("G̃ ⊂ Ē"))?;
    s.tx.push("FL", Party::Bob, Payload::Hash(f_l.matrix().clone()));
    s.tx.push("QC", Party::Bob, Payload::Bits(q.xor(&pad)?));

    // Step 7.
    let recovered = reconstruct(&s.x, &s.tx, &counts)?;
    let Some((l0, l1, gs)) = recovered else {
        let site = AbortSite::new(7, Party::Alice, "malformed selection message");
        return Ok(s.finish(inputs, Ending::abort(site)));
    };
    let key_inputs = vec![sorted_union(&l0, &gs), sorted_union(&l1, &gs)];
    alice_encrypt(&mut s.tx, &s.x, &mut s.alice_rng, &inputs.strings, &key_inputs)?;

    // Step 8.
    let bob_positions = sorted_union(&sel[u], &g_small);
    let k_hat = decrypt(&s.tx, u, known_bits(&s.out.y, &bob_positions))?;
    let end = Ending {
        k_hat,
        selections: sel,
        key_inputs,
        ..Ending::default()
    };
    Ok(s.finish(inputs, end))
}

/// The 1-private protocol over the degraded channel.
pub fn run_degraded(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
) -> Result<SessionOutcome> {
    if params.variant != Variant::Degraded {
        return Err(Error::InvalidParams(format!("{} parameters passed to run_degraded", params.variant)));
    }
    degraded_session(params, inputs, cfg, &Source::Seed(seed))
}

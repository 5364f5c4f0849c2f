//! Recomputing a transcript from the parties' views alone.

use crate::channel::{ChannelConfig, ChannelOutput};
use crate::error::{Error, Result};

use super::degraded::degraded_session;
use super::hbc::{pair_session, selection_session, two_party_session};
use super::malicious::{gt_half_session, le_half_session};
use super::{HonestAlice, HonestBob, Party, PartyInputs, ProtocolParams, SessionOutcome, Source, Variant};

/// Reruns an honest session from the seeds, inputs and channel outputs held
/// in its views and checks that every public message comes out identical.
pub fn replay(outcome: &SessionOutcome) -> Result<()> {
    let p = &outcome.params;
    let missing = |what: &str| Error::Replay(format!("views lack {what}"));
    let strings = outcome.alice.strings.clone().ok_or_else(|| missing("Alice's strings"))?;
    let choice = outcome.bob.choice.ok_or_else(|| missing("Bob's choice"))?;
    let mut inputs = PartyInputs::new(strings, choice);
    if let (Some(j), Some(w)) = (
        outcome.alice.cathy_strings.clone(),
        outcome.cathy.as_ref().and_then(|c| c.cathy_choice),
    ) {
        inputs = inputs.with_cathy(j, w);
    }
    let seed_of = |party: Party| -> Result<u64> {
        match outcome.view(party) {
            Ok(v) => v.seed_of(party).ok_or_else(|| missing(&format!("{party}'s seed"))),
            Err(_) => Ok(0),
        }
    };
    let z = outcome
        .eve
        .as_ref()
        .or(outcome.cathy.as_ref())
        .and_then(|v| v.z.clone());
    let source = Source::Replay {
        seed: outcome.seed,
        alice: seed_of(Party::Alice)?,
        bob: seed_of(Party::Bob)?,
        cathy: seed_of(Party::Cathy)?,
        output: ChannelOutput {
            y: outcome.bob.y.clone().ok_or_else(|| missing("Y"))?,
            z,
        },
    };
    let again = dispatch(p, &inputs, &p.channel_config()?, &source)?;
    let (a, b) = (outcome.transcript.serialize(), again.transcript.serialize());
    if a != b {
        let line = a
            .lines()
            .zip(b.lines())
            .position(|(x, y)| x != y)
            .unwrap_or_else(|| a.lines().count().min(b.lines().count()));
        return Err(Error::Replay(format!("transcripts differ at message {line}")));
    }
    Ok(())
}

/// Runs the honest protocol for `params.variant`.
pub(crate) fn dispatch(
    p: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    source: &Source,
) -> Result<SessionOutcome> {
    match p.variant {
        Variant::C2p | Variant::C1p | Variant::OneOfN2p | Variant::OneOfN1p => selection_session(p, inputs, cfg, source),
        Variant::TwoParty => two_party_session(p, inputs, cfg, source),
        Variant::IndependentPair => pair_session(p, inputs, cfg, source),
        Variant::Degraded => degraded_session(p, inputs, cfg, source),
        Variant::MalLeHalf => le_half_session(p, inputs, cfg, &mut HonestAlice, &mut HonestBob, source),
        Variant::MalGtHalf => gt_half_session(p, inputs, cfg, &mut HonestAlice, &mut HonestBob, source),
    }
}

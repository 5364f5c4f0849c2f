//! The session engine and the OT protocols built on it.
//!
//! A session is driven by one `u64` seed. Alice, Bob and Cathy each own a
//! generator seeded from their own [`party_seed`], and the channel draws from
//! a separate stream, so every public message can be recomputed from the
//! sending party's view (see [`replay`]).

mod degraded;
mod hbc;
mod malicious;
mod params;
mod replay;
mod transcript;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::channel::{transmit, ChannelConfig, ChannelOutput, Topology, TritString};
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::rng::{party_seed, rng_from_seed, stream_rng, SessionRng, Stream};

pub use degraded::run_degraded;
pub use hbc::{run_c1p, run_c2p, run_independent_pair, run_one_of_n, run_two_party};
pub use malicious::{
    honest_gt_half_string, honest_le_half_tuples, run_malicious_gt_half, run_malicious_le_half, AliceStrategy,
    BobContext, BobStrategy, HonestAlice, HonestBob, LeHalfTuples,
};
pub use params::{
    concentration_slack, derive_params, search_block_length, CathyParams, DegradedCounts, ParamRequest,
    ProtocolParams, Variant,
};
pub use replay::replay;

/// Runs the honest protocol selected by `params.variant` with session seed
/// `seed`.
pub fn run_honest(params: &ProtocolParams, inputs: &PartyInputs, cfg: &ChannelConfig, seed: u64) -> Result<SessionOutcome> {
    replay::dispatch(params, inputs, cfg, &Source::Seed(seed))
}
pub use transcript::{Message, Payload, Transcript};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
    Eve,
    Cathy,
}

impl Party {
    pub fn name(self) -> &'static str {
        match self {
            Party::Alice => "alice",
            Party::Bob => "bob",
            Party::Eve => "eve",
            Party::Cathy => "cathy",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Party {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alice" => Ok(Party::Alice),
            "bob" => Ok(Party::Bob),
            "eve" => Ok(Party::Eve),
            "cathy" => Ok(Party::Cathy),
            other => Err(Error::UnknownParty(other.to_string())),
        }
    }
}

/// Where and by whom a session was aborted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbortSite {
    pub step: u8,
    pub party: Party,
    pub label: &'static str,
    /// Raised by one of Alice's consistency checks on Bob's messages.
    pub detection: bool,
}

impl AbortSite {
    pub(crate) fn new(step: u8, party: Party, label: &'static str) -> Self {
        AbortSite {
            step,
            party,
            label,
            detection: false,
        }
    }

    pub(crate) fn check(step: u8, label: &'static str) -> Self {
        AbortSite {
            step,
            party: Party::Alice,
            label,
            detection: true,
        }
    }

    /// Short key used in statistics, e.g. `step2:bob:insufficient erasures`.
    pub fn key(&self) -> String {
        format!("step{}:{}:{}", self.step, self.party, self.label)
    }
}

impl fmt::Display for AbortSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} aborted at step {} ({})", self.party, self.step, self.label)
    }
}

/// Private inputs of the parties.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartyInputs {
    /// Alice's strings `K₀ … K_{N−1}`.
    pub strings: Vec<BitVec>,
    /// Bob's choice `U`.
    pub choice: usize,
    /// Alice's second pair `J₀, J₁` and Cathy's choice `W` (independent pair).
    pub cathy: Option<(Vec<BitVec>, usize)>,
}

impl PartyInputs {
    pub fn new(strings: Vec<BitVec>, choice: usize) -> Self {
        PartyInputs {
            strings,
            choice,
            cathy: None,
        }
    }

    pub fn with_cathy(mut self, strings: Vec<BitVec>, choice: usize) -> Self {
        self.cathy = Some((strings, choice));
        self
    }

    /// Uniform strings and choices sized for `params`.
    pub fn random<R: Rng + ?Sized>(params: &ProtocolParams, rng: &mut R) -> Self {
        let strings = (0..params.branches).map(|_| BitVec::random(params.m, rng)).collect();
        let choice = rng.random_range(0..params.branches);
        let mut inputs = PartyInputs::new(strings, choice);
        if let Some(c) = &params.cathy {
            let j = (0..2).map(|_| BitVec::random(c.set_size, rng)).collect();
            inputs = inputs.with_cathy(j, rng.random_range(0..2));
        }
        inputs
    }

    pub(crate) fn check(&self, params: &ProtocolParams) -> Result<()> {
        if self.strings.len() != params.branches {
            return Err(Error::InvalidParams(format!(
                "expected {} strings, got {}",
                params.branches,
                self.strings.len()
            )));
        }
        if self.strings.iter().any(|k| k.len() != params.m) {
            return Err(Error::Dimension(format!("every string must have length {}", params.m)));
        }
        if self.choice >= params.branches {
            return Err(Error::OutOfRange(format!("choice {} of {}", self.choice, params.branches)));
        }
        match (&params.cathy, &self.cathy) {
            (None, _) => Ok(()),
            (Some(c), Some((j, w))) if j.len() == 2 && *w < 2 && j.iter().all(|s| s.len() == c.set_size) => Ok(()),
            (Some(c), _) => Err(Error::InvalidParams(format!(
                "the pair variant needs two strings of length {} and a binary choice for Cathy",
                c.set_size
            ))),
        }
    }
}

/// Everything one party (or a coalition) has seen by the end of a session:
/// inputs, private randomness, channel observations and the transcript.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct View {
    pub parties: Vec<Party>,
    /// Alice's strings.
    pub strings: Option<Vec<BitVec>>,
    /// Alice's strings for Cathy.
    pub cathy_strings: Option<Vec<BitVec>>,
    /// Bob's choice `U`.
    pub choice: Option<usize>,
    /// Cathy's choice `W`.
    pub cathy_choice: Option<usize>,
    /// Private seeds, one per randomized party in the view.
    pub seeds: Vec<(Party, u64)>,
    pub x: Option<BitVec>,
    pub y: Option<TritString>,
    pub z: Option<TritString>,
    #[serde(skip)]
    pub transcript: Option<Arc<Transcript>>,
}

impl View {
    pub fn is_empty(&self) -> bool {
        self.parties.is_empty()
    }

    pub fn seed_of(&self, party: Party) -> Option<u64> {
        self.seeds.iter().find(|(p, _)| *p == party).map(|&(_, s)| s)
    }

    /// Per-position channel knowledge of this view: `X` if present, else the
    /// merge of `Y` and `Z`. `None` when the view holds no observations.
    pub fn observations(&self) -> Result<Option<TritString>> {
        if let Some(x) = &self.x {
            return Ok(Some(TritString::from_bits(x)));
        }
        match (&self.y, &self.z) {
            (Some(y), Some(z)) => crate::channel::merge_psi(y, z).map(Some),
            (Some(y), None) => Ok(Some(y.clone())),
            (None, Some(z)) => Ok(Some(z.clone())),
            (None, None) => Ok(None),
        }
    }
}

/// The record of one protocol execution.
#[derive(Clone, Debug, Serialize)]
pub struct SessionOutcome {
    pub variant: Variant,
    pub seed: u64,
    pub params: ProtocolParams,
    /// `None` when the session ran to completion.
    pub abort: Option<AbortSite>,
    /// Bob's estimate `K̂_U`.
    pub k_hat: Option<BitVec>,
    /// Cathy's estimate `Ĵ_W` (independent pair).
    pub j_hat: Option<BitVec>,
    pub alice: View,
    pub bob: View,
    pub eve: Option<View>,
    pub cathy: Option<View>,
    #[serde(skip)]
    pub transcript: Arc<Transcript>,
    /// The selections Bob built, indexed by string (`L₀ … L_{N−1}`). Part of
    /// Bob's view: they are functions of his seed, `U` and `Y`.
    pub selections: Vec<Vec<usize>>,
    /// Positions of `X` hashed into each of Alice's keys, as Alice computed
    /// them from her view. Empty if she never got that far.
    pub key_inputs: Vec<Vec<usize>>,
    /// The pad positions of Cathy's two-party phase.
    pub cathy_key_inputs: Vec<Vec<usize>>,
}

impl SessionOutcome {
    pub fn aborted(&self) -> bool {
        self.abort.is_some()
    }

    /// Whether every receiver decoded the string it chose; `None` if aborted.
    pub fn correct(&self) -> Option<bool> {
        if self.aborted() {
            return None;
        }
        let chosen = self.alice.strings.as_ref()?.get(self.bob.choice?)?;
        let mut ok = self.k_hat.as_ref() == Some(chosen);
        if let (Some(j), Some(w)) = (&self.alice.cathy_strings, self.cathy.as_ref().and_then(|c| c.cathy_choice)) {
            ok &= self.j_hat.as_ref() == j.get(w);
        }
        Some(ok)
    }

    pub fn view(&self, party: Party) -> Result<&View> {
        match party {
            Party::Alice => Some(&self.alice),
            Party::Bob => Some(&self.bob),
            Party::Eve => self.eve.as_ref(),
            Party::Cathy => self.cathy.as_ref(),
        }
        .ok_or_else(|| Error::UnknownParty(format!("{party} takes no part in {}", self.variant)))
    }

    /// Bob's choice `U`.
    pub fn choice(&self) -> usize {
        self.bob.choice.unwrap_or(0)
    }
}

/// How a session obtains its randomness and channel outputs.
#[derive(Clone, Debug)]
pub(crate) enum Source {
    Seed(u64),
    Replay {
        seed: u64,
        alice: u64,
        bob: u64,
        cathy: u64,
        output: ChannelOutput,
    },
}

/// Mutable state of a running session.
pub(crate) struct Session<'p> {
    pub params: &'p ProtocolParams,
    pub seed: u64,
    pub seeds: [u64; 3],
    pub alice_rng: SessionRng,
    pub bob_rng: SessionRng,
    pub cathy_rng: SessionRng,
    pub x: BitVec,
    pub out: ChannelOutput,
    pub tx: Transcript,
    /// Which party observes `Z`: Eve, or Cathy in the pair variant.
    pub z_holder: Option<Party>,
}

/// What an engine hands back when it stops.
#[derive(Default)]
pub(crate) struct Ending {
    pub abort: Option<AbortSite>,
    pub k_hat: Option<BitVec>,
    pub j_hat: Option<BitVec>,
    pub selections: Vec<Vec<usize>>,
    pub key_inputs: Vec<Vec<usize>>,
    pub cathy_key_inputs: Vec<Vec<usize>>,
}

impl Ending {
    pub fn abort(site: AbortSite) -> Self {
        Ending {
            abort: Some(site),
            ..Ending::default()
        }
    }
}

impl<'p> Session<'p> {
    /// Steps shared by every protocol: Alice draws `X` with `input` and sends
    /// it through the channel.
    pub fn open(
        params: &'p ProtocolParams,
        cfg: &ChannelConfig,
        source: &Source,
        input: impl FnOnce(usize, &mut SessionRng) -> BitVec,
    ) -> Result<Self> {
        if cfg.topology != params.variant.topology() {
            return Err(Error::InvalidParams(format!(
                "{} runs over the {:?} topology, got {:?}",
                params.variant,
                params.variant.topology(),
                cfg.topology
            )));
        }
        let (seed, seeds) = match source {
            Source::Seed(seed) => (
                *seed,
                [
                    party_seed(*seed, Stream::Alice),
                    party_seed(*seed, Stream::Bob),
                    party_seed(*seed, Stream::Cathy),
                ],
            ),
            Source::Replay {
                seed,
                alice,
                bob,
                cathy,
                ..
            } => (*seed, [*alice, *bob, *cathy]),
        };
        let mut alice_rng = rng_from_seed(seeds[0]);
        let x = input(params.n, &mut alice_rng);
        if x.len() != params.n {
            return Err(Error::Dimension(format!("channel input of length {} for n = {}", x.len(), params.n)));
        }
        let out = match source {
            Source::Seed(seed) => transmit(&x, cfg, &mut stream_rng(*seed, Stream::Channel)),
            Source::Replay { output, .. } => output.clone(),
        };
        let z_holder = match (cfg.topology, params.variant) {
            (Topology::Single, _) => None,
            (_, Variant::IndependentPair) => Some(Party::Cathy),
            _ => Some(Party::Eve),
        };
        Ok(Session {
            params,
            seed,
            seeds,
            alice_rng,
            bob_rng: rng_from_seed(seeds[1]),
            cathy_rng: rng_from_seed(seeds[2]),
            x,
            out,
            tx: Transcript::new(),
            z_holder,
        })
    }

    pub fn finish(self, inputs: &PartyInputs, end: Ending) -> SessionOutcome {
        let tx = Arc::new(self.tx);
        let alice = View {
            parties: vec![Party::Alice],
            strings: Some(inputs.strings.clone()),
            cathy_strings: inputs.cathy.as_ref().map(|(j, _)| j.clone()),
            seeds: vec![(Party::Alice, self.seeds[0])],
            x: Some(self.x),
            transcript: Some(tx.clone()),
            ..View::default()
        };
        let bob = View {
            parties: vec![Party::Bob],
            choice: Some(inputs.choice),
            seeds: vec![(Party::Bob, self.seeds[1])],
            y: Some(self.out.y),
            transcript: Some(tx.clone()),
            ..View::default()
        };
        let (mut eve, mut cathy) = (None, None);
        match self.z_holder {
            Some(Party::Eve) => {
                eve = Some(View {
                    parties: vec![Party::Eve],
                    z: self.out.z,
                    transcript: Some(tx.clone()),
                    ..View::default()
                })
            }
            Some(Party::Cathy) => {
                cathy = Some(View {
                    parties: vec![Party::Cathy],
                    cathy_choice: inputs.cathy.as_ref().map(|&(_, w)| w),
                    seeds: vec![(Party::Cathy, self.seeds[2])],
                    z: self.out.z,
                    transcript: Some(tx.clone()),
                    ..View::default()
                })
            }
            _ => {}
        }
        SessionOutcome {
            variant: self.params.variant,
            seed: self.seed,
            params: self.params.clone(),
            abort: end.abort,
            k_hat: end.k_hat,
            j_hat: end.j_hat,
            alice,
            bob,
            eve,
            cathy,
            transcript: tx,
            selections: end.selections,
            key_inputs: end.key_inputs,
            cathy_key_inputs: end.cathy_key_inputs,
        }
    }
}

/// Bits of `obs` at `positions`, or `None` if any of them is erased.
pub(crate) fn known_bits(obs: &TritString, positions: &[usize]) -> Option<BitVec> {
    let mut out = BitVec::zeros(positions.len());
    for (i, &p) in positions.iter().enumerate() {
        out.set(i, obs.get(p).bit()?);
    }
    Some(out)
}

/// Uniform channel input, the honest choice of `X`.
pub(crate) fn uniform_input(n: usize, rng: &mut SessionRng) -> BitVec {
    BitVec::random(n, rng)
}

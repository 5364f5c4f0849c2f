//! Malicious strategies used to exercise the protocols' checks, and view
//! merging for colluding parties.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::ChannelConfig;
use crate::codec::SubsetCodec;
use crate::error::{Error, Result};
use crate::gf2::BitVec;
use crate::protocol::{
    honest_le_half_tuples, run_honest, run_malicious_gt_half, run_malicious_le_half, AliceStrategy, BobContext,
    BobStrategy, HonestAlice, HonestBob, LeHalfTuples, Party, PartyInputs, ProtocolParams, SessionOutcome, Variant,
    View,
};
use crate::rng::{sample_subset, sorted_difference, SessionRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    Honest,
    BobSwap,
    BobPack,
    AliceProbe,
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackKind::Honest => "honest",
            AttackKind::BobSwap => "bob_swap",
            AttackKind::BobPack => "bob_pack",
            AttackKind::AliceProbe => "alice_probe",
        })
    }
}

/// An attack and its strength: the number of swapped slots for `bob_swap`,
/// `P[X_i = 1]` for `alice_probe`, unused otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttackSpec {
    pub kind: AttackKind,
    #[serde(default)]
    pub strength: f64,
}

impl Default for AttackSpec {
    fn default() -> Self {
        AttackSpec::honest()
    }
}

impl AttackSpec {
    pub fn honest() -> Self {
        AttackSpec {
            kind: AttackKind::Honest,
            strength: 0.0,
        }
    }

    pub fn bob_swap(s: usize) -> Self {
        AttackSpec {
            kind: AttackKind::BobSwap,
            strength: s as f64,
        }
    }

    pub fn bob_pack() -> Self {
        AttackSpec {
            kind: AttackKind::BobPack,
            strength: 0.0,
        }
    }

    pub fn alice_probe(bias: f64) -> Self {
        AttackSpec {
            kind: AttackKind::AliceProbe,
            strength: bias,
        }
    }

    pub fn is_honest(&self) -> bool {
        self.kind == AttackKind::Honest
    }

    /// Checks that the attack applies to `params` and its strength is legal.
    pub fn validate(&self, params: &ProtocolParams) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        match self.kind {
            AttackKind::Honest => Ok(()),
            AttackKind::BobSwap => {
                if params.variant != Variant::MalLeHalf {
                    return bad(format!("bob_swap targets mal_le_half, not {}", params.variant));
                }
                let limit = params.beta_n - params.gamma_n;
                if self.strength < 0.0 || self.strength.fract() != 0.0 || self.strength as usize > limit {
                    return bad(format!("bob_swap strength must be an integer in [0, {limit}]"));
                }
                Ok(())
            }
            AttackKind::BobPack if params.variant != Variant::MalGtHalf => {
                bad(format!("bob_pack targets mal_gt_half, not {}", params.variant))
            }
            AttackKind::BobPack => Ok(()),
            AttackKind::AliceProbe => {
                if !params.variant.is_malicious() {
                    return bad(format!("alice_probe needs a malicious-model variant, not {}", params.variant));
                }
                if !(0.0..=1.0).contains(&self.strength) {
                    return bad(format!("alice_probe bias {} is not a probability", self.strength));
                }
                Ok(())
            }
        }
    }

    /// The strategy pair this spec prescribes.
    pub fn strategies(&self, params: &ProtocolParams) -> Result<(Box<dyn AliceStrategy>, Box<dyn BobStrategy>)> {
        self.validate(params)?;
        Ok(match self.kind {
            AttackKind::Honest => (Box::new(HonestAlice), Box::new(HonestBob)),
            AttackKind::BobSwap => (Box::new(HonestAlice), Box::new(SwapBob::new(self.strength as usize))),
            AttackKind::BobPack => (Box::new(HonestAlice), Box::new(PackBob)),
            AttackKind::AliceProbe => (Box::new(AliceProbe::new(self.strength)), Box::new(HonestBob)),
        })
    }
}

/// Runs one session of `params.variant` under `attack`.
pub fn run_attack(
    params: &ProtocolParams,
    inputs: &PartyInputs,
    cfg: &ChannelConfig,
    seed: u64,
    attack: &AttackSpec,
) -> Result<SessionOutcome> {
    if attack.is_honest() {
        return run_honest(params, inputs, cfg, seed);
    }
    let (mut alice, mut bob) = attack.strategies(params)?;
    match params.variant {
        Variant::MalLeHalf => run_malicious_le_half(params, inputs, cfg, seed, alice.as_mut(), bob.as_mut()),
        Variant::MalGtHalf => run_malicious_gt_half(params, inputs, cfg, seed, alice.as_mut(), bob.as_mut()),
        v => Err(Error::InvalidParams(format!("no strategy hooks in {v}"))),
    }
}

/// Bob for `ε₁ ≤ ½` who moves `s` known positions into the unchosen tuple,
/// trading them for erased ones from its erased slots.
#[derive(Clone, Debug)]
pub struct SwapBob {
    s: usize,
}

impl SwapBob {
    pub fn new(s: usize) -> Self {
        SwapBob { s }
    }
}

impl BobStrategy for SwapBob {
    fn name(&self) -> String {
        format!("bob_swap({})", self.s)
    }

    fn tuples_le_half(&mut self, ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<LeHalfTuples> {
        let mut t = honest_le_half_tuples(ctx, codec, rng)?;
        if self.s == 0 {
            return Ok(t);
        }
        let j = codec.string_to_subset_onto(&t.s)?;
        let all: Vec<usize> = (0..t.bad.len()).collect();
        let erased_slots = sorted_difference(&all, &j);
        let from_bad = sample_subset(&erased_slots, self.s, rng)
            .ok_or_else(|| Error::InvalidParams(format!("cannot swap {} slots", self.s)))?;
        let from_good = sample_subset(&all, self.s, rng).expect("s ≤ βn");
        for (&g, &b) in from_good.iter().zip(&from_bad) {
            std::mem::swap(&mut t.good[g], &mut t.bad[b]);
        }
        Ok(t)
    }
}

/// Bob for `ε₁ > ½` who colludes with Eve and feeds interactive hashing the
/// rank of a subset made of positions known to the coalition.
#[derive(Clone, Copy, Debug, Default)]
pub struct PackBob;

impl BobStrategy for PackBob {
    fn name(&self) -> String {
        "bob_pack".into()
    }

    fn colludes_with_eve(&self) -> bool {
        true
    }

    fn choose_string_gt_half(&mut self, ctx: &BobContext, codec: &SubsetCodec, rng: &mut SessionRng) -> Result<BitVec> {
        let size = codec.subset_size();
        let (known, unknown): (Vec<usize>, Vec<usize>) =
            (0..ctx.params.n).partition(|&p| ctx.known(p).is_some());
        let mut pick = sample_subset(&known, size.min(known.len()), rng).expect("bounded by len");
        if pick.len() < size {
            let pad = sample_subset(&unknown, size - pick.len(), rng).expect("n ≥ βn");
            pick.extend(pad);
            pick.sort_unstable();
        }
        codec.subset_to_string(&pick)
    }
}

/// Alice who draws each bit of `X` with `P[1] = bias`.
#[derive(Clone, Copy, Debug)]
pub struct AliceProbe {
    bias: f64,
}

impl AliceProbe {
    pub fn new(bias: f64) -> Self {
        AliceProbe { bias }
    }
}

impl AliceStrategy for AliceProbe {
    fn name(&self) -> String {
        format!("alice_probe({})", self.bias)
    }

    fn channel_input(&mut self, n: usize, rng: &mut SessionRng) -> BitVec {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(self.bias)).collect();
        BitVec::from_bools(&bits)
    }
}

fn union_into<T: Clone>(slot: &mut Option<T>, other: &Option<T>) {
    if slot.is_none() {
        slot.clone_from(other);
    }
}

/// The joint view of `parties`: the union of their inputs, seeds,
/// observations and the transcript.
pub fn merge_views(outcome: &SessionOutcome, parties: &[Party]) -> Result<View> {
    let mut merged = View::default();
    for &party in parties {
        if merged.parties.contains(&party) {
            continue;
        }
        let v = outcome.view(party)?;
        merged.parties.push(party);
        union_into(&mut merged.strings, &v.strings);
        union_into(&mut merged.cathy_strings, &v.cathy_strings);
        union_into(&mut merged.choice, &v.choice);
        union_into(&mut merged.cathy_choice, &v.cathy_choice);
        union_into(&mut merged.x, &v.x);
        union_into(&mut merged.y, &v.y);
        union_into(&mut merged.z, &v.z);
        union_into(&mut merged.transcript, &v.transcript);
        merged.seeds.extend(v.seeds.iter().copied());
    }
    Ok(merged)
}

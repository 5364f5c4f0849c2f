//! Binary erasure channels and the broadcast topologies built from them.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf2::BitVec;

/// One channel output symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Trit {
    Zero = 0,
    One = 1,
    Erased = 2,
}

impl Trit {
    pub fn from_bit(b: bool) -> Self {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }

    pub fn bit(self) -> Option<bool> {
        match self {
            Trit::Zero => Some(false),
            Trit::One => Some(true),
            Trit::Erased => None,
        }
    }

    pub fn is_erased(self) -> bool {
        self == Trit::Erased
    }

    fn as_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Erased => 'e',
        }
    }
}

/// A sequence over `{0, 1, ⊥}`; serialized with `e` for `⊥`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TritString(Vec<Trit>);

impl TritString {
    pub fn new(symbols: Vec<Trit>) -> Self {
        TritString(symbols)
    }

    pub fn all_erased(len: usize) -> Self {
        TritString(vec![Trit::Erased; len])
    }

    pub fn from_bits(x: &BitVec) -> Self {
        TritString(x.iter().map(Trit::from_bit).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(Trit::Zero),
                '1' => Ok(Trit::One),
                'e' | '⊥' => Ok(Trit::Erased),
                other => Err(Error::OutOfRange(format!("trit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(TritString)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Trit {
        self.0[i]
    }

    pub fn symbols(&self) -> &[Trit] {
        &self.0
    }

    pub fn is_erased(&self, i: usize) -> bool {
        self.0[i].is_erased()
    }

    /// `#ₑ`: number of erased positions.
    pub fn count_erased(&self) -> usize {
        self.0.iter().filter(|t| t.is_erased()).count()
    }

    /// `#ₑ̄`: number of unerased positions.
    pub fn count_unerased(&self) -> usize {
        self.len() - self.count_erased()
    }

    /// `#ₑ` of the restriction to `positions`.
    pub fn count_erased_in(&self, positions: &[usize]) -> usize {
        positions.iter().filter(|&&p| self.0[p].is_erased()).count()
    }

    pub fn select(&self, positions: &[usize]) -> TritString {
        TritString(positions.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|t| write!(f, "{}", t.as_char()))
    }
}

impl fmt::Debug for TritString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TritString({self})")
    }
}

impl Serialize for TritString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for TritString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        TritString::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Bob and Eve see independently erased copies of X.
    Independent,
    /// Eve sees a further-erased copy of Bob's output.
    Degraded,
    /// Only Bob's channel.
    Single,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub eps1: f64,
    pub eps2: f64,
    pub topology: Topology,
}

impl ChannelConfig {
    pub fn new(eps1: f64, eps2: f64, topology: Topology) -> Result<Self> {
        for (name, e) in [("eps1", eps1), ("eps2", eps2)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::OutOfRange(format!("{name} = {e} is not in [0, 1]")));
            }
        }
        Ok(ChannelConfig {
            eps1,
            eps2,
            topology,
        })
    }

    pub fn independent(eps1: f64, eps2: f64) -> Result<Self> {
        Self::new(eps1, eps2, Topology::Independent)
    }

    pub fn degraded(eps1: f64, eps2: f64) -> Result<Self> {
        Self::new(eps1, eps2, Topology::Degraded)
    }

    pub fn single(eps1: f64) -> Result<Self> {
        Self::new(eps1, 1.0, Topology::Single)
    }
}

/// Channel outputs of one block.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelOutput {
    pub y: TritString,
    pub z: Option<TritString>,
}

fn erase<R: Rng + ?Sized>(t: Trit, eps: f64, rng: &mut R) -> Trit {
    if rng.random_bool(eps) {
        Trit::Erased
    } else {
        t
    }
}

/// Sends `x` through the configured broadcast channel.
///
/// Per position the draws are made in a fixed order (Bob's erasure, then
/// Eve's), so outputs are reproducible from the generator state.
pub fn transmit<R: Rng + ?Sized>(x: &BitVec, cfg: &ChannelConfig, rng: &mut R) -> ChannelOutput {
    let mut y = Vec::with_capacity(x.len());
    let mut z = Vec::with_capacity(x.len());
    for bit in x.iter() {
        let sym = Trit::from_bit(bit);
        let yi = erase(sym, cfg.eps1, rng);
        y.push(yi);
        match cfg.topology {
            Topology::Independent => z.push(erase(sym, cfg.eps2, rng)),
            Topology::Degraded => z.push(erase(yi, cfg.eps2, rng)),
            Topology::Single => {}
        }
    }
    ChannelOutput {
        y: TritString(y),
        z: (cfg.topology != Topology::Single).then_some(TritString(z)),
    }
}

/// `(E, Ē)`: erased and unerased positions, both sorted.
pub fn erasure_sets(y: &TritString) -> (Vec<usize>, Vec<usize>) {
    let mut e = Vec::new();
    let mut ebar = Vec::new();
    for (i, t) in y.symbols().iter().enumerate() {
        if t.is_erased() {
            e.push(i);
        } else {
            ebar.push(i);
        }
    }
    (e, ebar)
}

/// The merged view Ψ: `Y_i` if unerased, else `Z_i` if unerased, else `⊥`.
pub fn merge_psi(y: &TritString, z: &TritString) -> Result<TritString> {
    if y.len() != z.len() {
        return Err(Error::Dimension(format!(
            "merging views of lengths {} and {}",
            y.len(),
            z.len()
        )));
    }
    y.symbols()
        .iter()
        .zip(z.symbols())
        .enumerate()
        .map(|(i, (&a, &b))| match (a, b) {
            (Trit::Erased, b) => Ok(b),
            (a, Trit::Erased) => Ok(a),
            (a, b) if a == b => Ok(a),
            _ => Err(Error::Conflict(i)),
        })
        .collect::<Result<Vec<_>>>()
        .map(TritString)
}

//! The public transcript Λ.
//!
//! Messages are kept structured in memory and serialized on demand as one
//! ASCII record per line:
//!
//! ```text
//! LABEL|SENDER|KIND|LEN|PAYLOAD
//! ```
//!
//! `LEN` is the byte length of `PAYLOAD`. Payload encodings by `KIND`:
//!
//! | kind   | payload                                   |
//! |--------|-------------------------------------------|
//! | `IDX`  | comma-separated decimal positions         |
//! | `BITS` | `0`/`1` characters                        |
//! | `BIT`  | a single `0` or `1`                       |
//! | `HASH` | `RxC:` then the rows as bit strings joined by `/` |
//! | `TEXT` | free ASCII text without newlines          |

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};

use super::Party;

#[derive(Clone, Debug, PartialEq)]
pub enum Payload {
    Indices(Vec<usize>),
    Bits(BitVec),
    Bit(bool),
    Hash(BitMatrix),
    Text(String),
}

impl Payload {
    fn kind(&self) -> &'static str {
        match self {
            Payload::Indices(_) => "IDX",
            Payload::Bits(_) => "BITS",
            Payload::Bit(_) => "BIT",
            Payload::Hash(_) => "HASH",
            Payload::Text(_) => "TEXT",
        }
    }

    fn encode(&self) -> String {
        match self {
            Payload::Indices(v) => {
                let mut s = String::with_capacity(v.len() * 4);
                for (i, p) in v.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    write!(s, "{p}").expect("writing to a String");
                }
                s
            }
            Payload::Bits(b) => b.to_string(),
            Payload::Bit(b) => if *b { "1" } else { "0" }.to_string(),
            Payload::Hash(m) => m.to_string(),
            Payload::Text(t) => t.clone(),
        }
    }

    fn decode(kind: &str, body: &str) -> Result<Self> {
        let bad = |what: &str| Error::OutOfRange(format!("malformed {what} payload {body:?}"));
        Ok(match kind {
            "IDX" if body.is_empty() => Payload::Indices(Vec::new()),
            "IDX" => Payload::Indices(
                body.split(',')
                    .map(|t| t.parse().map_err(|_| bad("IDX")))
                    .collect::<Result<_>>()?,
            ),
            "BITS" => Payload::Bits(BitVec::parse(body)?),
            "BIT" => match body {
                "0" => Payload::Bit(false),
                "1" => Payload::Bit(true),
                _ => return Err(bad("BIT")),
            },
            "HASH" => {
                let (shape, rows) = body.split_once(':').ok_or_else(|| bad("HASH"))?;
                let (r, c) = shape.split_once('x').ok_or_else(|| bad("HASH"))?;
                let r: usize = r.parse().map_err(|_| bad("HASH"))?;
                let c: usize = c.parse().map_err(|_| bad("HASH"))?;
                let rows: Vec<BitVec> = if r == 0 {
                    Vec::new()
                } else {
                    rows.split('/').map(BitVec::parse).collect::<Result<_>>()?
                };
                if rows.len() != r {
                    return Err(bad("HASH"));
                }
                Payload::Hash(BitMatrix::from_rows(rows, c)?)
            }
            "TEXT" => Payload::Text(body.to_string()),
            other => return Err(Error::OutOfRange(format!("unknown record kind {other:?}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message {
    pub label: String,
    pub sender: Party,
    pub payload: Payload,
}

/// Append-only list of public messages.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    messages: Vec<Message>,
}

impl Transcript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, sender: Party, payload: Payload) {
        let label = label.into();
        debug_assert!(!label.contains('|') && !label.contains('\n'));
        self.messages.push(Message {
            label,
            sender,
            payload,
        });
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    /// The last message carrying `label`.
    pub fn get(&self, label: &str) -> Option<&Message> {
        self.messages.iter().rev().find(|m| m.label == label)
    }

    pub fn indices(&self, label: &str) -> Option<&[usize]> {
        match &self.get(label)?.payload {
            Payload::Indices(v) => Some(v),
            _ => None,
        }
    }

    pub fn bits(&self, label: &str) -> Option<&BitVec> {
        match &self.get(label)?.payload {
            Payload::Bits(b) => Some(b),
            _ => None,
        }
    }

    pub fn bit(&self, label: &str) -> Option<bool> {
        match self.get(label)?.payload {
            Payload::Bit(b) => Some(b),
            _ => None,
        }
    }

    pub fn hash(&self, label: &str) -> Option<&BitMatrix> {
        match &self.get(label)?.payload {
            Payload::Hash(m) => Some(m),
            _ => None,
        }
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for m in &self.messages {
            let body = m.payload.encode();
            writeln!(out, "{}|{}|{}|{}|{}", m.label, m.sender, m.payload.kind(), body.len(), body)
                .expect("writing to a String");
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut tx = Transcript::new();
        for (lineno, line) in text.lines().enumerate() {
            let bad = || Error::OutOfRange(format!("transcript line {}: {line:?}", lineno + 1));
            let mut parts = line.splitn(5, '|');
            let label = parts.next().ok_or_else(bad)?;
            let sender: Party = parts.next().ok_or_else(bad)?.parse()?;
            let kind = parts.next().ok_or_else(bad)?;
            let len: usize = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let body = parts.next().ok_or_else(bad)?;
            if body.len() != len {
                return Err(bad());
            }
            tx.push(label, sender, Payload::decode(kind, body)?);
        }
        Ok(tx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_kinds() {
        let mut tx = Transcript::new();
        tx.push("L0", Party::Bob, Payload::Indices(vec![3, 1, 20]));
        tx.push("L1", Party::Bob, Payload::Indices(vec![]));
        tx.push("F0", Party::Alice, Payload::Hash(BitMatrix::parse(&["101", "011"]).unwrap()));
        tx.push("C0", Party::Alice, Payload::Bits(BitVec::parse("10").unwrap()));
        tx.push("THETA", Party::Bob, Payload::Bit(true));
        tx.push("NOTE", Party::Cathy, Payload::Text("a|b c".into()));
        let text = tx.serialize();
        assert!(text.starts_with("L0|bob|IDX|6|3,1,20\nL1|bob|IDX|0|\nF0|alice|HASH|11|2x3:101/011\n"));
        assert_eq!(Transcript::parse(&text).unwrap(), tx);
        assert_eq!(tx.indices("L0"), Some(&[3usize, 1, 20][..]));
        assert_eq!(tx.bit("THETA"), Some(true));
        assert!(tx.bits("L0").is_none());
    }

    #[test]
    fn rejects_length_mismatch() {
        assert!(Transcript::parse("L0|bob|IDX|3|1,2,3\n").is_err());
        assert!(Transcript::parse("L0|mallory|BIT|1|1\n").is_err());
    }
}

//! Oblivious transfer over wiretapped binary erasure broadcast channels.

pub mod adversary;
pub mod analysis;
pub mod channel;
pub mod codec;
pub mod error;
pub mod experiment;
pub mod gf2;
pub mod hash;
pub mod ih;
pub mod protocol;
pub mod rng;

pub use error::{Error, Result};

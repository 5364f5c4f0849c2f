//! A transcript round-trips through its text form, and rerunning the session
//! from the parties' views reproduces it message for message.

use std::sync::Arc;

use wiretap_ot::protocol::{replay, run_honest, ParamRequest, Payload, PartyInputs, Transcript, Variant};
use wiretap_ot::rng::rng_from_seed;

fn main() -> wiretap_ot::Result<()> {
    let p = ParamRequest::new(Variant::C2p, 0.05, 0.5, 0.5, 200).derive()?;
    let inputs = PartyInputs::random(&p, &mut rng_from_seed(4));
    let mut out = run_honest(&p, &inputs, &p.channel_config()?, 4)?;

    let text = out.transcript.serialize();
    for line in text.lines() {
        println!("{}", truncate(line, 90));
    }
    assert_eq!(Transcript::parse(&text)?, *out.transcript);
    replay(&out)?;
    println!("replay reproduces all {} messages", out.transcript.len());

    let mut forged = (*out.transcript).clone();
    forged.push("EXTRA", wiretap_ot::protocol::Party::Bob, Payload::Bit(true));
    out.transcript = Arc::new(forged);
    println!("after tampering: {}", replay(&out).unwrap_err());
    Ok(())
}

fn truncate(s: &str, len: usize) -> String {
    if s.chars().count() <= len {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(len).collect::<String>())
    }
}

//! Frozen transcripts of small sessions. Set `UPDATE_GOLDEN=1` to rewrite
//! the files after an intentional change to the wire format or the engine.

use std::path::PathBuf;

use wiretap_ot::protocol::{replay, run_honest, ParamRequest, PartyInputs, ProtocolParams, Transcript, Variant};
use wiretap_ot::rng::{stream_rng, Stream};

fn check(name: &str, p: &ProtocolParams, seed: u64) {
    let inputs = PartyInputs::random(p, &mut stream_rng(seed, Stream::Inputs));
    let out = run_honest(p, &inputs, &p.channel_config().unwrap(), seed).unwrap();
    replay(&out).unwrap();
    let text = out.transcript.serialize();
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    let frozen = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, frozen, "{name} changed");
    assert_eq!(Transcript::parse(&frozen).unwrap(), *out.transcript);
}

#[test]
fn c2p_n24() {
    let p = ParamRequest::new(Variant::C2p, 0.15, 0.5, 0.5, 24)
        .delta(0.05)
        .delta_tilde(0.05)
        .derive()
        .unwrap();
    assert_eq!((p.n, p.m, p.beta_n), (24, 2, 8));
    check("c2p_n24_seed7.txt", &p, 7);
}

#[test]
fn c1p_n24() {
    let p = ParamRequest::new(Variant::C1p, 0.15, 0.4, 0.6, 24)
        .delta(0.05)
        .delta_tilde(0.05)
        .derive()
        .unwrap();
    assert_eq!(p.m, 2);
    check("c1p_n24_seed7.txt", &p, 7);
}

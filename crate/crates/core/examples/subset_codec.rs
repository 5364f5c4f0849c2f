//! Ranking fixed-size subsets to bit strings and back.

use wiretap_ot::codec::SubsetCodec;

fn main() -> wiretap_ot::Result<()> {
    let codec = SubsetCodec::new(10, 4)?;
    println!(
        "C(10, 4) = {} subsets in {} bits (density {:.3})",
        codec.count(),
        codec.m_bits(),
        codec.density()
    );
    for subset in [vec![0, 1, 2, 3], vec![1, 4, 6, 9], vec![6, 7, 8, 9]] {
        let s = codec.subset_to_string(&subset)?;
        let back = codec.string_to_subset(&s)?;
        println!("{subset:?} -> rank {} -> {s} -> {back:?}", codec.rank(&subset)?);
    }

    // Strings past the last rank are folded back onto subsets.
    let big = codec.subset_to_string(&[6, 7, 8, 9])?;
    let mut over = big.clone();
    for i in 0..over.len() {
        over.set(i, true);
    }
    println!(
        "{over} in range: {}; folded onto {:?}",
        codec.contains(&over),
        codec.string_to_subset_onto(&over)?
    );
    Ok(())
}

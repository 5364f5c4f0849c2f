//! Inner and outer bounds on the rates Bob and Cathy can get simultaneously
//! from one broadcast by Alice.

use wiretap_ot::analysis::rate_region;

fn main() {
    for (e1, e2) in [(0.4, 0.4), (0.4, 0.7), (0.7, 0.5)] {
        let r = rate_region(e1, e2);
        println!("eps1 = {e1}, eps2 = {e2}");
        println!("  inner vertices {:?}", rounded(&r.inner_vertices));
        println!("  outer vertices {:?}", rounded(&r.outer_vertices));
        for (rb, rc) in [(0.05, 0.05), (0.1, 0.15), (0.2, 0.1)] {
            println!(
                "  ({rb}, {rc}): inner {}, outer {}",
                r.inner.contains(rb, rc),
                r.outer.contains(rb, rc)
            );
        }
    }
}

fn rounded(v: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let r = |x: f64| (x * 1e4).round() / 1e4;
    v.iter().map(|&(x, y)| (r(x), r(y))).collect()
}

//! Closed-form OT capacities of the erasure broadcast channel.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::protocol::Variant;

/// 2-private 1-of-2 capacity `ε₂ · min{ε₁, 1 − ε₁}`.
pub fn c2p(eps1: f64, eps2: f64) -> f64 {
    eps2 * eps1.min(1.0 - eps1)
}

/// 1-private 1-of-2 capacity.
pub fn c1p(eps1: f64, eps2: f64) -> f64 {
    if eps1 < eps2 / 2.0 {
        eps1
    } else if eps1 < 0.5 {
        eps2 / 2.0
    } else {
        eps2 * (1.0 - eps1)
    }
}

/// 2-private 1-of-N capacity `ε₂ · min{ε₁/(N−1), 1 − ε₁}`.
pub fn c2p_n(eps1: f64, eps2: f64, branches: usize) -> f64 {
    let k = branches as f64;
    eps2 * (eps1 / (k - 1.0)).min(1.0 - eps1)
}

/// 1-private 1-of-N capacity `min{ε₁/(N−1), ε₂/N, ε₂(1 − ε₁)}`.
pub fn c1p_n(eps1: f64, eps2: f64, branches: usize) -> f64 {
    let k = branches as f64;
    (eps1 / (k - 1.0)).min(eps2 / k).min(eps2 * (1.0 - eps1))
}

/// Lower bound on the 1-private capacity of the degraded channel.
pub fn degraded_lower(eps1: f64, eps2: f64) -> f64 {
    (eps2 * (1.0 - eps1) / 3.0).min(eps1)
}

/// Upper bound on the 1-private capacity of the degraded channel.
pub fn degraded_upper(eps1: f64, eps2: f64) -> f64 {
    (eps2 * (1.0 - eps1)).min(eps1)
}

/// Which branch of the three-piece `C₁P` formula applies.
pub fn c1p_regime(eps1: f64, eps2: f64) -> &'static str {
    if eps1 < eps2 / 2.0 {
        "eps1"
    } else if eps1 < 0.5 {
        "eps2/2"
    } else {
        "eps2(1-eps1)"
    }
}

/// The rate ceiling a variant is measured against: its capacity or, for the
/// degraded channel, the achievable lower bound. For the independent pair it
/// is Bob's share.
pub fn variant_capacity(variant: Variant, eps1: f64, eps2: f64, branches: usize) -> f64 {
    match variant {
        Variant::C2p | Variant::OneOfN2p | Variant::IndependentPair => c2p_n(eps1, eps2, branches),
        Variant::C1p | Variant::OneOfN1p => c1p_n(eps1, eps2, branches),
        Variant::MalLeHalf | Variant::MalGtHalf => c2p(eps1, eps2),
        Variant::TwoParty => eps1.min(1.0 - eps1),
        Variant::Degraded => degraded_lower(eps1, eps2),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CapacityReport {
    pub eps1: f64,
    pub eps2: f64,
    pub branches: usize,
    pub c2p: f64,
    pub c1p: f64,
    pub c2p_n: f64,
    pub c1p_n: f64,
    pub degraded_lower: f64,
    pub degraded_upper: f64,
    pub c1p_regime: &'static str,
    /// True when the degraded bounds coincide.
    pub degraded_tight: bool,
}

pub fn capacities(eps1: f64, eps2: f64, branches: usize) -> Result<CapacityReport> {
    for (name, e) in [("eps1", eps1), ("eps2", eps2)] {
        if !(0.0..=1.0).contains(&e) {
            return Err(Error::OutOfRange(format!("{name} = {e} is not in [0, 1]")));
        }
    }
    if branches < 2 {
        return Err(Error::OutOfRange(format!("N = {branches} must be at least 2")));
    }
    let lower = degraded_lower(eps1, eps2);
    let upper = degraded_upper(eps1, eps2);
    Ok(CapacityReport {
        eps1,
        eps2,
        branches,
        c2p: c2p(eps1, eps2),
        c1p: c1p(eps1, eps2),
        c2p_n: c2p_n(eps1, eps2, branches),
        c1p_n: c1p_n(eps1, eps2, branches),
        degraded_lower: lower,
        degraded_upper: upper,
        c1p_regime: c1p_regime(eps1, eps2),
        degraded_tight: (upper - lower).abs() <= 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn worked_values() {
        assert!((c2p(0.5, 0.5) - 0.25).abs() < TOL);
        assert!((c1p(0.2, 0.6) - 0.2).abs() < TOL);
        assert!((c1p(0.4, 0.6) - 0.3).abs() < TOL);
        assert!((c1p(0.7, 0.6) - 0.18).abs() < TOL);
        let r = capacities(0.1, 0.6, 2).unwrap();
        assert!((r.degraded_lower - 0.1).abs() < TOL);
        assert!((r.degraded_upper - 0.1).abs() < TOL);
        assert!(r.degraded_tight);
        assert_eq!(capacities(0.4, 0.6, 2).unwrap().c1p_regime, "eps2/2");
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(capacities(1.5, 0.5, 2).is_err());
        assert!(capacities(0.5, -0.5, 2).is_err());
        assert!(capacities(0.5, 0.5, 1).is_err());
    }

    #[test]
    fn c1p_is_continuous_at_breakpoints() {
        for i in 1..100 {
            let e2 = i as f64 / 100.0;
            let h = 1e-13;
            let a = e2 / 2.0;
            assert!((c1p(a - h, e2) - c1p(a, e2)).abs() < 1e-12);
            assert!((c1p(0.5 - h, e2) - c1p(0.5, e2)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn c1p_dominates_c2p(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0) {
            prop_assert!(c1p(e1, e2) >= c2p(e1, e2) - TOL);
            if e1 >= 0.5 {
                prop_assert!((c1p(e1, e2) - c2p(e1, e2)).abs() < TOL);
            } else if e1 > 0.0 && e2 > 0.0 && e2 < 1.0 {
                prop_assert!(c1p(e1, e2) > c2p(e1, e2));
            }
        }

        #[test]
        fn n_ary_reduces_and_decreases(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0, k in 2usize..10) {
            prop_assert!((c2p_n(e1, e2, 2) - c2p(e1, e2)).abs() < TOL);
            prop_assert!((c1p_n(e1, e2, 2) - c1p(e1, e2)).abs() < TOL);
            prop_assert!(c2p_n(e1, e2, k + 1) <= c2p_n(e1, e2, k) + TOL);
            prop_assert!(c1p_n(e1, e2, k + 1) <= c1p_n(e1, e2, k) + TOL);
        }

        #[test]
        fn degraded_bounds_ordered(e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0) {
            prop_assert!(degraded_lower(e1, e2) <= degraded_upper(e1, e2) + TOL);
            if e1 <= e2 * (1.0 - e1) / 3.0 {
                prop_assert!((degraded_lower(e1, e2) - degraded_upper(e1, e2)).abs() < TOL);
            }
        }
    }
}

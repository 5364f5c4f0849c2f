//! Inner and outer bounds on the 2-private rate region of the independent
//! pair (Bob and Cathy both receive OT from Alice).

use serde::Serialize;

/// A region `{x, y ≥ 0 : x ≤ a, y ≤ b, x + y ≤ s}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Pentagon {
    pub max_b: f64,
    pub max_c: f64,
    pub max_sum: f64,
}

const TOL: f64 = 1e-12;

impl Pentagon {
    pub fn contains(&self, rb: f64, rc: f64) -> bool {
        rb >= -TOL && rc >= -TOL && rb <= self.max_b + TOL && rc <= self.max_c + TOL && rb + rc <= self.max_sum + TOL
    }

    /// Counterclockwise vertices starting at the origin, with repeated
    /// points removed.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let (a, b, s) = (self.max_b.max(0.0), self.max_c.max(0.0), self.max_sum.max(0.0));
        let a = a.min(s);
        let b = b.min(s);
        let mut v = vec![(0.0, 0.0), (a, 0.0)];
        if a + b > s {
            v.push((a, s - a));
            v.push((s - b, b));
        } else {
            v.push((a, b));
        }
        v.push((0.0, b));
        let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
        for p in v {
            let dup = out
                .last()
                .is_some_and(|q: &(f64, f64)| (q.0 - p.0).abs() <= TOL && (q.1 - p.1).abs() <= TOL);
            if !dup {
                out.push(p);
            }
        }
        if out.len() > 1 {
            let (f, l) = (out[0], out[out.len() - 1]);
            if (f.0 - l.0).abs() <= TOL && (f.1 - l.1).abs() <= TOL {
                out.pop();
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RateRegion {
    pub eps1: f64,
    pub eps2: f64,
    pub inner: Pentagon,
    pub outer: Pentagon,
    pub inner_vertices: Vec<(f64, f64)>,
    pub outer_vertices: Vec<(f64, f64)>,
}

pub fn rate_region(eps1: f64, eps2: f64) -> RateRegion {
    let m1 = eps1.min(1.0 - eps1);
    let m2 = eps2.min(1.0 - eps2);
    let a = eps2 * m1;
    let b = eps1 * m2;
    let inner = Pentagon {
        max_b: a,
        max_c: b,
        max_sum: a + b - m1 * m2,
    };
    let outer = Pentagon {
        max_b: a,
        max_c: b,
        max_sum: eps1 * eps2,
    };
    RateRegion {
        eps1,
        eps2,
        inner,
        outer,
        inner_vertices: inner.vertices(),
        outer_vertices: outer.vertices(),
    }
}

impl RateRegion {
    /// Every inner vertex satisfies the outer inequalities.
    pub fn inner_within_outer(&self) -> bool {
        self.inner_vertices.iter().all(|&(x, y)| self.outer.contains(x, y))
    }
}

//! Turns a neighbor-threshold family into a linear edge-threshold family along
//! a min-max-indegree orientation.

use super::family::{LinearEdgeThresholds, LinearTerm, ThresholdFamily};
use crate::error::{Error, Result};
use crate::instance::{orient_min_max_indegree, Graph};

const SAMPLES: usize = 16;
const REL_TOL: f64 = 1e-12;

/// For each arc `u -> v` finds the smallest neighbor cost `X` at which `u`'s
/// threshold reaches 1 (all other costs 0), then sets `t_v = X c_u` and
/// `t_u = c_v / X` on that edge.
pub fn neighbor_to_edge_convert(
    tf: &dyn ThresholdFamily,
    g: &Graph,
    probe_limit: f64,
) -> Result<LinearEdgeThresholds> {
    let n = g.n();
    let orientation = orient_min_max_indegree(g);
    let mut terms: Vec<Vec<LinearTerm>> = vec![Vec::new(); n];
    for &(u, v) in orientation.arcs() {
        let x = crossing_point(tf, n, u, v, probe_limit)?;
        terms[v].push(LinearTerm::new(u, x, 1.0));
        terms[u].push(LinearTerm::new(v, 1.0, x));
    }
    for list in &mut terms {
        list.sort_by_key(|t| t.neighbor);
    }
    Ok(LinearEdgeThresholds::new(terms))
}

fn crossing_point(
    tf: &dyn ThresholdFamily,
    n: usize,
    u: usize,
    v: usize,
    limit: f64,
) -> Result<f64> {
    let mut costs = vec![0.0; n];
    let mut t_at = |beta: f64| {
        costs[v] = beta;
        tf.threshold(u, &costs)
    };
    // Monotonicity spot check on a geometric grid.
    let mut prev = (0.0, t_at(0.0));
    for k in 0..=SAMPLES {
        let beta = limit * 2f64.powi(k as i32 - SAMPLES as i32);
        let t = t_at(beta);
        if t < prev.1 {
            return Err(Error::NonMonotoneThreshold {
                node: u,
                neighbor: v,
                low_cost: prev.0,
                low_threshold: prev.1,
                high_cost: beta,
                high_threshold: t,
            });
        }
        prev = (beta, t);
    }
    if t_at(0.0) >= 1.0 {
        return Err(Error::Claim2Violation {
            node: u,
            neighbor: v,
        });
    }
    if t_at(limit) < 1.0 {
        return Err(Error::Claim1Violation {
            node: u,
            neighbor: v,
            limit,
        });
    }
    let (mut lo, mut hi) = (0.0, limit);
    while hi - lo > REL_TOL * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if t_at(mid) >= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

//! x-scaled edge and neighbor mechanisms and the graph functionals bounding them.

use super::family::{scaled_terms, LinearEdgeThresholds, LinearNeighborThresholds, ScalingVector};
use crate::error::{Error, Result};
use crate::instance::{Graph, VcInstance};

pub const MAX_NEIGHBORHOOD: usize = 24;

/// Edge thresholds `t_u = max_v x_u c_v / x_v`.
pub fn ax_mechanism(g: &Graph, x: &ScalingVector) -> LinearEdgeThresholds {
    assert_eq!(x.len(), g.n(), "one scaling entry per node");
    LinearEdgeThresholds::new(scaled_terms(g, x))
}

/// Neighbor thresholds `t_u = sum_v x_u c_v / x_v`.
pub fn bx_mechanism(g: &Graph, x: &ScalingVector) -> LinearNeighborThresholds {
    assert_eq!(x.len(), g.n(), "one scaling entry per node");
    LinearNeighborThresholds::new(scaled_terms(g, x))
}

/// A node `u` and an independent `S ⊆ N(u)` maximizing `x(S) / x_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaWitness {
    pub value: f64,
    pub node: usize,
    pub set: Vec<usize>,
}

/// Exact `max_u max_{S ⊆ N(u) independent} x(S) / x_u`; 0 on edgeless graphs.
pub fn alpha_gx(g: &Graph, x: &ScalingVector) -> Result<AlphaWitness> {
    let d = g.max_degree();
    if d > MAX_NEIGHBORHOOD {
        return Err(Error::SizeLimit {
            what: "neighborhood size for alpha",
            limit: MAX_NEIGHBORHOOD,
            actual: d,
        });
    }
    let xs = x.as_slice();
    let mut best = AlphaWitness {
        value: 0.0,
        node: 0,
        set: Vec::new(),
    };
    for u in 0..g.n() {
        let nb = g.neighbors(u);
        if nb.is_empty() {
            continue;
        }
        let local = g.induced(nb);
        let weights: Vec<f64> = nb.iter().map(|&v| xs[v]).collect();
        let (w, set) = max_weight_independent_set(&local, &weights);
        let ratio = w / xs[u];
        if ratio > best.value {
            best = AlphaWitness {
                value: ratio,
                node: u,
                set: set.into_iter().map(|k| nb[k]).collect(),
            };
        }
    }
    Ok(best)
}

/// `max_u x(N(u)) / x_u`; 0 on edgeless graphs.
pub fn beta_gx(g: &Graph, x: &ScalingVector) -> f64 {
    let xs = x.as_slice();
    (0..g.n())
        .map(|u| x.sum_over(g.neighbors(u)) / xs[u])
        .fold(0.0, f64::max)
}

/// Maximum-weight independent set of a graph with at most 64 nodes, by
/// branching on a maximum-degree node. Returns the weight and sorted node list.
pub fn max_weight_independent_set(g: &Graph, w: &[f64]) -> (f64, Vec<usize>) {
    let n = g.n();
    assert!(n <= 64, "independent-set search is limited to 64 nodes");
    let adj: Vec<u64> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (weight, mask) = mwis(all, &adj, w);
    (weight, (0..n).filter(|&u| mask & (1 << u) != 0).collect())
}

fn mwis(cand: u64, adj: &[u64], w: &[f64]) -> (f64, u64) {
    if cand == 0 {
        return (0.0, 0);
    }
    let mut pick = None;
    let mut best_deg = 0;
    let mut m = cand;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        let deg = (adj[v] & cand).count_ones();
        if deg > best_deg {
            best_deg = deg;
            pick = Some(v);
        }
    }
    let Some(v) = pick else {
        // No edges left: take every positive-weight candidate.
        let mut total = 0.0;
        let mut mask = 0;
        let mut m = cand;
        while m != 0 {
            let u = m.trailing_zeros() as usize;
            m &= m - 1;
            if w[u] > 0.0 {
                total += w[u];
                mask |= 1 << u;
            }
        }
        return (total, mask);
    };
    let (wi, mi) = mwis(cand & !adj[v] & !(1 << v), adj, w);
    let with = (wi + w[v], mi | 1 << v);
    let without = mwis(cand & !(1 << v), adj, w);
    if with.0 >= without.0 {
        with
    } else {
        without
    }
}

/// Costs `x_u` on the alpha witness node, `x_v` on its witness set, 0 elsewhere;
/// one agent per node.
pub fn tightness_instance(g: &Graph, x: &ScalingVector) -> Result<VcInstance> {
    let wit = alpha_gx(g, x)?;
    let xs = x.as_slice();
    let mut costs = vec![0.0; g.n()];
    if g.m() > 0 {
        costs[wit.node] = xs[wit.node];
        for &v in &wit.set {
            costs[v] = xs[v];
        }
    }
    VcInstance::singleton(g.clone(), &costs)
}

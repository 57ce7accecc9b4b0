//! Vertex-cover ground truth: the half-integral LP, exact minimum covers and
//! minimal-cover enumeration.

use super::flow::FlowNetwork;
use crate::error::{Error, Result};
use crate::instance::Graph;

pub const MAX_EXACT_NODES: usize = 24;
pub const MAX_ENUMERATED_COVERS: usize = 1_000_000;

/// An optimal extreme point of the vertex-cover LP with entries in `{0, 1/2, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct VcLpSolution {
    pub x: Vec<f64>,
    pub value: f64,
}

impl VcLpSolution {
    /// Nodes with a positive LP value.
    pub fn support(&self) -> Vec<bool> {
        self.x.iter().map(|&v| v > 0.0).collect()
    }
}

/// Solves the LP through a minimum cut on the bipartite double cover.
///
/// Of all optimal half-integral points this returns the one whose 1-set is
/// smallest and whose support is largest; every other optimum is sandwiched
/// between the two. Isolated nodes get 0.
pub fn vc_lp_solve(g: &Graph, costs: &[f64]) -> VcLpSolution {
    let n = g.n();
    assert_eq!(costs.len(), n, "one cost per node");
    let total: f64 = costs.iter().sum();
    let big = 2.0 * (1.0 + total);
    let (s, t) = (0, 1);
    let left = |u: usize| 2 + u;
    let right = |u: usize| 2 + n + u;
    let mut net = FlowNetwork::new(2 + 2 * n, 1e-12 * (1.0 + total));
    for u in 0..n {
        if g.degree(u) > 0 {
            net.add_edge(s, left(u), costs[u]);
            net.add_edge(right(u), t, costs[u]);
        }
    }
    for &(u, v) in g.edges() {
        net.add_edge(left(u), right(v), big);
        net.add_edge(left(v), right(u), big);
    }
    net.max_flow(s, t);
    let reach = net.source_side(s);
    let x: Vec<f64> = (0..n)
        .map(|u| {
            if g.degree(u) == 0 {
                return 0.0;
            }
            let in_left = !reach[left(u)];
            let in_right = reach[right(u)];
            0.5 * (in_left as u8 + in_right as u8) as f64
        })
        .collect();
    let value = x.iter().zip(costs).map(|(a, c)| a * c).sum();
    VcLpSolution { x, value }
}

/// Minimum-cost vertex cover; ties go to the lexicographically smallest sorted node list.
pub fn min_vertex_cover_exact(g: &Graph, costs: &[f64]) -> Result<(Vec<usize>, f64)> {
    let n = g.n();
    if n > MAX_EXACT_NODES {
        return Err(Error::SizeLimit {
            what: "exact vertex cover",
            limit: MAX_EXACT_NODES,
            actual: n,
        });
    }
    assert_eq!(costs.len(), n, "one cost per node");
    let scale = 1.0 + costs.iter().sum::<f64>();
    let mut search = CoverSearch {
        g,
        costs,
        tol: 1e-12 * scale,
        lp_bound: vc_lp_solve(g, costs).value,
        state: vec![Decision::Open; n],
        best: None,
        best_cost: f64::INFINITY,
        done: false,
    };
    search.dfs(0, 0.0);
    let best = search.best.expect("the full node set is always a cover");
    // A proper prefix that still covers is lexicographically smaller at no extra cost.
    let mut mask = vec![false; n];
    let mut prefix_len = best.len();
    if g.is_vertex_cover(&mask) {
        prefix_len = 0;
    } else {
        for (k, &u) in best.iter().enumerate() {
            mask[u] = true;
            if g.is_vertex_cover(&mask) {
                prefix_len = k + 1;
                break;
            }
        }
    }
    let cover: Vec<usize> = best[..prefix_len].to_vec();
    let cost = cover.iter().map(|&u| costs[u]).sum();
    Ok((cover, cost))
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Decision {
    Open,
    In,
    Out,
}

struct CoverSearch<'a> {
    g: &'a Graph,
    costs: &'a [f64],
    tol: f64,
    lp_bound: f64,
    state: Vec<Decision>,
    best: Option<Vec<usize>>,
    best_cost: f64,
    done: bool,
}

impl CoverSearch<'_> {
    /// Nodes are decided in index order, inclusion first.
    fn dfs(&mut self, u: usize, cost: f64) {
        if self.done {
            return;
        }
        if cost + self.remaining_bound(u) >= self.best_cost - self.tol {
            return;
        }
        if u == self.g.n() {
            self.best = Some((0..u).filter(|&v| self.state[v] == Decision::In).collect());
            self.best_cost = cost;
            if cost <= self.lp_bound + self.tol {
                self.done = true;
            }
            return;
        }
        let forced = self
            .g
            .neighbors(u)
            .iter()
            .any(|&v| self.state[v] == Decision::Out);
        self.state[u] = Decision::In;
        self.dfs(u + 1, cost + self.costs[u]);
        if !forced {
            self.state[u] = Decision::Out;
            self.dfs(u + 1, cost);
        }
        self.state[u] = Decision::Open;
    }

    /// Lower bound on the cost still to pay for nodes `from..n`: nodes forced by
    /// an excluded neighbor plus a greedy edge packing over the rest.
    fn remaining_bound(&self, from: usize) -> f64 {
        let n = self.g.n();
        let mut residual: Vec<f64> = self.costs.to_vec();
        let mut forced = vec![false; n];
        let mut bound = 0.0;
        for u in from..n {
            if self
                .g
                .neighbors(u)
                .iter()
                .any(|&v| v < from && self.state[v] == Decision::Out)
            {
                forced[u] = true;
                bound += self.costs[u];
            }
        }
        for &(a, b) in self.g.edges() {
            if a >= from && b >= from && !forced[a] && !forced[b] {
                let y = residual[a].min(residual[b]);
                residual[a] -= y;
                residual[b] -= y;
                bound += y;
            }
        }
        bound
    }
}

/// All inclusion-minimal vertex covers, as complements of maximal independent
/// sets, sorted lexicographically.
pub fn enumerate_minimal_vertex_covers(g: &Graph) -> Result<Vec<Vec<usize>>> {
    let n = g.n();
    if n > MAX_EXACT_NODES {
        return Err(Error::SizeLimit {
            what: "minimal vertex cover enumeration",
            limit: MAX_EXACT_NODES,
            actual: n,
        });
    }
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    // compatible[u]: nodes that may share an independent set with u.
    let compatible: Vec<u32> = (0..n)
        .map(|u| {
            let adj = g.neighbors(u).iter().fold(0u32, |m, &v| m | 1 << v);
            full & !adj & !(1 << u)
        })
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(0, full, 0, &compatible, &mut out)?;
    let mut covers: Vec<Vec<usize>> = out
        .into_iter()
        .map(|mis| (0..n).filter(|&u| mis & (1 << u) == 0).collect())
        .collect();
    covers.sort();
    Ok(covers)
}

fn bron_kerbosch(
    r: u32,
    mut p: u32,
    mut x: u32,
    compatible: &[u32],
    out: &mut Vec<u32>,
) -> Result<()> {
    if p == 0 {
        if x == 0 {
            if out.len() == MAX_ENUMERATED_COVERS {
                return Err(Error::SizeLimit {
                    what: "minimal vertex cover count",
                    limit: MAX_ENUMERATED_COVERS,
                    actual: MAX_ENUMERATED_COVERS + 1,
                });
            }
            out.push(r);
        }
        return Ok(());
    }
    let pivot = bits(p | x)
        .max_by_key(|&u| ((p & compatible[u]).count_ones(), std::cmp::Reverse(u)))
        .expect("p is nonempty");
    for v in bits(p & !compatible[pivot]) {
        bron_kerbosch(
            r | 1 << v,
            p & compatible[v],
            x & compatible[v],
            compatible,
            out,
        )?;
        p &= !(1 << v);
        x |= 1 << v;
    }
    Ok(())
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&u| mask & (1 << u) != 0)
}

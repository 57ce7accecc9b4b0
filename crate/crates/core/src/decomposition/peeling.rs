//! Peeling a sparse graph into low-degree layers and the bipartite copy graph
//! of the edges between layers.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{rng_from_seed, sparsity_gamma, Graph, Ownership};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// Copy of a node peeled off in some round.
    Low,
    /// Copy of a node adjacent to a peeled layer when it was removed.
    High,
}

/// One peeling round over the residual graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PeelRound {
    /// Residual nodes of degree at most `4γ`; removed in this round.
    pub low: Vec<usize>,
    /// Remaining residual neighbours of `low`.
    pub high: Vec<usize>,
    /// Edges `(h, l)` with `h ∈ high`, `l ∈ low`.
    pub cross: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct PeelingResult {
    pub gamma: f64,
    pub rounds: Vec<PeelRound>,
    /// Bipartite graph on node copies whose edges are all cross edges.
    /// Low copies come first, so every stored edge is `(low, high)`.
    pub copy_graph: Graph,
    /// Original node of each copy.
    pub copy_node: Vec<usize>,
    pub copy_side: Vec<Side>,
    pub low_copy: Vec<Option<usize>>,
    pub high_copy: Vec<Option<usize>>,
}

impl PeelingResult {
    pub fn depth(&self) -> usize {
        self.rounds.len()
    }

    pub fn cross_edge_count(&self) -> usize {
        self.copy_graph.m()
    }
}

/// Peels nodes of residual degree at most `4γ` until no edge is left.
/// Since every subgraph has average degree at most `2γ`, each round removes at
/// least half of the non-isolated residual nodes.
pub fn sparse_peeling(g: &Graph, gamma: f64) -> Result<PeelingResult> {
    let density = sparsity_gamma(g);
    if gamma + 1e-12 < density {
        return Err(Error::GammaTooSmall { gamma, density });
    }
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|u| g.degree(u)).collect();
    let mut residual_edges = g.m();
    let mut rounds = Vec::new();
    while residual_edges > 0 {
        let low: Vec<usize> = (0..n)
            .filter(|&u| alive[u] && deg[u] as f64 <= 4.0 * gamma)
            .collect();
        let mut in_low = vec![false; n];
        for &u in &low {
            in_low[u] = true;
        }
        let mut cross = Vec::new();
        let mut is_high = vec![false; n];
        for &l in &low {
            for &h in g.neighbors(l) {
                if alive[h] && !in_low[h] {
                    cross.push((h, l));
                    is_high[h] = true;
                }
            }
        }
        cross.sort_unstable();
        for &u in &low {
            alive[u] = false;
            for &v in g.neighbors(u) {
                if alive[v] {
                    residual_edges -= 1;
                    deg[v] -= 1;
                }
            }
        }
        let high = (0..n).filter(|&u| is_high[u]).collect();
        rounds.push(PeelRound { low, high, cross });
    }
    Ok(build_copies(n, gamma, rounds))
}

fn build_copies(n: usize, gamma: f64, rounds: Vec<PeelRound>) -> PeelingResult {
    let mut low_copy = vec![None; n];
    let mut high_copy = vec![None; n];
    let mut copy_node = Vec::new();
    let mut copy_side = Vec::new();
    let mut mark = |slot: &mut Option<usize>, u: usize, side: Side| {
        if slot.is_none() {
            *slot = Some(copy_node.len());
            copy_node.push(u);
            copy_side.push(side);
        }
    };
    let mut in_low = vec![false; n];
    let mut in_high = vec![false; n];
    for round in &rounds {
        for &(h, l) in &round.cross {
            in_high[h] = true;
            in_low[l] = true;
        }
    }
    for u in 0..n {
        if in_low[u] {
            mark(&mut low_copy[u], u, Side::Low);
        }
    }
    for u in 0..n {
        if in_high[u] {
            mark(&mut high_copy[u], u, Side::High);
        }
    }
    let edges: Vec<(usize, usize)> = rounds
        .iter()
        .flat_map(|r| r.cross.iter())
        .map(|&(h, l)| (high_copy[h].unwrap(), low_copy[l].unwrap()))
        .collect();
    let copy_graph = Graph::new(copy_node.len(), edges).expect("cross edges are distinct");
    PeelingResult {
        gamma,
        rounds,
        copy_graph,
        copy_node,
        copy_side,
        low_copy,
        high_copy,
    }
}

/// A star-shaped piece of the copy graph: edges between chosen low copies and
/// their neighbours. `low_owners[k]` are the agents that picked `low[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarPiece {
    pub low: Vec<usize>,
    pub low_owners: Vec<Vec<usize>>,
    pub high: Vec<usize>,
    /// Copy-graph edges `(high, low)`.
    pub edges: Vec<(usize, usize)>,
}

/// Repeatedly lets every agent pick one of its low copies uniformly at random
/// (unowned low copies are always taken) and keeps all copy-graph edges at the
/// picked copies, until every cross edge is in some piece.
pub fn zj_decomposition(
    peel: &PeelingResult,
    own: &Ownership,
    seed: u64,
) -> Result<Vec<StarPiece>> {
    let b = &peel.copy_graph;
    let r = own.dimension().max(1) as f64;
    let guard = ((64.0 * r * ((b.m() + 1) as f64).ln()).ceil() as usize).max(1);
    let choices: Vec<Vec<usize>> = own
        .agents()
        .iter()
        .map(|nodes| nodes.iter().filter_map(|&u| peel.low_copy[u]).collect())
        .collect();
    let always: Vec<usize> = (0..b.n())
        .filter(|&c| peel.copy_side[c] == Side::Low && own.owners(peel.copy_node[c]).is_empty())
        .collect();
    let mut rng = rng_from_seed(seed);
    let mut covered = vec![false; b.m()];
    let mut left = b.m();
    let mut pieces = Vec::new();
    while left > 0 {
        if pieces.len() == guard {
            return Err(Error::LoopGuard {
                rounds: guard,
                seed,
            });
        }
        let mut pickers: Vec<Vec<usize>> = vec![Vec::new(); b.n()];
        for (i, copies) in choices.iter().enumerate() {
            if !copies.is_empty() {
                pickers[copies[rng.gen_range(0..copies.len())]].push(i);
            }
        }
        let mut chosen = vec![false; b.n()];
        for &c in &always {
            chosen[c] = true;
        }
        for (c, p) in pickers.iter().enumerate() {
            chosen[c] |= !p.is_empty();
        }
        let mut edges = Vec::new();
        let mut touched = vec![false; b.n()];
        for (k, &(a, c)) in b.edges().iter().enumerate() {
            let (h, l) = if peel.copy_side[a] == Side::High {
                (a, c)
            } else {
                (c, a)
            };
            if chosen[l] {
                edges.push((h, l));
                touched[h] = true;
                touched[l] = true;
                if !covered[k] {
                    covered[k] = true;
                    left -= 1;
                }
            }
        }
        let low: Vec<usize> = (0..b.n())
            .filter(|&c| touched[c] && peel.copy_side[c] == Side::Low)
            .collect();
        let high = (0..b.n())
            .filter(|&c| touched[c] && peel.copy_side[c] == Side::High)
            .collect();
        let low_owners = low
            .iter()
            .map(|&c| std::mem::take(&mut pickers[c]))
            .collect();
        pieces.push(StarPiece {
            low,
            low_owners,
            high,
            edges,
        });
    }
    Ok(pieces)
}

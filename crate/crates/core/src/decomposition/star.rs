//! The star rule on bipartite pieces where every high-side node has at most
//! one low-side neighbour per agent.

use std::sync::Arc;

use super::combine::{Part, PartKind};
use super::peeling::{PeelingResult, StarPiece};
use crate::error::{Error, Result};
use crate::instance::{Graph, VcInstance};
use crate::threshold::{ThresholdFamily, ThresholdKind};

/// A high node `u` is taken iff `c_u ≤ c(N(u))`; otherwise its whole
/// neighbourhood is taken. Low nodes are taken if some high neighbour sends
/// them in. Covers every edge and pays at most twice the cheaper side per star.
pub struct StarThresholds {
    graph: Graph,
    high: Vec<bool>,
}

impl StarThresholds {
    pub fn new(graph: Graph, high: Vec<bool>) -> Result<Self> {
        if high.len() != graph.n() {
            return Err(Error::Precondition("one side flag per node".into()));
        }
        if let Some(&(u, v)) = graph.edges().iter().find(|&&(u, v)| high[u] == high[v]) {
            return Err(Error::Precondition(format!(
                "star edge ({u}, {v}) joins two nodes on the same side"
            )));
        }
        Ok(StarThresholds { graph, high })
    }

    fn neighbourhood_cost(&self, u: usize, costs: &[f64]) -> f64 {
        self.graph.neighbors(u).iter().map(|&v| costs[v]).sum()
    }
}

impl ThresholdFamily for StarThresholds {
    fn kind(&self) -> ThresholdKind {
        ThresholdKind::General
    }

    fn threshold(&self, v: usize, costs: &[f64]) -> f64 {
        if self.high[v] {
            return self.neighbourhood_cost(v, costs);
        }
        self.graph
            .neighbors(v)
            .iter()
            .map(|&u| {
                let others: f64 = self
                    .graph
                    .neighbors(u)
                    .iter()
                    .filter(|&&w| w != v)
                    .map(|&w| costs[w])
                    .sum();
                (costs[u] - others).max(0.0)
            })
            .fold(0.0, f64::max)
    }

    fn literal_selection(&self, costs: &[f64]) -> Option<Vec<bool>> {
        let mut sel = vec![false; self.graph.n()];
        for u in (0..self.graph.n()).filter(|&u| self.high[u] && self.graph.degree(u) > 0) {
            let around = self.neighbourhood_cost(u, costs);
            if costs[u] <= around {
                sel[u] = true;
            }
            if around <= costs[u] {
                for &v in self.graph.neighbors(u) {
                    sel[v] = true;
                }
            }
        }
        Some(sel)
    }
}

/// Builds a star part from a piece of the copy graph. Low copies are owned by
/// their pickers, high copies by all owners of the original node.
pub fn star_part(
    peel: &PeelingResult,
    inst: &VcInstance,
    piece: &StarPiece,
    ratio: f64,
) -> Result<Part> {
    let own = inst.ownership();
    let copies: Vec<usize> = piece.low.iter().chain(&piece.high).copied().collect();
    let mut local = vec![usize::MAX; peel.copy_graph.n()];
    for (k, &c) in copies.iter().enumerate() {
        local[c] = k;
    }
    let edges = piece.edges.iter().map(|&(h, l)| (local[h], local[l]));
    let graph = Graph::new(copies.len(), edges)?;
    let owners: Vec<Vec<usize>> = piece
        .low_owners
        .iter()
        .cloned()
        .chain(
            piece
                .high
                .iter()
                .map(|&c| own.owners(peel.copy_node[c]).to_vec()),
        )
        .collect();
    let nodes: Vec<usize> = copies.iter().map(|&c| peel.copy_node[c]).collect();
    let high: Vec<bool> = (0..copies.len()).map(|k| k >= piece.low.len()).collect();
    for h in (0..copies.len()).filter(|&k| high[k]) {
        let mut seen: Vec<usize> = Vec::new();
        for &l in graph.neighbors(h) {
            for &i in &owners[l] {
                if seen.contains(&i) {
                    return Err(Error::StarOwnership {
                        node: nodes[h],
                        agent: i,
                    });
                }
                seen.push(i);
            }
        }
    }
    let family = Arc::new(StarThresholds::new(graph.clone(), high)?);
    Part::new(nodes, graph, owners, family, ratio, PartKind::Star)
}

use std::collections::HashSet;

use crate::error::{Error, Result};

/// Simple undirected graph on nodes `0..n`.
///
/// Edges are stored as `(min, max)` pairs in insertion order; the order is
/// observable (ordered primal-dual raises duals in edge order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut list = Vec::new();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::InvalidInstance(format!(
                    "edge ({a}, {b}) references a node outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop at node {a}")));
            }
            let e = (a.min(b), a.max(b));
            if !seen.insert(e) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate edge ({}, {})",
                    e.0, e.1
                )));
            }
            list.push(e);
            adj[a].push(b);
            adj[b].push(a);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: list,
            adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn path(n: usize) -> Self {
        Self::new(n, (1..n).map(|i| (i - 1, i))).expect("path is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 nodes");
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::new(n, edges).expect("complete graph is simple")
    }

    /// Star with center 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Self {
        Self::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("star is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn is_vertex_cover(&self, selected: &[bool]) -> bool {
        self.edges.iter().all(|&(u, v)| selected[u] || selected[v])
    }

    pub fn is_independent(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(k, &u)| nodes[k + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Subgraph induced by `nodes`; local node `k` is `nodes[k]`.
    pub fn induced(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.n];
        for (k, &u) in nodes.iter().enumerate() {
            local[u] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| (local[u], local[v]));
        Graph::new(nodes.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = id;
            while let Some(u) = stack.pop() {
                members.push(u);
                for &v in &self.adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Number of edges with both endpoints in `mask`.
    pub fn induced_edge_count(&self, mask: &[bool]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| mask[u] && mask[v])
            .count()
    }
}

pub fn mask_of(n: usize, nodes: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &u in nodes {
        m[u] = true;
    }
    m
}

pub fn nodes_of(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(u, &b)| b.then_some(u))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_edges() {
        assert!(Graph::new(3, [(0, 0)]).is_err());
        assert!(Graph::new(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::new(3, [(0, 3)]).is_err());
    }

    #[test]
    fn normalizes_and_keeps_order() {
        let g = Graph::new(4, [(2, 1), (0, 3)]).unwrap();
        assert_eq!(g.edges(), &[(1, 2), (0, 3)]);
        assert!(g.has_edge(2, 1));
        assert_eq!(g.neighbors(3), &[0]);
    }

    #[test]
    fn induced_and_components() {
        let g = Graph::cycle(5);
        let h = g.induced(&[0, 1, 2]);
        assert_eq!(h.m(), 2);
        let g2 = Graph::new(5, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(g2.components(), vec![vec![0, 1], vec![2], vec![3, 4]]);
    }

    #[test]
    fn cover_and_independence() {
        let g = Graph::path(4);
        assert!(g.is_vertex_cover(&[false, true, false, true]));
        assert!(!g.is_vertex_cover(&[true, false, false, true]));
        assert!(g.is_independent(&[0, 2]));
        assert!(!g.is_independent(&[1, 2]));
    }
}

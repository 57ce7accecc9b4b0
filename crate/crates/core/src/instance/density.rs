//! Maximum subgraph density and min-max-indegree orientations.

use std::collections::VecDeque;

use super::graph::Graph;
use crate::oracles::flow::FlowNetwork;

/// Exact maximum density `max_S |E[S]| / |S|` as a reduced fraction
/// `(edges, nodes)`; `(0, 1)` for edgeless graphs.
pub fn max_density_fraction(g: &Graph) -> (usize, usize) {
    if g.m() == 0 {
        return (0, 1);
    }
    let mut cands: Vec<(usize, usize)> = Vec::new();
    for q in 1..=g.n() {
        for p in 0..=g.m() {
            if gcd(p, q) == 1 {
                cands.push((p, q));
            }
        }
    }
    cands.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    // The answer is the smallest candidate that no subgraph strictly exceeds.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if denser_than(g, cands[mid]) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    cands[lo]
}

/// Whether some subgraph has density strictly above `p/q`.
fn denser_than(g: &Graph, (p, q): (usize, usize)) -> bool {
    let m = g.m();
    let s = m + g.n();
    let t = s + 1;
    let mut net = FlowNetwork::new(t + 1, 0.5);
    for (k, &(u, v)) in g.edges().iter().enumerate() {
        net.add_edge(s, k, q as f64);
        net.add_edge(k, m + u, f64::INFINITY);
        net.add_edge(k, m + v, f64::INFINITY);
    }
    for u in 0..g.n() {
        net.add_edge(m + u, t, p as f64);
    }
    net.max_flow(s, t) < (q * m) as f64 - 0.5
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Maximum subgraph density as a real number.
pub fn sparsity_gamma(g: &Graph) -> f64 {
    let (p, q) = max_density_fraction(g);
    p as f64 / q as f64
}

/// Orientation of every edge of a graph; arc `(tail, head)` points into `head`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    n: usize,
    arcs: Vec<(usize, usize)>,
}

impl Orientation {
    pub fn new(n: usize, arcs: Vec<(usize, usize)>) -> Self {
        Orientation { n, arcs }
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn indegrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(_, h) in &self.arcs {
            d[h] += 1;
        }
        d
    }

    pub fn max_indegree(&self) -> usize {
        self.indegrees().into_iter().max().unwrap_or(0)
    }

    /// Tails of arcs entering `u`, sorted.
    pub fn in_neighbors(&self, u: usize) -> Vec<usize> {
        let mut v: Vec<usize> = self.arcs.iter().filter(|a| a.1 == u).map(|a| a.0).collect();
        v.sort_unstable();
        v
    }
}

/// Orientation minimising the maximum in-degree, by reversing directed paths
/// that run from a node of in-degree at most `d-2` into a node of in-degree `d`.
/// The result has max in-degree `⌈max density⌉`.
pub fn orient_min_max_indegree(g: &Graph) -> Orientation {
    let n = g.n();
    let mut arcs: Vec<(usize, usize)> = g.edges().to_vec();
    let mut indeg = vec![0usize; n];
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, &(_, h)) in arcs.iter().enumerate() {
        indeg[h] += 1;
        into[h].push(k);
    }
    loop {
        let d = indeg.iter().copied().max().unwrap_or(0);
        if d < 2 {
            break;
        }
        let mut improved = false;
        for top in 0..n {
            if indeg[top] != d {
                continue;
            }
            // Walk backwards along arcs entering each visited node.
            let mut via = vec![usize::MAX; n];
            let mut seen = vec![false; n];
            seen[top] = true;
            let mut q = VecDeque::from([top]);
            let mut found = None;
            while let Some(x) = q.pop_front() {
                if indeg[x] + 2 <= d {
                    found = Some(x);
                    break;
                }
                for &a in &into[x] {
                    let tail = arcs[a].0;
                    if !seen[tail] {
                        seen[tail] = true;
                        via[tail] = a;
                        q.push_back(tail);
                    }
                }
            }
            if let Some(mut x) = found {
                indeg[x] += 1;
                indeg[top] -= 1;
                while x != top {
                    let a = via[x];
                    let (tail, head) = arcs[a];
                    into[head].retain(|&b| b != a);
                    arcs[a] = (head, tail);
                    into[tail].push(a);
                    x = head;
                }
                improved = true;
                break;
            }
        }
        if !improved {
            break;
        }
    }
    Orientation { n, arcs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_density(g: &Graph) -> f64 {
        let n = g.n();
        let mut best: f64 = 0.0;
        for mask in 1u32..(1 << n) {
            let sel: Vec<bool> = (0..n).map(|u| mask >> u & 1 == 1).collect();
            let k = mask.count_ones() as f64;
            best = best.max(g.induced_edge_count(&sel) as f64 / k);
        }
        best
    }

    fn brute_orientation(g: &Graph) -> usize {
        let m = g.m();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << m) {
            let mut d = vec![0; g.n()];
            for (k, &(u, v)) in g.edges().iter().enumerate() {
                d[if mask >> k & 1 == 1 { u } else { v }] += 1;
            }
            best = best.min(d.into_iter().max().unwrap_or(0));
        }
        best
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen::<f64>() < p {
                    e.push((u, v));
                }
            }
        }
        Graph::new(n, e).unwrap()
    }

    #[test]
    fn spec_examples() {
        assert_eq!(sparsity_gamma(&Graph::cycle(5)), 1.0);
        assert_eq!(sparsity_gamma(&Graph::complete(4)), 1.5);
        assert_eq!(sparsity_gamma(&Graph::path(2)), 0.5);
        assert_eq!(orient_min_max_indegree(&Graph::cycle(5)).max_indegree(), 1);
        assert_eq!(orient_min_max_indegree(&Graph::star(4)).max_indegree(), 1);
        assert_eq!(
            orient_min_max_indegree(&Graph::complete(4)).max_indegree(),
            2
        );
    }

    #[test]
    fn density_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(2..=10);
            let g = random_graph(n, rng.gen_range(0.1..0.9), &mut rng);
            assert!((sparsity_gamma(&g) - brute_density(&g)).abs() < 1e-12);
        }
    }

    #[test]
    fn orientation_is_optimal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..80 {
            let n = rng.gen_range(2..=12);
            let g = random_graph(n, rng.gen_range(0.1..0.7), &mut rng);
            let o = orient_min_max_indegree(&g);
            let (p, q) = max_density_fraction(&g);
            assert_eq!(o.max_indegree(), p.div_ceil(q));
            assert_eq!(o.arcs().len(), g.m());
            if n <= 8 && g.m() <= 16 {
                assert_eq!(o.max_indegree(), brute_orientation(&g));
            }
        }
    }

    #[test]
    fn density_bounds_random_subsets() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random_graph(16, 0.4, &mut rng);
        let gamma = sparsity_gamma(&g);
        for _ in 0..1000 {
            let sel: Vec<bool> = (0..16).map(|_| rng.gen_bool(0.5)).collect();
            let k = sel.iter().filter(|&&b| b).count() as f64;
            assert!(gamma * k + 1e-9 >= g.induced_edge_count(&sel) as f64);
        }
    }
}

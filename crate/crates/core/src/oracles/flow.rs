//! Dinic max-flow on real capacities.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: f64,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    eps: f64,
}

impl FlowNetwork {
    /// Residual capacities at or below `eps` count as saturated.
    pub fn new(nodes: usize, eps: f64) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            eps,
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0.0 });
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let n = self.out.len();
        let mut total = 0.0;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &a in &self.out[u] {
                    let v = self.arcs[a].to;
                    if level[v] == usize::MAX && self.arcs[a].cap > self.eps {
                        level[v] = level[u] + 1;
                        q.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= self.eps {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(
        &mut self,
        u: usize,
        t: usize,
        limit: f64,
        level: &[usize],
        next: &mut [usize],
    ) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.out[u].len() {
            let a = self.out[u][next[u]];
            let v = self.arcs[a].to;
            if self.arcs[a].cap > self.eps && level[v] == level[u] + 1 {
                let got = self.augment(v, t, limit.min(self.arcs[a].cap), level, next);
                if got > self.eps {
                    self.arcs[a].cap -= got;
                    self.arcs[a ^ 1].cap += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0.0
    }

    /// Nodes reachable from `s` in the residual network (the minimal source side).
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.out.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.out[u] {
                let v = self.arcs[a].to;
                if !seen[v] && self.arcs[a].cap > self.eps {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_network() {
        let mut f = FlowNetwork::new(4, 1e-12);
        f.add_edge(0, 1, 3.0);
        f.add_edge(0, 2, 2.0);
        f.add_edge(1, 2, 1.0);
        f.add_edge(1, 3, 2.0);
        f.add_edge(2, 3, 3.0);
        assert!((f.max_flow(0, 3) - 5.0).abs() < 1e-12);
        let side = f.source_side(0);
        assert!(side[0] && !side[3]);
    }
}

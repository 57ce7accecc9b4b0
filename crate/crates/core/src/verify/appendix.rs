//! Non-monotone vertex-cover algorithms and the fixtures exposing them.

use crate::instance::{nodes_of, Graph, Ownership, VcInstance};
use crate::oracles::vc::vc_lp_solve;

/// Nodes with value at least ½ in the half-integral LP optimum.
pub fn lp_rounding_algorithm(g: &Graph, costs: &[f64]) -> Vec<usize> {
    let lp = vc_lp_solve(g, costs);
    (0..g.n()).filter(|&u| lp.x[u] >= 0.5).collect()
}

/// Raises each edge's dual as far as possible in the given order and returns
/// the nodes whose cost is fully paid. `order` lists edge indices of `g`.
pub fn ordered_primal_dual(g: &Graph, costs: &[f64], order: &[usize]) -> Vec<usize> {
    let mut left = costs.to_vec();
    for &k in order {
        let (u, v) = g.edges()[k];
        let y = left[u].min(left[v]);
        left[u] -= y;
        left[v] -= y;
    }
    // The smaller residual is set to exactly zero, so tightness needs no tolerance.
    (0..g.n())
        .filter(|&u| left[u] == 0.0 && g.degree(u) > 0)
        .collect()
}

/// Raises all duals of edges without a tight endpoint at unit rate and
/// returns the tight nodes.
pub fn simultaneous_primal_dual(g: &Graph, costs: &[f64]) -> Vec<usize> {
    let n = g.n();
    let mut left = costs.to_vec();
    let mut tight = vec![false; n];
    let scale = costs.iter().fold(1.0f64, |m, &c| m.max(c));
    loop {
        let active: Vec<(usize, usize)> = g
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| !tight[u] && !tight[v])
            .collect();
        if active.is_empty() {
            break;
        }
        let mut rate = vec![0usize; n];
        for &(u, v) in &active {
            rate[u] += 1;
            rate[v] += 1;
        }
        let step = (0..n)
            .filter(|&u| rate[u] > 0)
            .map(|u| left[u] / rate[u] as f64)
            .fold(f64::INFINITY, f64::min);
        for u in (0..n).filter(|&u| rate[u] > 0) {
            left[u] -= step * rate[u] as f64;
            if left[u] <= 1e-12 * scale {
                left[u] = 0.0;
                tight[u] = true;
            }
        }
    }
    nodes_of(&tight)
}

/// A unilateral cost change by one agent that breaks weak monotonicity.
#[derive(Debug, Clone, PartialEq)]
pub struct WmonFixture {
    pub name: &'static str,
    pub graph: Graph,
    pub ownership: Ownership,
    pub agent: usize,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
}

impl WmonFixture {
    pub fn instance_before(&self) -> VcInstance {
        VcInstance::from_node_costs(self.graph.clone(), self.ownership.clone(), &self.before)
            .expect("fixture is valid")
    }

    pub fn instance_after(&self) -> VcInstance {
        VcInstance::from_node_costs(self.graph.clone(), self.ownership.clone(), &self.after)
            .expect("fixture is valid")
    }
}

/// Cycle `u–a–b–v–d–u` (nodes 0..5 in that order); agent 0 owns `{u, v}`.
pub fn lp_rounding_fixture() -> WmonFixture {
    let eps = 1.0 / 32.0;
    WmonFixture {
        name: "lp-rounding",
        graph: Graph::cycle(5),
        ownership: Ownership::new(5, vec![vec![0, 3], vec![1], vec![2], vec![4]]).expect("valid"),
        agent: 0,
        before: vec![1.25, 1.0, 1.0, 1.0, 1.0],
        after: vec![1.125, 1.0, 1.0, eps, 1.0],
    }
}

/// Path `u–x–y–v` (nodes 0..4); agent 0 owns the endpoints.
fn path_fixture(name: &'static str, before: Vec<f64>, after: Vec<f64>) -> WmonFixture {
    WmonFixture {
        name,
        graph: Graph::path(4),
        ownership: Ownership::new(4, vec![vec![0, 3], vec![1], vec![2]]).expect("valid"),
        agent: 0,
        before,
        after,
    }
}

/// Dual order `ux, xy, yv` is the path's edge order.
pub fn ordered_primal_dual_fixture() -> WmonFixture {
    path_fixture(
        "ordered-primal-dual",
        vec![1.0, 1.5, 1.05, 0.5],
        vec![0.5, 1.5, 1.05, 0.3],
    )
}

pub fn simultaneous_primal_dual_fixture() -> WmonFixture {
    path_fixture(
        "simultaneous-primal-dual",
        vec![1.0, 3.0, 4.6, 2.5],
        vec![0.5, 3.0, 4.6, 2.4],
    )
}

use serde::Serialize;

use super::graph::Graph;
use crate::error::{Error, Result};

/// Agent ownership sets `T_i`. Sets may overlap; each node also knows its owners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ownership {
    agents: Vec<Vec<usize>>,
    owners: Vec<Vec<usize>>,
}

impl Ownership {
    /// Node lists are sorted; a node listed twice for one agent is rejected.
    pub fn new(n: usize, agents: Vec<Vec<usize>>) -> Result<Self> {
        let mut owners = vec![Vec::new(); n];
        let mut sorted = Vec::with_capacity(agents.len());
        for (i, mut nodes) in agents.into_iter().enumerate() {
            nodes.sort_unstable();
            for w in nodes.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidInstance(format!(
                        "agent {i} lists node {} twice",
                        w[0]
                    )));
                }
            }
            for &u in &nodes {
                if u >= n {
                    return Err(Error::InvalidInstance(format!(
                        "agent {i} owns node {u} outside 0..{n}"
                    )));
                }
                owners[u].push(i);
            }
            sorted.push(nodes);
        }
        Ok(Ownership {
            agents: sorted,
            owners,
        })
    }

    /// One agent per node, agent `u` owning node `u`.
    pub fn singletons(n: usize) -> Self {
        Self::new(n, (0..n).map(|u| vec![u]).collect()).expect("singletons are valid")
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn node_count(&self) -> usize {
        self.owners.len()
    }

    pub fn nodes(&self, agent: usize) -> &[usize] {
        &self.agents[agent]
    }

    pub fn agents(&self) -> &[Vec<usize>] {
        &self.agents
    }

    pub fn owners(&self, node: usize) -> &[usize] {
        &self.owners[node]
    }

    /// The unique owner under disjoint ownership (lowest index otherwise).
    pub fn owner(&self, node: usize) -> Option<usize> {
        self.owners[node].first().copied()
    }

    pub fn is_disjoint(&self) -> bool {
        self.owners.iter().all(|o| o.len() <= 1)
    }

    /// Problem dimension `r = max_i |T_i|`.
    pub fn dimension(&self) -> usize {
        self.agents.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Multidimensional vertex-cover instance. `costs[i][k]` is agent `i`'s cost
/// for its `k`-th owned node (`ownership.nodes(i)[k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct VcInstance {
    graph: Graph,
    ownership: Ownership,
    costs: Vec<Vec<f64>>,
}

impl VcInstance {
    pub fn new(graph: Graph, ownership: Ownership, costs: Vec<Vec<f64>>) -> Result<Self> {
        if ownership.node_count() != graph.n() {
            return Err(Error::InvalidInstance(format!(
                "ownership covers {} nodes but the graph has {}",
                ownership.node_count(),
                graph.n()
            )));
        }
        if costs.len() != ownership.agent_count() {
            return Err(Error::InvalidInstance(format!(
                "{} cost vectors for {} agents",
                costs.len(),
                ownership.agent_count()
            )));
        }
        for (i, c) in costs.iter().enumerate() {
            if c.len() != ownership.nodes(i).len() {
                return Err(Error::InvalidInstance(format!(
                    "agent {i} has {} costs for {} owned nodes",
                    c.len(),
                    ownership.nodes(i).len()
                )));
            }
            if let Some(bad) = c.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "agent {i} has cost {bad}; costs must be finite and nonnegative"
                )));
            }
        }
        Ok(VcInstance {
            graph,
            ownership,
            costs,
        })
    }

    /// Builds per-agent costs from a node-indexed vector (each owner pays the node's cost).
    pub fn from_node_costs(graph: Graph, ownership: Ownership, node_costs: &[f64]) -> Result<Self> {
        let costs = ownership
            .agents()
            .iter()
            .map(|nodes| nodes.iter().map(|&u| node_costs[u]).collect())
            .collect();
        Self::new(graph, ownership, costs)
    }

    /// Every node is its own agent.
    pub fn singleton(graph: Graph, node_costs: &[f64]) -> Result<Self> {
        let own = Ownership::singletons(graph.n());
        Self::from_node_costs(graph, own, node_costs)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ownership(&self) -> &Ownership {
        &self.ownership
    }

    pub fn costs(&self) -> &[Vec<f64>] {
        &self.costs
    }

    pub fn agent_costs(&self, agent: usize) -> &[f64] {
        &self.costs[agent]
    }

    pub fn cost(&self, agent: usize, node: usize) -> Option<f64> {
        let k = self.ownership.nodes(agent).binary_search(&node).ok()?;
        Some(self.costs[agent][k])
    }

    /// `ĉ_u`: the cheapest owner's cost, 0 for unowned nodes.
    pub fn node_costs(&self) -> Vec<f64> {
        let mut c = vec![f64::INFINITY; self.graph.n()];
        for (i, nodes) in self.ownership.agents().iter().enumerate() {
            for (k, &u) in nodes.iter().enumerate() {
                c[u] = c[u].min(self.costs[i][k]);
            }
        }
        for x in &mut c {
            if x.is_infinite() {
                *x = 0.0;
            }
        }
        c
    }

    /// Same instance with agent `agent` reporting `costs`.
    pub fn with_agent_costs(&self, agent: usize, costs: Vec<f64>) -> Result<Self> {
        let mut all = self.costs.clone();
        all[agent] = costs;
        Self::new(self.graph.clone(), self.ownership.clone(), all)
    }

    /// Total cost of a node set when every selected owned node is supplied by
    /// its cheapest owner; used for oracle comparisons.
    pub fn set_cost(&self, selected: &[bool]) -> f64 {
        let c = self.node_costs();
        (0..self.graph.n())
            .filter(|&u| selected[u])
            .map(|u| c[u])
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub issues: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }
}

pub fn validate_vc_instance(inst: &VcInstance) -> ValidationReport {
    let mut issues = Vec::new();
    let g = inst.graph();
    for (i, nodes) in inst.ownership().agents().iter().enumerate() {
        for (k, &u) in nodes.iter().enumerate() {
            if let Some(&v) = nodes[k + 1..].iter().find(|&&v| g.has_edge(u, v)) {
                issues.push(format!(
                    "agent {i}: owned nodes {u} and {v} are adjacent, T_{i} is not independent"
                ));
            }
        }
    }
    for (i, c) in inst.costs().iter().enumerate() {
        if c.len() != inst.ownership().nodes(i).len() {
            issues.push(format!("agent {i}: cost count does not match owned nodes"));
        }
        if c.iter().any(|x| !x.is_finite() || *x < 0.0) {
            issues.push(format!("agent {i}: costs must be finite and nonnegative"));
        }
    }
    ValidationReport { issues }
}

/// One accepted (agent, node) pair and the threshold paid for it.
/// `agent` is `None` for nodes nobody owns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provision {
    pub agent: Option<usize>,
    pub node: usize,
    pub threshold: f64,
}

/// Outcome of a deterministic vertex-cover mechanism.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MechanismResult {
    pub selected: Vec<bool>,
    pub provisions: Vec<Provision>,
    pub payments: Vec<f64>,
    pub is_cover: bool,
}

impl MechanismResult {
    pub(crate) fn from_provisions(g: &Graph, agents: usize, provisions: Vec<Provision>) -> Self {
        let mut selected = vec![false; g.n()];
        let mut payments = vec![0.0; agents];
        for p in &provisions {
            selected[p.node] = true;
            if let Some(i) = p.agent {
                payments[i] += p.threshold;
            }
        }
        let is_cover = g.is_vertex_cover(&selected);
        MechanismResult {
            selected,
            provisions,
            payments,
            is_cover,
        }
    }

    pub fn selected_nodes(&self) -> Vec<usize> {
        super::graph::nodes_of(&self.selected)
    }

    /// Social cost under the (true) costs in `inst`.
    pub fn cost(&self, inst: &VcInstance) -> f64 {
        self.provisions
            .iter()
            .map(|p| p.agent.map_or(0.0, |i| inst.cost(i, p.node).unwrap_or(0.0)))
            .sum()
    }

    pub fn total_payment(&self) -> f64 {
        self.payments.iter().sum()
    }

    /// `Σ (t_v − c̄_v)` over the nodes `agent` provides, in node order.
    pub fn utility(&self, agent: usize, truth: &VcInstance) -> f64 {
        self.provisions
            .iter()
            .filter(|p| p.agent == Some(agent))
            .map(|p| p.threshold - truth.cost(agent, p.node).unwrap_or(0.0))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_with_adjacent_owned_pair_fails() {
        let g = Graph::complete(3);
        let own = Ownership::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        let inst = VcInstance::new(g, own, vec![vec![1.0, 1.0], vec![1.0]]).unwrap();
        let rep = validate_vc_instance(&inst);
        assert!(!rep.is_ok());
        assert!(rep.issues[0].contains("not independent"));
    }

    #[test]
    fn single_edge_two_agents_passes() {
        let g = Graph::path(2);
        let inst = VcInstance::singleton(g, &[1.0, 2.0]).unwrap();
        assert!(validate_vc_instance(&inst).is_ok());
    }

    #[test]
    fn rejects_cost_shape_mismatch() {
        let g = Graph::path(2);
        let own = Ownership::singletons(2);
        assert!(VcInstance::new(g.clone(), own.clone(), vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(VcInstance::new(g, own, vec![vec![-1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn node_costs_take_cheapest_owner() {
        let g = Graph::empty(2);
        let own = Ownership::new(2, vec![vec![0], vec![0]]).unwrap();
        let inst = VcInstance::new(g, own, vec![vec![3.0], vec![5.0]]).unwrap();
        assert_eq!(inst.node_costs(), vec![3.0, 0.0]);
        assert!(!inst.ownership().is_disjoint());
        assert_eq!(inst.ownership().owners(0), &[0, 1]);
    }
}

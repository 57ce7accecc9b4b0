//! Single-dimensional parts: the LP-support rule and the random decomposition
//! into subgraphs holding at most one node per agent.

use std::sync::Arc;

use rand::Rng;

use super::combine::{
    run_decomposition, Decomposition, DecompositionOptions, DecompositionRun, Part, PartKind,
};
use crate::error::{Error, Result};
use crate::instance::{rng_from_seed, Graph, VcInstance};
use crate::oracles::vc::vc_lp_solve;
use crate::threshold::{ThresholdFamily, ThresholdKind};

/// Certified ratio of the LP-support rule on a single-dimensional part.
pub const SINGLEDIM_RATIO: f64 = 2.0;

/// Nodes carrying positive value in the maximal-support optimum of the
/// vertex-cover LP. Monotone in each node's own cost and a 2-approximation.
pub fn singledim_selection(g: &Graph, costs: &[f64]) -> Vec<bool> {
    vc_lp_solve(g, costs).support()
}

/// Critical values of [`singledim_selection`], found per connected component
/// by bisection on the node's own cost.
pub struct SingleDimThresholds {
    graph: Graph,
    components: Vec<(Vec<usize>, Graph)>,
    /// Component index and position inside it, per node.
    place: Vec<(usize, usize)>,
}

pub fn singledim_vc_mechanism(g: &Graph) -> SingleDimThresholds {
    let mut place = vec![(0, 0); g.n()];
    let components = g
        .components()
        .into_iter()
        .enumerate()
        .map(|(ci, nodes)| {
            for (k, &u) in nodes.iter().enumerate() {
                place[u] = (ci, k);
            }
            let sub = g.induced(&nodes);
            (nodes, sub)
        })
        .collect();
    SingleDimThresholds {
        graph: g.clone(),
        components,
        place,
    }
}

/// Relative width at which the bisection stops.
const BISECTION_TOL: f64 = 1e-12;

impl ThresholdFamily for SingleDimThresholds {
    fn kind(&self) -> ThresholdKind {
        ThresholdKind::General
    }

    fn threshold(&self, u: usize, costs: &[f64]) -> f64 {
        let (ci, k) = self.place[u];
        let (nodes, sub) = &self.components[ci];
        // Above the neighbourhood cost, zeroing u and raising its neighbours is
        // strictly cheaper, so u leaves every optimum.
        let mut hi: f64 = self.graph.neighbors(u).iter().map(|&v| costs[v]).sum();
        if hi <= 0.0 {
            return 0.0;
        }
        let mut local: Vec<f64> = nodes.iter().map(|&v| costs[v]).collect();
        let mut selected_at = |b: f64| {
            local[k] = b;
            vc_lp_solve(sub, &local).x[k] > 0.0
        };
        if selected_at(hi) {
            return hi;
        }
        if !selected_at(0.0) {
            return 0.0;
        }
        let mut lo = 0.0;
        let width = BISECTION_TOL * hi;
        while hi - lo > width {
            let mid = 0.5 * (lo + hi);
            if selected_at(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn literal_selection(&self, costs: &[f64]) -> Option<Vec<bool>> {
        Some(singledim_selection(&self.graph, costs))
    }

    fn literal_tolerance(&self, costs: &[f64]) -> f64 {
        1e-9 * (1.0 + costs.iter().sum::<f64>())
    }
}

/// One round of the random decomposition: the induced subgraph on `nodes`,
/// where `owners[k]` are the agents that picked `nodes[k]` (empty for unowned nodes).
#[derive(Debug, Clone, PartialEq)]
pub struct SingleDimPick {
    pub nodes: Vec<usize>,
    pub owners: Vec<Vec<usize>>,
}

/// Repeatedly lets every agent pick one of its nodes uniformly at random and
/// takes the subgraph induced by the picks plus all unowned nodes, until every
/// edge lies in some round's subgraph.
pub fn random_singledim_decomposition(inst: &VcInstance, seed: u64) -> Result<Vec<SingleDimPick>> {
    let g = inst.graph();
    let own = inst.ownership();
    let r = own.dimension().max(1) as f64;
    let guard = ((64.0 * r * r * ((g.m() + 1) as f64).ln()).ceil() as usize).max(1);
    let unowned: Vec<usize> = (0..g.n()).filter(|&u| own.owners(u).is_empty()).collect();
    let mut rng = rng_from_seed(seed);
    let mut covered = vec![false; g.m()];
    let mut left = g.m();
    let mut picks = Vec::new();
    while left > 0 {
        if picks.len() == guard {
            return Err(Error::LoopGuard {
                rounds: guard,
                seed,
            });
        }
        let mut pickers: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (i, nodes) in own.agents().iter().enumerate() {
            if !nodes.is_empty() {
                pickers[nodes[rng.gen_range(0..nodes.len())]].push(i);
            }
        }
        let mut inside = vec![false; g.n()];
        for &u in &unowned {
            inside[u] = true;
        }
        for (u, p) in pickers.iter().enumerate() {
            inside[u] |= !p.is_empty();
        }
        for (k, &(u, v)) in g.edges().iter().enumerate() {
            if inside[u] && inside[v] && !covered[k] {
                covered[k] = true;
                left -= 1;
            }
        }
        let nodes: Vec<usize> = (0..g.n()).filter(|&u| inside[u]).collect();
        let owners = nodes
            .iter()
            .map(|&u| std::mem::take(&mut pickers[u]))
            .collect();
        picks.push(SingleDimPick { nodes, owners });
    }
    Ok(picks)
}

/// Builds the single-dimensional parts of a random decomposition.
pub fn singledim_parts(inst: &VcInstance, picks: Vec<SingleDimPick>) -> Result<Vec<Part>> {
    picks
        .into_iter()
        .map(|p| {
            let sub = inst.graph().induced(&p.nodes);
            let family = Arc::new(singledim_vc_mechanism(&sub));
            Part::new(
                p.nodes,
                sub,
                p.owners,
                family,
                SINGLEDIM_RATIO,
                PartKind::SingleDim,
            )
        })
        .collect()
}

/// The r-dimensional vertex-cover mechanism: a random single-dimensional
/// decomposition, the LP-support rule on each part, combined by max.
/// Its ratio bound is twice the number of parts.
pub fn rdim_mechanism(
    inst: &VcInstance,
    seed: u64,
    opts: DecompositionOptions,
) -> Result<DecompositionRun> {
    let picks = random_singledim_decomposition(inst, seed)?;
    let parts = singledim_parts(inst, picks)?;
    let decomposition = Decomposition::new(inst.graph().clone(), parts)?;
    let result = run_decomposition(&decomposition, inst, opts)?;
    Ok(DecompositionRun {
        result,
        decomposition,
    })
}

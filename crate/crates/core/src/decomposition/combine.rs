//! Max-combination of threshold mechanisms run on subgraphs.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::instance::{Graph, MechanismResult, Provision, VcInstance};
use crate::par::{self, Exec};
use crate::threshold::{ThresholdFamily, ThresholdKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PartKind {
    SingleDim,
    Scaled,
    Star,
    Custom,
}

/// A subgraph together with the threshold mechanism run on it.
///
/// Local node `k` stands for original node `nodes[k]`; an original node may
/// appear twice when the part holds two copies of it. `owners[k]` lists the
/// agents that own the local node inside this part.
#[derive(Clone)]
pub struct Part {
    pub nodes: Vec<usize>,
    pub graph: Graph,
    pub owners: Vec<Vec<usize>>,
    pub family: Arc<dyn ThresholdFamily>,
    /// Approximation ratio certified for this part.
    pub ratio: f64,
    pub kind: PartKind,
}

impl fmt::Debug for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Part")
            .field("kind", &self.kind)
            .field("nodes", &self.nodes)
            .field("edges", &self.graph.edges())
            .field("owners", &self.owners)
            .field("ratio", &self.ratio)
            .finish()
    }
}

impl Part {
    pub fn new(
        nodes: Vec<usize>,
        graph: Graph,
        owners: Vec<Vec<usize>>,
        family: Arc<dyn ThresholdFamily>,
        ratio: f64,
        kind: PartKind,
    ) -> Result<Self> {
        if nodes.len() != graph.n() || owners.len() != graph.n() {
            return Err(Error::Precondition(format!(
                "part has {} nodes, {} owner lists and a graph on {} nodes",
                nodes.len(),
                owners.len(),
                graph.n()
            )));
        }
        Ok(Part {
            nodes,
            graph,
            owners,
            family,
            ratio,
            kind,
        })
    }

    /// Per local node, the cheapest reported cost among its part owners (0 if none).
    pub fn local_costs(&self, inst: &VcInstance) -> Result<Vec<f64>> {
        self.nodes
            .iter()
            .zip(&self.owners)
            .map(|(&u, owners)| {
                owners.iter().try_fold(f64::INFINITY, |m, &i| {
                    inst.cost(i, u).map(|c| m.min(c)).ok_or_else(|| {
                        Error::Precondition(format!(
                            "agent {i} owns node {u} in a part but not in the instance"
                        ))
                    })
                })
            })
            .map(|r| r.map(|c| if c.is_finite() { c } else { 0.0 }))
            .collect()
    }
}

/// Subgraphs whose edges together cover the whole graph.
#[derive(Debug, Clone)]
pub struct Decomposition {
    graph: Graph,
    parts: Vec<Part>,
}

impl Decomposition {
    pub fn new(graph: Graph, parts: Vec<Part>) -> Result<Self> {
        let mut covered = vec![false; graph.m()];
        let index: BTreeMap<(usize, usize), usize> = graph
            .edges()
            .iter()
            .enumerate()
            .map(|(k, &e)| (e, k))
            .collect();
        for part in &parts {
            if let Some(&u) = part.nodes.iter().find(|&&u| u >= graph.n()) {
                return Err(Error::Precondition(format!(
                    "part refers to node {u} outside the graph"
                )));
            }
            for &(a, b) in part.graph.edges() {
                let (u, v) = (part.nodes[a], part.nodes[b]);
                match index.get(&(u.min(v), u.max(v))) {
                    Some(&k) => covered[k] = true,
                    None => {
                        return Err(Error::Precondition(format!(
                            "part edge ({u}, {v}) is not an edge of the graph"
                        )))
                    }
                }
            }
        }
        if let Some(k) = covered.iter().position(|c| !c) {
            let (u, v) = graph.edges()[k];
            return Err(Error::EdgeCoverage(u, v));
        }
        Ok(Decomposition { graph, parts })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    /// Sum of the parts' certified ratios: the combined mechanism's guarantee.
    pub fn ratio_bound(&self) -> f64 {
        self.parts.iter().map(|p| p.ratio).sum()
    }
}

/// The max-combined family under disjoint ownership: `t_v = max_q t_v^q`,
/// with 0 for parts not containing `v`.
pub struct CombinedThresholds<'a> {
    d: &'a Decomposition,
    occurrences: Vec<Vec<(usize, usize)>>,
    kind: ThresholdKind,
}

pub fn combine(d: &Decomposition) -> CombinedThresholds<'_> {
    let mut occurrences = vec![Vec::new(); d.graph.n()];
    for (q, part) in d.parts.iter().enumerate() {
        for (k, &u) in part.nodes.iter().enumerate() {
            occurrences[u].push((q, k));
        }
    }
    let kinds: Vec<ThresholdKind> = d.parts.iter().map(|p| p.family.kind()).collect();
    let kind = if kinds.iter().all(|&k| k == ThresholdKind::Edge) {
        ThresholdKind::Edge
    } else if kinds.iter().all(|&k| k != ThresholdKind::General) {
        ThresholdKind::Neighbor
    } else {
        ThresholdKind::General
    };
    CombinedThresholds {
        d,
        occurrences,
        kind,
    }
}

impl ThresholdFamily for CombinedThresholds<'_> {
    fn kind(&self) -> ThresholdKind {
        self.kind
    }

    fn threshold(&self, u: usize, costs: &[f64]) -> f64 {
        self.occurrences[u]
            .iter()
            .map(|&(q, k)| {
                let part = &self.d.parts[q];
                let local: Vec<f64> = part.nodes.iter().map(|&v| costs[v]).collect();
                part.family.threshold(k, &local)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecompositionOptions {
    pub exec: Exec,
    /// Re-evaluate part thresholds with each owner's costs zeroed.
    pub check_independence: bool,
    /// Compare part thresholds with the part's explicit selection rule, if it has one.
    pub check_literal: bool,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions {
            exec: Exec::default(),
            check_independence: true,
            check_literal: true,
        }
    }
}

/// Outcome of a decomposition mechanism together with the decomposition it used.
#[derive(Debug, Clone)]
pub struct DecompositionRun {
    pub result: MechanismResult,
    pub decomposition: Decomposition,
}

impl DecompositionRun {
    pub fn part_count(&self) -> usize {
        self.decomposition.parts().len()
    }

    pub fn ratio_bound(&self) -> f64 {
        self.decomposition.ratio_bound()
    }
}

struct Candidate {
    node: usize,
    agent: Option<usize>,
    threshold: f64,
    qualifies: bool,
}

/// Runs the combined threshold mechanism for arbitrary (possibly overlapping)
/// ownership.
///
/// Inside a part, an owner `i` of a local node faces the part threshold capped
/// by the other part owners' costs; among tied owners the lowest index wins.
/// Across parts each agent's threshold for a node is the max over its parts.
pub fn run_decomposition(
    d: &Decomposition,
    inst: &VcInstance,
    opts: DecompositionOptions,
) -> Result<MechanismResult> {
    if inst.graph() != &d.graph {
        return Err(Error::Precondition(
            "decomposition was built for a different graph".into(),
        ));
    }
    let per_part = par::try_map_indexed(opts.exec, d.parts.len(), |q| {
        evaluate_part(&d.parts[q], inst, opts)
    })?;
    let mut best: BTreeMap<(usize, Option<usize>), (f64, bool)> = BTreeMap::new();
    for cand in per_part.into_iter().flatten() {
        let entry = best.entry((cand.node, cand.agent)).or_insert((0.0, false));
        entry.0 = entry.0.max(cand.threshold);
        entry.1 |= cand.qualifies;
    }
    let own = inst.ownership();
    let mut provisions = Vec::new();
    for u in 0..d.graph.n() {
        let owners = own.owners(u);
        if owners.is_empty() {
            let t = best.get(&(u, None)).map_or(0.0, |e| e.0);
            provisions.push(Provision {
                agent: None,
                node: u,
                threshold: t,
            });
            continue;
        }
        for &i in owners {
            let c = inst.cost(i, u).expect("owner has a cost");
            let selected = match best.get(&(u, Some(i))) {
                Some(&(_, q)) => q,
                None => c <= 0.0,
            };
            if selected {
                let t = best.get(&(u, Some(i))).map_or(0.0, |e| e.0);
                provisions.push(Provision {
                    agent: Some(i),
                    node: u,
                    threshold: t,
                });
            }
        }
    }
    Ok(MechanismResult::from_provisions(
        &d.graph,
        own.agent_count(),
        provisions,
    ))
}

fn evaluate_part(
    part: &Part,
    inst: &VcInstance,
    opts: DecompositionOptions,
) -> Result<Vec<Candidate>> {
    let hat = part.local_costs(inst)?;
    let t_hat: Vec<f64> = (0..hat.len())
        .map(|k| part.family.threshold(k, &hat))
        .collect();
    if opts.check_independence {
        check_part_independence(part, &hat, &t_hat)?;
    }
    if opts.check_literal {
        check_literal_rule(part, &hat, &t_hat)?;
    }
    let mut out = Vec::new();
    for k in 0..hat.len() {
        let u = part.nodes[k];
        let owners = &part.owners[k];
        if owners.is_empty() {
            out.push(Candidate {
                node: u,
                agent: None,
                threshold: t_hat[k],
                qualifies: true,
            });
            continue;
        }
        let cost = |j: usize| inst.cost(j, u).expect("checked by local_costs");
        for &i in owners {
            let ci = cost(i);
            let mut t = t_hat[k];
            let mut qualifies = ci <= t_hat[k];
            for &j in owners.iter().filter(|&&j| j != i) {
                let cj = cost(j);
                t = t.min(cj);
                qualifies &= if j < i { ci < cj } else { ci <= cj };
            }
            out.push(Candidate {
                node: u,
                agent: Some(i),
                threshold: t,
                qualifies,
            });
        }
    }
    Ok(out)
}

fn check_part_independence(part: &Part, hat: &[f64], t_hat: &[f64]) -> Result<()> {
    let mut agents: Vec<usize> = part.owners.iter().flatten().copied().collect();
    agents.sort_unstable();
    agents.dedup();
    for i in agents {
        let mut masked = hat.to_vec();
        for (k, owners) in part.owners.iter().enumerate() {
            if owners.contains(&i) {
                masked[k] = 0.0;
            }
        }
        for (k, owners) in part.owners.iter().enumerate() {
            if owners.contains(&i) && part.family.threshold(k, &masked) != t_hat[k] {
                return Err(Error::ContractViolation {
                    node: part.nodes[k],
                    agent: i,
                });
            }
        }
    }
    Ok(())
}

fn check_literal_rule(part: &Part, hat: &[f64], t_hat: &[f64]) -> Result<()> {
    let Some(literal) = part.family.literal_selection(hat) else {
        return Ok(());
    };
    let tol = part.family.literal_tolerance(hat);
    for k in 0..hat.len() {
        let by_threshold = hat[k] <= t_hat[k];
        if by_threshold == literal[k] || hat[k] == 0.0 || (hat[k] - t_hat[k]).abs() <= tol {
            continue;
        }
        return Err(match part.kind {
            PartKind::Star => Error::StarRuleMismatch(part.nodes[k]),
            _ if literal[k] => Error::NonMonotoneRule {
                node: part.nodes[k],
                selected_at: hat[k],
                dropped_at: t_hat[k],
            },
            _ => Error::NonMonotoneRule {
                node: part.nodes[k],
                selected_at: t_hat[k],
                dropped_at: hat[k],
            },
        });
    }
    Ok(())
}

//! Mechanisms for sparse graphs built from peeling layers and star pieces.

use std::sync::Arc;

use super::combine::{
    run_decomposition, Decomposition, DecompositionOptions, DecompositionRun, Part, PartKind,
};
use super::peeling::{sparse_peeling, zj_decomposition, PeelingResult, Side, StarPiece};
use super::star::star_part;
use crate::error::{Error, Result};
use crate::instance::{sparsity_gamma, VcInstance};
use crate::threshold::{ax_mechanism, ScalingVector};

/// Unit-scaled edge mechanism on each peeled layer that has an edge.
/// Layer degrees are at most `4γ`, giving ratio `4γ + 1`.
fn layer_parts(peel: &PeelingResult, inst: &VcInstance) -> Result<Vec<Part>> {
    let g = inst.graph();
    let own = inst.ownership();
    peel.rounds
        .iter()
        .map(|round| g.induced(&round.low))
        .zip(&peel.rounds)
        .filter(|(sub, _)| sub.m() > 0)
        .map(|(sub, round)| {
            let family = Arc::new(ax_mechanism(&sub, &ScalingVector::ones(sub.n())));
            let owners = round.low.iter().map(|&u| own.owners(u).to_vec()).collect();
            Part::new(
                round.low.clone(),
                sub,
                owners,
                family,
                4.0 * peel.gamma + 1.0,
                PartKind::Scaled,
            )
        })
        .collect()
}

fn resolve_gamma(inst: &VcInstance, gamma: Option<f64>) -> f64 {
    gamma.unwrap_or_else(|| sparsity_gamma(inst.graph()))
}

/// Mechanism for graphs of maximum subgraph density at most `γ` (defaults to
/// the exact density): layer parts plus randomly drawn star pieces of the
/// copy graph, each star part certified at `8γ`.
pub fn minor_closed_mechanism(
    inst: &VcInstance,
    gamma: Option<f64>,
    seed: u64,
    opts: DecompositionOptions,
) -> Result<DecompositionRun> {
    let peel = sparse_peeling(inst.graph(), resolve_gamma(inst, gamma))?;
    let mut parts = layer_parts(&peel, inst)?;
    for piece in zj_decomposition(&peel, inst.ownership(), seed)? {
        parts.push(star_part(&peel, inst, &piece, 8.0 * peel.gamma)?);
    }
    let decomposition = Decomposition::new(inst.graph().clone(), parts)?;
    let result = run_decomposition(&decomposition, inst, opts)?;
    Ok(DecompositionRun {
        result,
        decomposition,
    })
}

/// Fails unless no node has two neighbours owned by the same agent.
pub fn check_three_hop_far(inst: &VcInstance) -> Result<()> {
    let g = inst.graph();
    let own = inst.ownership();
    for u in 0..g.n() {
        let mut seen: Vec<usize> = Vec::new();
        for &v in g.neighbors(u) {
            for &i in own.owners(v) {
                if seen.contains(&i) {
                    return Err(Error::NotThreeHopFar { node: u, agent: i });
                }
                seen.push(i);
            }
        }
    }
    Ok(())
}

/// Deterministic variant for 3-hop-far ownership: layer parts plus a single
/// star part on the whole copy graph.
pub fn threehop_mechanism(
    inst: &VcInstance,
    gamma: Option<f64>,
    opts: DecompositionOptions,
) -> Result<DecompositionRun> {
    check_three_hop_far(inst)?;
    let peel = sparse_peeling(inst.graph(), resolve_gamma(inst, gamma))?;
    let mut parts = layer_parts(&peel, inst)?;
    if peel.copy_graph.m() > 0 {
        let own = inst.ownership();
        let b = &peel.copy_graph;
        let low: Vec<usize> = (0..b.n())
            .filter(|&c| peel.copy_side[c] == Side::Low)
            .collect();
        let piece = StarPiece {
            low_owners: low
                .iter()
                .map(|&c| own.owners(peel.copy_node[c]).to_vec())
                .collect(),
            low,
            high: (0..b.n())
                .filter(|&c| peel.copy_side[c] == Side::High)
                .collect(),
            edges: b.edges().iter().map(|&(l, h)| (h, l)).collect(),
        };
        parts.push(star_part(&peel, inst, &piece, 8.0 * peel.gamma)?);
    }
    let decomposition = Decomposition::new(inst.graph().clone(), parts)?;
    let result = run_decomposition(&decomposition, inst, opts)?;
    Ok(DecompositionRun {
        result,
        decomposition,
    })
}

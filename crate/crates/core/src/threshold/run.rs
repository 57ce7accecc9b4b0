use super::family::ThresholdFamily;
use crate::error::{Error, Result};
use crate::instance::{MechanismResult, Provision, VcInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    /// Re-evaluate every threshold with the owner's costs zeroed and fail on any difference.
    pub check_independence: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            check_independence: true,
        }
    }
}

/// Thresholds of every node at the given node costs.
pub fn thresholds(tf: &dyn ThresholdFamily, costs: &[f64]) -> Vec<f64> {
    (0..costs.len()).map(|u| tf.threshold(u, costs)).collect()
}

/// Selects `{u : c_u <= t_u}` and pays each agent the thresholds of its selected nodes.
/// Requires disjoint ownership; nodes nobody owns cost 0 and are always selected.
pub fn run_threshold_mechanism(
    tf: &dyn ThresholdFamily,
    inst: &VcInstance,
) -> Result<MechanismResult> {
    run_threshold_mechanism_with(tf, inst, RunOptions::default())
}

pub fn run_threshold_mechanism_with(
    tf: &dyn ThresholdFamily,
    inst: &VcInstance,
    opts: RunOptions,
) -> Result<MechanismResult> {
    let own = inst.ownership();
    if !own.is_disjoint() {
        return Err(Error::Precondition(
            "threshold mechanisms need disjoint ownership; use nondisjoint_wrap".into(),
        ));
    }
    let costs = inst.node_costs();
    let n = costs.len();
    let mut provisions = Vec::new();
    for u in 0..n {
        let t = tf.threshold(u, &costs);
        let owner = own.owner(u);
        if opts.check_independence {
            if let Some(i) = owner {
                let mut masked = costs.clone();
                for &w in own.nodes(i) {
                    masked[w] = 0.0;
                }
                if tf.threshold(u, &masked) != t {
                    return Err(Error::ContractViolation { node: u, agent: i });
                }
            }
        }
        if costs[u] <= t {
            provisions.push(Provision {
                agent: owner,
                node: u,
                threshold: t,
            });
        }
    }
    Ok(MechanismResult::from_provisions(
        inst.graph(),
        own.agent_count(),
        provisions,
    ))
}

/// Runs a neighbor-threshold family under overlapping ownership.
///
/// Each owner `i` of `u` faces `min(t̂_u, cheapest other owner's cost)`, where
/// `t̂_u` is the family's threshold at the per-node minimum costs. A node goes
/// to at most one owner; among tied owners the lowest index wins.
pub fn nondisjoint_wrap(tf: &dyn ThresholdFamily, inst: &VcInstance) -> Result<MechanismResult> {
    if tf.kind() == super::ThresholdKind::General {
        return Err(Error::Precondition(
            "overlapping ownership needs a neighbor or edge threshold family".into(),
        ));
    }
    let own = inst.ownership();
    let hat = inst.node_costs();
    let mut provisions = Vec::new();
    for u in 0..hat.len() {
        let t_hat = tf.threshold(u, &hat);
        let owners = own.owners(u);
        if owners.is_empty() {
            if hat[u] <= t_hat {
                provisions.push(Provision {
                    agent: None,
                    node: u,
                    threshold: t_hat,
                });
            }
            continue;
        }
        let cost_of = |i: usize| inst.cost(i, u).expect("owner has a cost");
        for &i in owners {
            let t = owners
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| cost_of(j))
                .fold(t_hat, f64::min);
            if cost_of(i) <= t {
                provisions.push(Provision {
                    agent: Some(i),
                    node: u,
                    threshold: t,
                });
                break;
            }
        }
    }
    Ok(MechanismResult::from_provisions(
        inst.graph(),
        own.agent_count(),
        provisions,
    ))
}

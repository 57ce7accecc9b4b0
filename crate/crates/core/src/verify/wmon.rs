//! Randomized search for violations of weak monotonicity.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::instance::{rng_from_seed, MechanismResult, VcInstance};
use crate::par::{self, item_seed, Exec};

/// Per agent, the nodes it provides.
pub type Allocation = Vec<Vec<usize>>;

/// Agent allocation of a mechanism outcome.
pub fn allocation_of_result(result: &MechanismResult, agents: usize) -> Allocation {
    let mut a = vec![Vec::new(); agents];
    for p in &result.provisions {
        if let Some(i) = p.agent {
            a[i].push(p.node);
        }
    }
    a
}

/// Agent allocation of a node set: each selected node goes to its cheapest
/// owner, lowest index on ties.
pub fn allocation_of_nodes(inst: &VcInstance, nodes: &[usize]) -> Allocation {
    let mut a = vec![Vec::new(); inst.ownership().agent_count()];
    for &u in nodes {
        let best = inst.ownership().owners(u).iter().copied().min_by(|&i, &j| {
            inst.cost(i, u)
                .unwrap()
                .total_cmp(&inst.cost(j, u).unwrap())
                .then(i.cmp(&j))
        });
        if let Some(i) = best {
            a[i].push(u);
        }
    }
    a
}

/// One agent's report change `before → after` with allocations `a` (under
/// `before`) and `b` (under `after`) such that
/// `before(a) − before(b) > after(a) − after(b)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WmonWitness {
    pub probe: usize,
    pub agent: usize,
    pub nodes: Vec<usize>,
    pub before: Vec<f64>,
    pub after: Vec<f64>,
    /// Full cost table of the instance before the change.
    pub context: Vec<Vec<f64>>,
    pub alloc_before: Vec<usize>,
    pub alloc_after: Vec<usize>,
    pub lhs: f64,
    pub rhs: f64,
}

fn agent_cost(inst: &VcInstance, agent: usize, costs: &[f64], nodes: &[usize]) -> f64 {
    let own = inst.ownership().nodes(agent);
    nodes
        .iter()
        .map(|u| {
            costs[own
                .iter()
                .position(|v| v == u)
                .expect("allocated node is owned")]
        })
        .sum()
}

/// Evaluates one report change; `Some` iff it violates weak monotonicity by more than `1e-9`.
pub fn wmon_pair<F>(
    alg: &F,
    inst: &VcInstance,
    agent: usize,
    after: &[f64],
) -> Result<Option<WmonWitness>>
where
    F: Fn(&VcInstance) -> Result<Allocation> + ?Sized,
{
    let changed = inst.with_agent_costs(agent, after.to_vec())?;
    let a = alg(inst)?.swap_remove(agent);
    let b = alg(&changed)?.swap_remove(agent);
    let before = inst.agent_costs(agent);
    let lhs = agent_cost(inst, agent, before, &a) - agent_cost(inst, agent, before, &b);
    let rhs = agent_cost(inst, agent, after, &a) - agent_cost(inst, agent, after, &b);
    if lhs <= rhs + 1e-9 {
        return Ok(None);
    }
    Ok(Some(WmonWitness {
        probe: 0,
        agent,
        nodes: inst.ownership().nodes(agent).to_vec(),
        before: before.to_vec(),
        after: after.to_vec(),
        context: inst.costs().to_vec(),
        alloc_before: a,
        alloc_after: b,
        lhs,
        rhs,
    }))
}

fn perturb(costs: &[f64], scale: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut out = costs.to_vec();
    let k = rng.gen_range(0..costs.len());
    match rng.gen_range(0..4) {
        0 => out
            .iter_mut()
            .for_each(|c| *c = rng.gen_range(0.0..2.0 * scale)),
        1 => out[k] *= rng.gen::<f64>(),
        2 => out.iter_mut().for_each(|c| *c *= rng.gen::<f64>()),
        _ => out[k] *= rng.gen_range(1.0..3.0),
    }
    out
}

/// Samples instances and unilateral report changes (uniform resampling,
/// single- and all-coordinate decreases, single-coordinate increases) and
/// returns every violation, each shrunk by halving the change while it persists.
pub fn wmon_check<F, S>(
    alg: &F,
    sampler: &S,
    probes: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<WmonWitness>>
where
    F: Fn(&VcInstance) -> Result<Allocation> + Sync + ?Sized,
    S: Fn(&mut ChaCha8Rng) -> VcInstance + Sync + ?Sized,
{
    let found = par::try_map_indexed(exec, probes, |k| {
        let mut rng = rng_from_seed(item_seed(seed, k));
        let inst = sampler(&mut rng);
        let agents: Vec<usize> = (0..inst.ownership().agent_count())
            .filter(|&i| !inst.ownership().nodes(i).is_empty())
            .collect();
        if agents.is_empty() {
            return Ok(None);
        }
        let agent = agents[rng.gen_range(0..agents.len())];
        let scale = inst
            .costs()
            .iter()
            .flatten()
            .fold(1e-9f64, |m, &c| m.max(c));
        let before = inst.agent_costs(agent).to_vec();
        let mut after = perturb(&before, scale, &mut rng);
        let Some(mut witness) = wmon_pair(alg, &inst, agent, &after)? else {
            return Ok(None);
        };
        for _ in 0..30 {
            let half: Vec<f64> = before
                .iter()
                .zip(&after)
                .map(|(b, a)| b + 0.5 * (a - b))
                .collect();
            match wmon_pair(alg, &inst, agent, &half)? {
                Some(w) => {
                    witness = w;
                    after = half;
                }
                None => break,
            }
        }
        witness.probe = k;
        Ok(Some(witness))
    })?;
    Ok(found.into_iter().flatten().collect())
}

//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::graph::Graph;
use super::ufl::{Facility, UflInstance};
use super::vc::{Ownership, VcInstance};
use crate::error::{Error, Result};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph; each pair `(u, v)`, `u < v`, is an edge with probability `p`.
pub fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("generated pairs are distinct")
}

/// Greedily groups up to `r` pairwise nonadjacent nodes per agent, scanning a
/// random node order; a node with no compatible partner becomes a singleton agent.
pub fn group_ownership(g: &Graph, r: usize, rng: &mut impl Rng) -> Ownership {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    let mut taken = vec![false; g.n()];
    let mut agents = Vec::new();
    for k in 0..order.len() {
        let u = order[k];
        if taken[u] {
            continue;
        }
        taken[u] = true;
        let mut group = vec![u];
        for &w in &order[k + 1..] {
            if group.len() >= r {
                break;
            }
            if !taken[w] && group.iter().all(|&x| !g.has_edge(x, w)) {
                taken[w] = true;
                group.push(w);
            }
        }
        agents.push(group);
    }
    Ownership::new(g.n(), agents).expect("groups partition the nodes")
}

/// Random graph, grouped ownership of dimension at most `r`, and costs uniform on `[0, 1)`.
pub fn generate_random_vc_instance(
    n: usize,
    edge_prob: f64,
    r: usize,
    seed: u64,
) -> Result<VcInstance> {
    if n < 2 || r < 1 {
        return Err(Error::Precondition(format!(
            "random instances need n >= 2 and r >= 1 (got n = {n}, r = {r})"
        )));
    }
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::Precondition(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let g = random_graph(n, edge_prob, &mut rng);
    let own = group_ownership(&g, r, &mut rng);
    let costs = own
        .agents()
        .iter()
        .map(|nodes| nodes.iter().map(|_| rng.gen::<f64>()).collect())
        .collect();
    VcInstance::new(g, own, costs)
}

/// Lower-bound gadget on `2n` nodes: `u_i = i`, `v_i = n + i`, edges
/// `(u_i, v_j)` for `i != j`, agent `i` owning `{u_i, v_i}`.
pub fn generate_gadget(n: usize) -> Result<(Graph, Ownership)> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "gadget needs n >= 2 (got {n})"
        )));
    }
    let edges = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, n + j)));
    let g = Graph::new(2 * n, edges)?;
    let own = Ownership::new(2 * n, (0..n).map(|i| vec![i, n + i]).collect())?;
    Ok((g, own))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UflParams {
    pub facilities: usize,
    pub clients: usize,
    pub agents: usize,
    /// 1 places points on a line, 2 in the unit square.
    pub dims: usize,
    pub seed: u64,
}

/// Facilities and clients at random points; assignment cost is Euclidean
/// distance, opening cost uniform on `[0.1, 1)`, facility `l` owned by agent `l mod agents`.
pub fn generate_random_ufl(p: UflParams) -> Result<UflInstance> {
    if p.facilities < 2 || p.agents < 2 || p.agents > p.facilities || p.clients < 1 || p.dims < 1 {
        return Err(Error::Precondition(format!(
            "UFL generation needs clients >= 1 and 2 <= agents <= facilities (got {p:?})"
        )));
    }
    let mut rng = rng_from_seed(p.seed);
    let point =
        |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..p.dims).map(|_| rng.gen::<f64>()).collect() };
    let fpts: Vec<Vec<f64>> = (0..p.facilities).map(|_| point(&mut rng)).collect();
    let cpts: Vec<Vec<f64>> = (0..p.clients).map(|_| point(&mut rng)).collect();
    let facilities = (0..p.facilities)
        .map(|l| Facility {
            agent: l % p.agents,
            open_cost: rng.gen_range(0.1..1.0),
        })
        .collect();
    let assign = fpts
        .iter()
        .map(|a| {
            cpts.iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| (x - y) * (x - y))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect()
        })
        .collect();
    UflInstance::new(facilities, p.clients, assign)
}

/// Facilities and clients alternating on a ring of `2k` points with unit
/// spacing (ring distance as metric), opening costs uniform on `[1, 3)`,
/// facility `l` owned by agent `l mod agents`. Odd rings have fractional LP optima.
pub fn generate_ring_ufl(k: usize, agents: usize, seed: u64) -> Result<UflInstance> {
    if k < 2 || agents < 2 || agents > k {
        return Err(Error::Precondition(format!(
            "ring instances need k >= 2 and 2 <= agents <= k (got k = {k}, agents = {agents})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let ring = 2 * k;
    let dist = |a: usize, b: usize| {
        let d = a.abs_diff(b);
        d.min(ring - d) as f64
    };
    let facilities = (0..k)
        .map(|l| Facility {
            agent: l % agents,
            open_cost: rng.gen_range(1.0..3.0),
        })
        .collect();
    let assign = (0..k)
        .map(|l| (0..k).map(|j| dist(2 * l, 2 * j + 1)).collect())
        .collect();
    UflInstance::new(facilities, k, assign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::vc::validate_vc_instance;

    #[test]
    fn edgeless_grouping() {
        let inst = generate_random_vc_instance(6, 0.0, 2, 1).unwrap();
        assert_eq!(inst.graph().m(), 0);
        assert_eq!(inst.ownership().agent_count(), 3);
        assert!(inst.ownership().agents().iter().all(|a| a.len() == 2));
    }

    #[test]
    fn random_instances_validate_and_repeat() {
        let a = generate_random_vc_instance(10, 0.3, 2, 7).unwrap();
        assert!(validate_vc_instance(&a).is_ok());
        assert_eq!(a, generate_random_vc_instance(10, 0.3, 2, 7).unwrap());
        for seed in 0..50 {
            let inst = generate_random_vc_instance(12, 0.4, 3, seed).unwrap();
            assert!(validate_vc_instance(&inst).is_ok());
            assert!(inst.ownership().is_disjoint());
            assert!(inst.ownership().dimension() <= 3);
        }
    }

    #[test]
    fn complete_graph_falls_back_to_singletons() {
        let inst = generate_random_vc_instance(5, 1.0, 3, 2).unwrap();
        assert_eq!(inst.ownership().agent_count(), 5);
    }

    #[test]
    fn gadget_shape() {
        let (g, own) = generate_gadget(2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), &[(0, 3), (1, 2)]);
        for n in [3, 5, 8] {
            let (g, own) = generate_gadget(n).unwrap();
            assert_eq!(g.m(), n * (n - 1));
            assert!(own.agents().iter().all(|t| g.is_independent(t)));
        }
        assert!(own.agents().iter().all(|t| g.is_independent(t)));
    }

    #[test]
    fn ufl_generator_is_metric() {
        for dims in [1, 2] {
            let inst = generate_random_ufl(UflParams {
                facilities: 5,
                clients: 6,
                agents: 2,
                dims,
                seed: 1,
            })
            .unwrap();
            assert!(inst.metric_violations(1e-9).is_empty());
            assert_eq!(inst.agent_count(), 2);
        }
    }
}

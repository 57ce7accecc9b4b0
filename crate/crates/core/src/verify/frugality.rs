//! The payment benchmark over a min-cost cover and sampled frugality ratios.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{rng_from_seed, Graph, MechanismResult, VcInstance};
use crate::oracles::lp::{lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::oracles::vc::{enumerate_minimal_vertex_covers, min_vertex_cover_exact};
use crate::par::{self, item_seed, Exec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrugalityReport {
    pub nu: f64,
    /// The min-cost cover the benchmark is taken over.
    pub cover: Vec<usize>,
    /// Optimal `x_v` per node of `cover`.
    pub x: Vec<f64>,
    pub total_payment: Option<f64>,
    pub ratio: Option<f64>,
}

impl FrugalityReport {
    /// Attaches a mechanism's total payment and its ratio to the benchmark.
    pub fn with_payment(mut self, total: f64) -> Self {
        self.total_payment = Some(total);
        self.ratio = Some(if self.nu > 0.0 { total / self.nu } else { 0.0 });
        self
    }
}

/// `max Σ_{v∈S} x_v` s.t. `x_v ≥ c_v` on `S` and `Σ_{S\T} x ≤ c(T\S)` for every
/// cover `T`. Enlarging `T` shrinks the left side and grows the right side,
/// so only inclusion-minimal covers can bind.
pub fn frugality_nu(g: &Graph, costs: &[f64]) -> Result<FrugalityReport> {
    let (cover, _) = min_vertex_cover_exact(g, costs)?;
    let covers = enumerate_minimal_vertex_covers(g)?;
    let (nu, x) = nu_over(&cover, costs, &covers)?;
    Ok(FrugalityReport {
        nu,
        cover,
        x,
        total_payment: None,
        ratio: None,
    })
}

/// The benchmark for a given min-cost cover `s` against the given cover list.
pub fn nu_over(s: &[usize], costs: &[f64], covers: &[Vec<usize>]) -> Result<(f64, Vec<f64>)> {
    let n = costs.len();
    let mut in_s = vec![false; n];
    for &v in s {
        in_s[v] = true;
    }
    let mut p = LpProblem::new(Sense::Maximize, vec![1.0; s.len()]);
    for (k, &v) in s.iter().enumerate() {
        let mut row = vec![0.0; s.len()];
        row[k] = 1.0;
        p.constraint(row, Relation::Ge, costs[v]);
    }
    for t in covers {
        let mut in_t = vec![false; n];
        for &v in t {
            in_t[v] = true;
        }
        let row: Vec<f64> = s.iter().map(|&v| if in_t[v] { 0.0 } else { 1.0 }).collect();
        if row.iter().all(|&a| a == 0.0) {
            continue;
        }
        let rhs: f64 = t.iter().filter(|&&v| !in_s[v]).map(|&v| costs[v]).sum();
        p.constraint(row, Relation::Le, rhs);
    }
    let sol = lp_solve(&p);
    match sol.status {
        LpStatus::Optimal => Ok((sol.objective, sol.x)),
        other => Err(Error::Lp(format!(
            "frugality benchmark LP ended as {other:?}"
        ))),
    }
}

/// Every inclusion-minimal cover whose cost is within `1e-9` of the optimum.
pub fn min_cost_covers(g: &Graph, costs: &[f64]) -> Result<Vec<Vec<usize>>> {
    let (_, opt) = min_vertex_cover_exact(g, costs)?;
    let tol = 1e-9 * (1.0 + opt);
    Ok(enumerate_minimal_vertex_covers(g)?
        .into_iter()
        .filter(|t| t.iter().map(|&v| costs[v]).sum::<f64>() <= opt + tol)
        .collect())
}

/// Worst payment-to-benchmark ratio found; a lower bound on the mechanism's frugality ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrugalityEstimate {
    pub ratio: f64,
    pub costs: Vec<f64>,
    pub total_payment: f64,
    pub nu: f64,
    pub evaluations: usize,
}

fn payment_ratio<M>(mech: &M, g: &Graph, costs: &[f64]) -> Result<(f64, f64, f64)>
where
    M: Fn(&VcInstance) -> Result<MechanismResult> + ?Sized,
{
    let inst = VcInstance::singleton(g.clone(), costs)?;
    let paid = mech(&inst)?.total_payment();
    let nu = frugality_nu(g, costs)?.nu;
    Ok((if nu > 0.0 { paid / nu } else { 0.0 }, paid, nu))
}

/// Random cost vectors on `[0, 1)` for `trials` draws, then `climb` single-coordinate
/// multiplicative moves from the best draw, kept when they raise the ratio.
pub fn frugality_ratio_estimate<M>(
    mech: &M,
    g: &Graph,
    trials: usize,
    climb: usize,
    seed: u64,
    exec: Exec,
) -> Result<FrugalityEstimate>
where
    M: Fn(&VcInstance) -> Result<MechanismResult> + Sync + ?Sized,
{
    let n = g.n();
    let draws = par::try_map_indexed(exec, trials.max(1), |k| {
        let mut rng = rng_from_seed(item_seed(seed, k));
        let costs: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        payment_ratio(mech, g, &costs).map(|r| (r, costs))
    })?;
    let ((mut ratio, mut paid, mut nu), mut costs) = draws
        .into_iter()
        .reduce(|best, d| if d.0 .0 > best.0 .0 { d } else { best })
        .expect("at least one draw");
    let mut rng = rng_from_seed(seed ^ 0x5EED);
    for _ in 0..climb {
        let mut next = costs.clone();
        let k = rng.gen_range(0..n);
        next[k] = (next[k] * rng.gen_range(0.25..4.0)).clamp(1e-4, 1e4);
        let (r, p, v) = payment_ratio(mech, g, &next)?;
        if r > ratio {
            (ratio, paid, nu, costs) = (r, p, v, next);
        }
    }
    Ok(FrugalityEstimate {
        ratio,
        costs,
        total_payment: paid,
        nu,
        evaluations: trials.max(1) + climb,
    })
}

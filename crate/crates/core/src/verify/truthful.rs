//! Grid search for profitable misreports, individual rationality and
//! approximation ratios against the exact oracle.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{MechanismResult, UflInstance, VcInstance};
use crate::oracles::vc::min_vertex_cover_exact;
use crate::ufl::{run_ufl_mechanism, UflOptions};

/// Multiplicative misreport factors: 0 plus `size` geometric steps in `[1/8, 8]`.
pub fn misreport_grid(size: usize) -> Vec<f64> {
    let mut f = vec![0.0];
    if size == 1 {
        f.push(1.0);
    }
    if size >= 2 {
        let step = 64f64.ln() / (size - 1) as f64;
        f.extend((0..size).map(|k| (k as f64 * step).exp() / 8.0));
    }
    f
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TruthReport {
    /// Largest utility gain of a misreport over truth-telling (0 if none helps).
    pub max_gain: f64,
    pub agent: Option<usize>,
    pub report: Option<Vec<f64>>,
    pub misreports: usize,
}

impl TruthReport {
    fn new() -> Self {
        TruthReport {
            max_gain: 0.0,
            agent: None,
            report: None,
            misreports: 0,
        }
    }

    fn record(&mut self, agent: usize, report: Vec<f64>, gain: f64) {
        self.misreports += 1;
        if gain > self.max_gain {
            self.max_gain = gain;
            self.agent = Some(agent);
            self.report = Some(report);
        }
    }
}

/// Single-coordinate and whole-vector scalings of each agent's true costs.
fn misreports(truth: &[f64], factors: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for &f in factors {
        for k in 0..truth.len() {
            let mut r = truth.to_vec();
            r[k] *= f;
            out.push(r);
        }
        if truth.len() > 1 {
            out.push(truth.iter().map(|c| c * f).collect());
        }
    }
    out
}

pub fn truthfulness_check<M>(mech: &M, truth: &VcInstance, factors: &[f64]) -> Result<TruthReport>
where
    M: Fn(&VcInstance) -> Result<MechanismResult> + ?Sized,
{
    let honest = mech(truth)?;
    let mut report = TruthReport::new();
    for agent in 0..truth.ownership().agent_count() {
        let base = honest.utility(agent, truth);
        for lie in misreports(truth.agent_costs(agent), factors) {
            let out = mech(&truth.with_agent_costs(agent, lie.clone())?)?;
            report.record(agent, lie, out.utility(agent, truth) - base);
        }
    }
    Ok(report)
}

/// Same search for the facility-location mechanism, on exact expected utilities.
pub fn ufl_truthfulness_check(
    truth: &UflInstance,
    factors: &[f64],
    opts: UflOptions,
) -> Result<TruthReport> {
    let honest = run_ufl_mechanism(truth, 0, opts)?;
    let mut report = TruthReport::new();
    let open = truth.open_costs();
    for agent in 0..truth.agent_count() {
        let base = honest.expected_utility(agent, truth);
        let own = truth.agent_facilities(agent);
        let true_costs: Vec<f64> = own.iter().map(|&l| open[l]).collect();
        for lie in misreports(&true_costs, factors) {
            let mut reported = open.clone();
            for (&l, &c) in own.iter().zip(&lie) {
                reported[l] = c;
            }
            let out = run_ufl_mechanism(&truth.with_open_costs(&reported)?, 0, opts)?;
            report.record(agent, lie, out.expected_utility(agent, truth) - base);
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrViolation {
    pub agent: usize,
    pub node: usize,
    pub payment: f64,
    pub cost: f64,
}

/// Provisions paid less than the provider's true cost.
pub fn ir_violations(result: &MechanismResult, truth: &VcInstance) -> Vec<IrViolation> {
    result
        .provisions
        .iter()
        .filter_map(|p| {
            let agent = p.agent?;
            let cost = truth.cost(agent, p.node)?;
            (p.threshold < cost - 1e-9).then_some(IrViolation {
                agent,
                node: p.node,
                payment: p.threshold,
                cost,
            })
        })
        .collect()
}

/// Mechanism cost over the exact optimum; `None` beyond the oracle's size limit.
pub fn approximation_ratio(result: &MechanismResult, inst: &VcInstance) -> Result<Option<f64>> {
    let opt = match min_vertex_cover_exact(inst.graph(), &inst.node_costs()) {
        Ok((_, v)) => v,
        Err(Error::SizeLimit { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let cost = result.cost(inst);
    Ok(Some(if opt > 0.0 {
        cost / opt
    } else if cost > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }))
}

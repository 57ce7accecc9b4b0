//! The randomized facility-location mechanism: sample a column of the convex
//! decomposition and scale each agent's fractional VCG payment by its share.

use rand::Rng;
use serde::Serialize;

use super::decompose::{
    convex_decompose, convex_decompose_enumerated, ConvexDecomposition, DecompositionMethod,
};
use super::jms::{Jms, LmpAlgorithm};
use super::vcg::fractional_vcg_payments;
use crate::error::Result;
use crate::instance::{rng_from_seed, UflInstance, UflSolution};
use crate::oracles::ufl::solve_flp;
use crate::par::Exec;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct UflOptions {
    pub exec: Exec,
    /// Decompose over all facility subsets instead of generating columns.
    pub enumerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UflOutcome {
    pub probability: f64,
    pub solution: UflSolution,
    pub payments: Vec<f64>,
    /// Social cost under the reported opening costs.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UflMechanismResult {
    pub lp_value: f64,
    pub y_star: Vec<f64>,
    pub vcg_payments: Vec<f64>,
    pub method: DecompositionMethod,
    pub outcomes: Vec<UflOutcome>,
    /// Index into `outcomes` of the realization drawn with the seed.
    pub sampled: usize,
}

impl UflMechanismResult {
    pub fn expected_cost(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability * o.cost).sum()
    }

    pub fn expected_payment(&self, agent: usize) -> f64 {
        self.outcomes
            .iter()
            .map(|o| o.probability * o.payments[agent])
            .sum()
    }

    /// Expected payment minus expected true opening cost of the agent's open facilities.
    pub fn expected_utility(&self, agent: usize, truth: &UflInstance) -> f64 {
        let own = truth.agent_facilities(agent);
        self.outcomes
            .iter()
            .map(|o| {
                let spent: f64 = own
                    .iter()
                    .filter(|&&l| o.solution.open[l])
                    .map(|&l| truth.facilities()[l].open_cost)
                    .sum();
                o.probability * (o.payments[agent] - spent)
            })
            .sum()
    }

    pub fn sampled_outcome(&self) -> &UflOutcome {
        &self.outcomes[self.sampled]
    }
}

/// Agent `i` receives `p*_i · (Σ_{l∈T_i} f_l y_l) / (Σ_{l∈T_i} f_l y*_l)` in the
/// realized column, and nothing when the denominator is zero.
pub fn run_ufl_mechanism(
    inst: &UflInstance,
    seed: u64,
    opts: UflOptions,
) -> Result<UflMechanismResult> {
    run_ufl_mechanism_with(inst, seed, opts, &Jms)
}

pub fn run_ufl_mechanism_with(
    inst: &UflInstance,
    seed: u64,
    opts: UflOptions,
    alg: &dyn LmpAlgorithm,
) -> Result<UflMechanismResult> {
    let frac = solve_flp(inst)?;
    let vcg = fractional_vcg_payments(inst, &frac, opts.exec)?;
    let decomposition: ConvexDecomposition = if opts.enumerate {
        convex_decompose_enumerated(inst, &frac, alg.rho())?
    } else {
        convex_decompose(inst, &frac, alg)?
    };
    let f = inst.open_costs();
    let agents = inst.agent_count();
    let shares: Vec<Vec<usize>> = (0..agents).map(|i| inst.agent_facilities(i)).collect();
    let fractional_share: Vec<f64> = shares
        .iter()
        .map(|ls| ls.iter().map(|&l| f[l] * frac.y[l]).sum())
        .collect();
    let outcomes: Vec<UflOutcome> = decomposition
        .columns
        .iter()
        .map(|col| {
            let payments = (0..agents)
                .map(|i| {
                    if fractional_share[i] <= 0.0 {
                        return 0.0;
                    }
                    let realized: f64 = shares[i]
                        .iter()
                        .filter(|&&l| col.solution.open[l])
                        .map(|&l| f[l])
                        .sum();
                    realized * vcg[i] / fractional_share[i]
                })
                .collect();
            UflOutcome {
                probability: col.weight,
                cost: col.solution.facility_cost(&f) + col.connection_cost,
                solution: col.solution.clone(),
                payments,
            }
        })
        .collect();
    let draw: f64 = rng_from_seed(seed).gen();
    let mut acc = 0.0;
    let sampled = outcomes
        .iter()
        .position(|o| {
            acc += o.probability;
            draw < acc
        })
        .unwrap_or(outcomes.len() - 1);
    Ok(UflMechanismResult {
        lp_value: frac.value,
        y_star: frac.y,
        vcg_payments: vcg,
        method: decomposition.method,
        outcomes,
        sampled,
    })
}

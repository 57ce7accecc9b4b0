//! Writing the scaled-down LP optimum as a convex combination of integral
//! solutions, by column generation with an LMP algorithm as pricing oracle.

use serde::Serialize;

use super::jms::LmpAlgorithm;
use crate::error::{Error, Result};
use crate::instance::{UflInstance, UflSolution};
use crate::oracles::lp::{lp_solve, LpProblem, LpStatus, Relation, Sense};
use crate::oracles::ufl::FractionalSolution;

/// Largest facility count for the exhaustive column set.
pub const MAX_ENUMERATED_FACILITIES: usize = 12;
const MAX_ROUNDS: usize = 2000;
/// Price of violating a facility's marginal identity in the restricted master.
/// Any positive value works: at the optimum value 1 every violation is zero.
const PENALTY: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecompositionMethod {
    ColumnGeneration,
    Enumeration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedSolution {
    pub weight: f64,
    pub solution: UflSolution,
    pub connection_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexDecomposition {
    pub columns: Vec<WeightedSolution>,
    pub master_value: f64,
    pub rounds: usize,
    pub method: DecompositionMethod,
}

impl ConvexDecomposition {
    pub fn weight_sum(&self) -> f64 {
        self.columns.iter().map(|c| c.weight).sum()
    }

    /// `Σ_q λ_q y^q_l` per facility.
    pub fn marginals(&self, facilities: usize) -> Vec<f64> {
        let mut m = vec![0.0; facilities];
        for c in &self.columns {
            for (l, &o) in c.solution.open.iter().enumerate() {
                if o {
                    m[l] += c.weight;
                }
            }
        }
        m
    }

    pub fn expected_connection_cost(&self) -> f64 {
        self.columns
            .iter()
            .map(|c| c.weight * c.connection_cost)
            .sum()
    }
}

struct Column {
    solution: UflSolution,
    connection_cost: f64,
}

impl Column {
    fn new(solution: UflSolution, assign: &[Vec<f64>]) -> Self {
        let connection_cost = solution.connection_cost(assign);
        Column {
            solution,
            connection_cost,
        }
    }
}

struct Master {
    value: f64,
    lambda: Vec<f64>,
    alpha: Vec<f64>,
    beta: f64,
    z: f64,
}

/// `max Σλ − PENALTY·Σ|s_l|` subject to `Σ λ_q y^q_l + s_l = y*_l`,
/// `Σ λ_q C_q ≤ ρ C*` and `Σ λ ≤ 1`.
fn solve_master(columns: &[Column], y_star: &[f64], budget: f64) -> Result<Master> {
    let nf = y_star.len();
    let nq = columns.len();
    let nv = nq + 2 * nf;
    let mut obj = vec![1.0; nq];
    obj.resize(nv, -PENALTY);
    let mut p = LpProblem::new(Sense::Maximize, obj);
    for l in 0..nf {
        let mut row: Vec<f64> = columns
            .iter()
            .map(|c| if c.solution.open[l] { 1.0 } else { 0.0 })
            .collect();
        row.resize(nv, 0.0);
        row[nq + 2 * l] = 1.0;
        row[nq + 2 * l + 1] = -1.0;
        p.constraint(row, Relation::Eq, y_star[l]);
    }
    let mut row: Vec<f64> = columns.iter().map(|c| c.connection_cost).collect();
    row.resize(nv, 0.0);
    p.constraint(row, Relation::Le, budget);
    let mut row = vec![1.0; nq];
    row.resize(nv, 0.0);
    p.constraint(row, Relation::Le, 1.0);
    let sol = lp_solve(&p);
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!(
            "restricted master ended as {:?}",
            sol.status
        )));
    }
    Ok(Master {
        value: sol.objective,
        lambda: sol.x[..nq].to_vec(),
        alpha: sol.duals[..nf].to_vec(),
        beta: sol.duals[nf],
        z: sol.duals[nf + 1],
    })
}

fn is_integral(y: &[f64]) -> bool {
    y.iter()
        .all(|&v| v.abs() <= 1e-9 || (v - 1.0).abs() <= 1e-9)
}

fn no_clients(nf: usize) -> ConvexDecomposition {
    ConvexDecomposition {
        columns: vec![WeightedSolution {
            weight: 1.0,
            solution: UflSolution {
                open: vec![false; nf],
                assign: Vec::new(),
            },
            connection_cost: 0.0,
        }],
        master_value: 1.0,
        rounds: 0,
        method: DecompositionMethod::ColumnGeneration,
    }
}

fn finish(
    columns: Vec<Column>,
    master: Master,
    rounds: usize,
    method: DecompositionMethod,
) -> ConvexDecomposition {
    let total: f64 = master.lambda.iter().filter(|&&w| w > 1e-12).sum();
    let columns = columns
        .into_iter()
        .zip(&master.lambda)
        .filter(|(_, &w)| w > 1e-12)
        .map(|(c, &w)| WeightedSolution {
            weight: w / total,
            solution: c.solution,
            connection_cost: c.connection_cost,
        })
        .collect();
    ConvexDecomposition {
        columns,
        master_value: master.value,
        rounds,
        method,
    }
}

/// Column generation: each round prices the master's duals `(α, β, z)` by
/// running `alg` on opening costs `α⁺/ρ` and connection costs `β·c`, then
/// opens every facility with `α_l ≤ 0`. The LMP inequality guarantees the
/// resulting column violates `Σ_l y_l α_l + C β + z ≥ 1` while the master is below 1.
pub fn convex_decompose(
    inst: &UflInstance,
    frac: &FractionalSolution,
    alg: &dyn LmpAlgorithm,
) -> Result<ConvexDecomposition> {
    let nf = inst.facility_count();
    if inst.clients() == 0 {
        return Ok(no_clients(nf));
    }
    let assign = inst.assign_costs();
    let rho = alg.rho();
    let budget = rho * frac.connection_cost(assign);
    let mut columns = Vec::new();
    if is_integral(&frac.y) {
        let open = frac.y.iter().map(|&v| v > 0.5).collect();
        columns.push(Column::new(
            UflSolution::nearest(open, assign).expect("LP opens a facility"),
            assign,
        ));
    } else {
        columns.push(Column::new(alg.solve(&inst.open_costs(), assign)?, assign));
    }
    for round in 0..MAX_ROUNDS {
        let master = solve_master(&columns, &frac.y, budget)?;
        if master.value >= 1.0 - 1e-7 {
            return Ok(finish(
                columns,
                master,
                round,
                DecompositionMethod::ColumnGeneration,
            ));
        }
        let open_costs: Vec<f64> = master.alpha.iter().map(|a| a.max(0.0) / rho).collect();
        let scaled: Vec<Vec<f64>> = assign
            .iter()
            .map(|r| r.iter().map(|c| master.beta * c).collect())
            .collect();
        let mut sol = alg.solve(&open_costs, &scaled)?;
        for (l, &a) in master.alpha.iter().enumerate() {
            if a <= 0.0 {
                sol.open[l] = true;
            }
        }
        let col = Column::new(sol, assign);
        let lhs: f64 = col
            .solution
            .open
            .iter()
            .zip(&master.alpha)
            .filter(|(o, _)| **o)
            .map(|(_, a)| a)
            .sum::<f64>()
            + col.connection_cost * master.beta
            + master.z;
        let known = columns.iter().any(|c| c.solution == col.solution);
        if lhs >= 1.0 - 1e-9 || known {
            if master.value >= 1.0 - 1e-6 {
                return Ok(finish(
                    columns,
                    master,
                    round,
                    DecompositionMethod::ColumnGeneration,
                ));
            }
            return Err(Error::LmpViolation {
                master_value: master.value,
                alpha: master.alpha,
                beta: master.beta,
                z: master.z,
            });
        }
        columns.push(col);
    }
    Err(Error::Lp(format!(
        "column generation did not converge in {MAX_ROUNDS} rounds"
    )))
}

/// The same master over every nonempty facility subset with nearest assignment.
pub fn convex_decompose_enumerated(
    inst: &UflInstance,
    frac: &FractionalSolution,
    rho: f64,
) -> Result<ConvexDecomposition> {
    let nf = inst.facility_count();
    if nf > MAX_ENUMERATED_FACILITIES {
        return Err(Error::SizeLimit {
            what: "enumerated convex decomposition",
            limit: MAX_ENUMERATED_FACILITIES,
            actual: nf,
        });
    }
    if inst.clients() == 0 {
        let mut d = no_clients(nf);
        d.method = DecompositionMethod::Enumeration;
        return Ok(d);
    }
    let assign = inst.assign_costs();
    let columns: Vec<Column> = (1u32..1 << nf)
        .map(|mask| {
            let open = (0..nf).map(|l| mask >> l & 1 == 1).collect();
            Column::new(
                UflSolution::nearest(open, assign).expect("mask is nonempty"),
                assign,
            )
        })
        .collect();
    let master = solve_master(&columns, &frac.y, rho * frac.connection_cost(assign))?;
    if master.value < 1.0 - 1e-6 {
        return Err(Error::LmpViolation {
            master_value: master.value,
            alpha: master.alpha,
            beta: master.beta,
            z: master.z,
        });
    }
    Ok(finish(columns, master, 0, DecompositionMethod::Enumeration))
}

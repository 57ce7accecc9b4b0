//! Facility-location ground truth: the LP relaxation, exhaustive search and
//! the LMP inequality.

use super::lp::{lp_solve, LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::error::{Error, Result};
use crate::instance::{UflInstance, UflSolution};

pub const MAX_EXACT_FACILITIES: usize = 16;

/// Optimal solution of the facility-location LP relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution {
    pub y: Vec<f64>,
    /// `x[l][j]`: fraction of client `j` served by facility `l`.
    pub x: Vec<Vec<f64>>,
    pub value: f64,
    pub lp: LpSolution,
}

impl FractionalSolution {
    pub fn facility_cost(&self, open_costs: &[f64]) -> f64 {
        self.y.iter().zip(open_costs).map(|(y, f)| y * f).sum()
    }

    pub fn connection_cost(&self, assign: &[Vec<f64>]) -> f64 {
        self.x
            .iter()
            .zip(assign)
            .map(|(xs, cs)| xs.iter().zip(cs).map(|(x, c)| x * c).sum::<f64>())
            .sum()
    }
}

/// Builds the relaxation with variables `y_l` followed by `x_lj` at `F + l*D + j`.
/// Facilities flagged in `closed` are pinned to zero.
pub fn flp_problem(open_costs: &[f64], assign: &[Vec<f64>], closed: &[bool]) -> LpProblem {
    let nf = open_costs.len();
    let nd = assign.first().map_or(0, Vec::len);
    let nv = nf + nf * nd;
    let xv = |l: usize, j: usize| nf + l * nd + j;
    let mut obj = open_costs.to_vec();
    obj.resize(nv, 0.0);
    for l in 0..nf {
        for j in 0..nd {
            obj[xv(l, j)] = assign[l][j];
        }
    }
    let mut p = LpProblem::new(Sense::Minimize, obj);
    for j in 0..nd {
        let mut row = vec![0.0; nv];
        for l in 0..nf {
            row[xv(l, j)] = 1.0;
        }
        p.constraint(row, Relation::Ge, 1.0);
    }
    for l in 0..nf {
        for j in 0..nd {
            let mut row = vec![0.0; nv];
            row[xv(l, j)] = 1.0;
            row[l] = -1.0;
            p.constraint(row, Relation::Le, 0.0);
        }
        p.set_upper(l, if closed[l] { 0.0 } else { 1.0 });
    }
    p
}

pub fn solve_flp_costs(
    open_costs: &[f64],
    assign: &[Vec<f64>],
    closed: &[bool],
) -> Result<FractionalSolution> {
    let nf = open_costs.len();
    let nd = assign.first().map_or(0, Vec::len);
    let lp = lp_solve(&flp_problem(open_costs, assign, closed));
    match lp.status {
        LpStatus::Optimal => {}
        LpStatus::Infeasible => return Err(Error::Lp("infeasible".into())),
        LpStatus::Unbounded => return Err(Error::Lp("unbounded".into())),
        LpStatus::IterationLimit => return Err(Error::Lp("stopped at the iteration limit".into())),
    }
    let y = lp.x[..nf].to_vec();
    let x = (0..nf)
        .map(|l| lp.x[nf + l * nd..nf + (l + 1) * nd].to_vec())
        .collect();
    Ok(FractionalSolution {
        y,
        x,
        value: lp.objective,
        lp,
    })
}

pub fn solve_flp(inst: &UflInstance) -> Result<FractionalSolution> {
    solve_flp_costs(
        &inst.open_costs(),
        inst.assign_costs(),
        &vec![false; inst.facility_count()],
    )
}

/// Cheapest integral solution over all nonempty facility subsets with
/// nearest-open assignment. Ties keep the subset with the smallest bitmask.
pub fn ufl_exact(inst: &UflInstance) -> Result<(UflSolution, f64)> {
    ufl_exact_costs(&inst.open_costs(), inst.assign_costs())
}

pub fn ufl_exact_costs(open_costs: &[f64], assign: &[Vec<f64>]) -> Result<(UflSolution, f64)> {
    let nf = open_costs.len();
    if nf > MAX_EXACT_FACILITIES {
        return Err(Error::SizeLimit {
            what: "exact facility location",
            limit: MAX_EXACT_FACILITIES,
            actual: nf,
        });
    }
    if nf == 0 {
        return Err(Error::InvalidInstance("no facilities".into()));
    }
    let mut best: Option<(UflSolution, f64)> = None;
    for mask in 1u32..(1 << nf) {
        let open: Vec<bool> = (0..nf).map(|l| mask & (1 << l) != 0).collect();
        let sol = UflSolution::nearest(open, assign).expect("mask is nonempty");
        let cost = sol.facility_cost(open_costs) + sol.connection_cost(assign);
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((sol, cost));
        }
    }
    Ok(best.expect("at least one subset"))
}

/// Checks `rho * facility cost + connection cost <= rho * LP optimum` within `1e-7`.
pub fn lmp_certificate(inst: &UflInstance, sol: &UflSolution, rho: f64) -> Result<bool> {
    let opt = solve_flp(inst)?.value;
    Ok(lmp_holds(
        sol.facility_cost(&inst.open_costs()),
        sol.connection_cost(inst.assign_costs()),
        opt,
        rho,
    ))
}

pub fn lmp_holds(facility_cost: f64, connection_cost: f64, lp_opt: f64, rho: f64) -> bool {
    rho * facility_cost + connection_cost <= rho * lp_opt + 1e-7 * (1.0 + rho * lp_opt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Facility;

    fn inst(open: &[f64], assign: Vec<Vec<f64>>) -> UflInstance {
        let facilities = open
            .iter()
            .enumerate()
            .map(|(l, &f)| Facility {
                agent: l,
                open_cost: f,
            })
            .collect();
        let clients = assign[0].len();
        UflInstance::new(facilities, clients, assign).unwrap()
    }

    #[test]
    fn single_facility_lp() {
        let i = inst(&[3.0], vec![vec![1.0, 1.0]]);
        let s = solve_flp(&i).unwrap();
        assert_eq!(s.y, vec![1.0]);
        assert_eq!(s.value, 5.0);
        assert!(s.lp.duality_gap() <= 1e-7);
        assert_eq!(ufl_exact(&i).unwrap().1, 5.0);
    }

    #[test]
    fn cheap_facility_wins() {
        let i = inst(&[1.0, 2.0], vec![vec![0.0], vec![0.0]]);
        let s = solve_flp(&i).unwrap();
        assert_eq!(s.y, vec![1.0, 0.0]);
        assert_eq!(s.value, 1.0);
        let (sol, cost) = ufl_exact(&i).unwrap();
        assert_eq!(sol.open, vec![true, false]);
        assert_eq!(cost, 1.0);
    }

    #[test]
    fn far_apart_clients_open_both() {
        let i = inst(&[5.0, 5.0], vec![vec![0.0, 10.0], vec![10.0, 0.0]]);
        let (sol, cost) = ufl_exact(&i).unwrap();
        assert_eq!(sol.open, vec![true, true]);
        assert_eq!(cost, 10.0);
    }

    #[test]
    fn zero_open_costs_serve_nearest() {
        let i = inst(&[0.0, 0.0], vec![vec![1.0, 4.0], vec![3.0, 2.0]]);
        assert_eq!(solve_flp(&i).unwrap().value, 3.0);
    }

    #[test]
    fn lmp_examples() {
        let i = inst(&[3.0], vec![vec![1.0, 1.0]]);
        let open = UflSolution::nearest(vec![true], i.assign_costs()).unwrap();
        assert!(lmp_certificate(&i, &open, 2.0).unwrap());
        assert!(lmp_certificate(&i, &open, 1.0).unwrap());
        let j = inst(&[3.0, 100.0], vec![vec![1.0, 1.0], vec![2.0, 2.0]]);
        let wasteful = UflSolution::nearest(vec![true, true], j.assign_costs()).unwrap();
        assert!(!lmp_certificate(&j, &wasteful, 2.0).unwrap());
    }

    #[test]
    fn closed_facilities_are_pinned() {
        let s = solve_flp_costs(&[1.0, 2.0], &[vec![0.0], vec![0.0]], &[true, false]).unwrap();
        assert_eq!(s.y, vec![0.0, 1.0]);
        assert!(solve_flp_costs(&[1.0], &[vec![0.0]], &[true]).is_err());
    }
}

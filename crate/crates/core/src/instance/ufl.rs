use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Facility {
    pub agent: usize,
    pub open_cost: f64,
}

/// Metric uncapacitated facility location instance. `assign[l][j]` is the
/// cost of serving client `j` from facility `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct UflInstance {
    facilities: Vec<Facility>,
    clients: usize,
    assign: Vec<Vec<f64>>,
}

impl UflInstance {
    pub fn new(facilities: Vec<Facility>, clients: usize, assign: Vec<Vec<f64>>) -> Result<Self> {
        if facilities.is_empty() {
            return Err(Error::InvalidInstance("no facilities".into()));
        }
        if assign.len() != facilities.len() {
            return Err(Error::InvalidInstance(format!(
                "{} assignment rows for {} facilities",
                assign.len(),
                facilities.len()
            )));
        }
        for (l, row) in assign.iter().enumerate() {
            if row.len() != clients {
                return Err(Error::InvalidInstance(format!(
                    "facility {l} has {} assignment costs for {clients} clients",
                    row.len()
                )));
            }
            if row.iter().any(|c| !c.is_finite() || *c < 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "facility {l}: assignment costs must be finite and nonnegative"
                )));
            }
        }
        if let Some(f) = facilities
            .iter()
            .find(|f| !f.open_cost.is_finite() || f.open_cost < 0.0)
        {
            return Err(Error::InvalidInstance(format!(
                "opening cost {} must be finite and nonnegative",
                f.open_cost
            )));
        }
        Ok(UflInstance {
            facilities,
            clients,
            assign,
        })
    }

    pub fn facilities(&self) -> &[Facility] {
        &self.facilities
    }

    pub fn facility_count(&self) -> usize {
        self.facilities.len()
    }

    pub fn clients(&self) -> usize {
        self.clients
    }

    pub fn assign_costs(&self) -> &[Vec<f64>] {
        &self.assign
    }

    pub fn assign_cost(&self, facility: usize, client: usize) -> f64 {
        self.assign[facility][client]
    }

    pub fn open_costs(&self) -> Vec<f64> {
        self.facilities.iter().map(|f| f.open_cost).collect()
    }

    pub fn agent_count(&self) -> usize {
        self.facilities
            .iter()
            .map(|f| f.agent + 1)
            .max()
            .unwrap_or(0)
    }

    pub fn agent_facilities(&self, agent: usize) -> Vec<usize> {
        (0..self.facilities.len())
            .filter(|&l| self.facilities[l].agent == agent)
            .collect()
    }

    /// Same instance with the given opening costs (a misreport or a rescaling).
    pub fn with_open_costs(&self, open: &[f64]) -> Result<Self> {
        let facilities = self
            .facilities
            .iter()
            .zip(open)
            .map(|(f, &c)| Facility {
                agent: f.agent,
                open_cost: c,
            })
            .collect();
        Self::new(facilities, self.clients, self.assign.clone())
    }

    /// Violations of `c(l,j) ≤ c(l,j') + c(l',j') + c(l',j)`, capped at 10 messages.
    pub fn metric_violations(&self, tol: f64) -> Vec<String> {
        let mut out = Vec::new();
        let nf = self.facilities.len();
        for l in 0..nf {
            for j in 0..self.clients {
                for l2 in 0..nf {
                    for j2 in 0..self.clients {
                        let detour = self.assign[l][j2] + self.assign[l2][j2] + self.assign[l2][j];
                        if self.assign[l][j] > detour + tol {
                            out.push(format!(
                                "c({l},{j}) = {} exceeds the path through client {j2} and facility {l2} ({detour})",
                                self.assign[l][j]
                            ));
                            if out.len() >= 10 {
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// An integral UFL solution: open facilities plus a client assignment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UflSolution {
    pub open: Vec<bool>,
    pub assign: Vec<usize>,
}

impl UflSolution {
    pub fn is_feasible(&self, inst: &UflInstance) -> bool {
        self.open.len() == inst.facility_count()
            && self.assign.len() == inst.clients()
            && self
                .assign
                .iter()
                .all(|&l| l < self.open.len() && self.open[l])
    }

    pub fn facility_cost(&self, open_costs: &[f64]) -> f64 {
        self.open
            .iter()
            .zip(open_costs)
            .filter(|(o, _)| **o)
            .map(|(_, f)| *f)
            .sum()
    }

    pub fn connection_cost(&self, assign: &[Vec<f64>]) -> f64 {
        self.assign
            .iter()
            .enumerate()
            .map(|(j, &l)| assign[l][j])
            .sum()
    }

    pub fn cost(&self, inst: &UflInstance) -> f64 {
        self.facility_cost(&inst.open_costs()) + self.connection_cost(inst.assign_costs())
    }

    /// Opens `open` and sends each client to its nearest open facility
    /// (lowest index on ties). Returns `None` when nothing is open.
    pub fn nearest(open: Vec<bool>, assign: &[Vec<f64>]) -> Option<Self> {
        let clients = assign.first().map_or(0, Vec::len);
        let mut a = Vec::with_capacity(clients);
        for j in 0..clients {
            let best = (0..open.len())
                .filter(|&l| open[l])
                .min_by(|&x, &y| assign[x][j].total_cmp(&assign[y][j]).then(x.cmp(&y)))?;
            a.push(best);
        }
        if !open.iter().any(|&o| o) {
            return None;
        }
        Some(UflSolution { open, assign: a })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(points_f: &[f64], points_c: &[f64], costs: &[f64], agents: &[usize]) -> UflInstance {
        let fac = costs
            .iter()
            .zip(agents)
            .map(|(&c, &a)| Facility {
                agent: a,
                open_cost: c,
            })
            .collect();
        let assign = points_f
            .iter()
            .map(|p| points_c.iter().map(|q| (p - q).abs()).collect())
            .collect();
        UflInstance::new(fac, points_c.len(), assign).unwrap()
    }

    #[test]
    fn line_metric_is_metric() {
        let inst = line(&[0.0, 3.0], &[1.0, 2.5, 7.0], &[1.0, 2.0], &[0, 1]);
        assert!(inst.metric_violations(1e-9).is_empty());
        assert_eq!(inst.agent_count(), 2);
        assert_eq!(inst.agent_facilities(1), vec![1]);
    }

    #[test]
    fn detects_non_metric() {
        let inst = UflInstance::new(
            vec![
                Facility {
                    agent: 0,
                    open_cost: 1.0,
                },
                Facility {
                    agent: 1,
                    open_cost: 1.0,
                },
            ],
            2,
            vec![vec![0.0, 100.0], vec![0.0, 0.0]],
        )
        .unwrap();
        assert!(!inst.metric_violations(1e-9).is_empty());
    }

    #[test]
    fn nearest_assignment() {
        let inst = line(&[0.0, 3.0], &[1.0, 2.5], &[1.0, 2.0], &[0, 1]);
        let s = UflSolution::nearest(vec![true, true], inst.assign_costs()).unwrap();
        assert_eq!(s.assign, vec![0, 1]);
        assert!(s.is_feasible(&inst));
        assert!((s.cost(&inst) - 4.5).abs() < 1e-12);
        assert!(UflSolution::nearest(vec![false, false], inst.assign_costs()).is_none());
    }
}

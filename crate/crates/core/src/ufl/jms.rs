//! Dual-ascent greedy facility location with client resale offers.

use crate::error::Result;
use crate::instance::UflSolution;

/// An algorithm returning integral solutions with
/// `rho · facility cost + connection cost ≤ rho · LP optimum`.
pub trait LmpAlgorithm: Send + Sync {
    fn rho(&self) -> f64;
    fn solve(&self, open_costs: &[f64], assign: &[Vec<f64>]) -> Result<UflSolution>;
}

/// Client budgets rise together; an unopened facility opens once the offers it
/// receives cover its cost. Unconnected clients offer `(t − c_lj)⁺`, connected
/// clients offer the saving `(c_σ(j)j − c_lj)⁺` of switching. LMP with `rho = 2`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Jms;

impl LmpAlgorithm for Jms {
    fn rho(&self) -> f64 {
        2.0
    }

    fn solve(&self, open_costs: &[f64], assign: &[Vec<f64>]) -> Result<UflSolution> {
        Ok(jms_lmp_costs(open_costs, assign))
    }
}

pub fn jms_lmp(inst: &crate::instance::UflInstance) -> UflSolution {
    jms_lmp_costs(&inst.open_costs(), inst.assign_costs())
}

pub fn jms_lmp_costs(open_costs: &[f64], assign: &[Vec<f64>]) -> UflSolution {
    jms_lmp_traced(open_costs, assign).solution
}

/// The dual-ascent run with its event times.
#[derive(Debug, Clone, PartialEq)]
pub struct JmsTrace {
    pub solution: UflSolution,
    /// Time each facility opened, `None` if it stayed closed.
    pub opened_at: Vec<Option<f64>>,
    /// Budget of each client when it first connected.
    pub budgets: Vec<f64>,
}

pub fn jms_lmp_traced(open_costs: &[f64], assign: &[Vec<f64>]) -> JmsTrace {
    let nf = open_costs.len();
    let nd = assign.first().map_or(0, Vec::len);
    let mut open = vec![false; nf];
    let mut sigma: Vec<Option<usize>> = vec![None; nd];
    let mut opened_at = vec![None; nf];
    let mut budgets = vec![0.0; nd];
    let mut t = 0.0f64;
    while sigma.iter().any(Option::is_none) {
        // Clients reaching an open facility connect first, nearest and lowest index.
        let mut connected_any = false;
        for j in 0..nd {
            if sigma[j].is_none() {
                let best = (0..nf)
                    .filter(|&l| open[l] && assign[l][j] <= t)
                    .min_by(|&a, &b| assign[a][j].total_cmp(&assign[b][j]).then(a.cmp(&b)));
                if best.is_some() {
                    sigma[j] = best;
                    budgets[j] = t;
                    connected_any = true;
                }
            }
        }
        if connected_any {
            continue;
        }
        if let Some(l) =
            (0..nf).find(|&l| !open[l] && opening_time(l, t, open_costs, assign, &sigma) <= t)
        {
            open[l] = true;
            opened_at[l] = Some(t);
            for j in 0..nd {
                match sigma[j] {
                    None if assign[l][j] <= t => {
                        sigma[j] = Some(l);
                        budgets[j] = t;
                    }
                    Some(s) if assign[l][j] < assign[s][j] => sigma[j] = Some(l),
                    _ => {}
                }
            }
            continue;
        }
        let next_connect = (0..nd)
            .filter(|&j| sigma[j].is_none())
            .flat_map(|j| (0..nf).filter(|&l| open[l]).map(move |l| assign[l][j]))
            .fold(f64::INFINITY, f64::min);
        let next_open = (0..nf)
            .filter(|&l| !open[l])
            .map(|l| opening_time(l, t, open_costs, assign, &sigma))
            .fold(f64::INFINITY, f64::min);
        let next = next_connect.min(next_open);
        debug_assert!(
            next.is_finite() && next > t,
            "dual ascent must make progress"
        );
        if !next.is_finite() {
            break;
        }
        t = next;
    }
    JmsTrace {
        solution: UflSolution {
            open,
            assign: sigma
                .into_iter()
                .map(|s| s.expect("all clients connected"))
                .collect(),
        },
        opened_at,
        budgets,
    }
}

/// Earliest time `≥ now` at which facility `l` is fully paid and some client
/// would connect or switch to it (so free facilities open only when useful).
fn opening_time(
    l: usize,
    now: f64,
    f: &[f64],
    assign: &[Vec<f64>],
    sigma: &[Option<usize>],
) -> f64 {
    let row = &assign[l];
    let resale: f64 = sigma
        .iter()
        .enumerate()
        .filter_map(|(j, s)| s.map(|s| (assign[s][j] - row[j]).max(0.0)))
        .sum();
    let mut waiting: Vec<f64> = sigma
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(j, _)| row[j])
        .collect();
    waiting.sort_by(f64::total_cmp);
    let switching = resale > 0.0;
    let offer = |t: f64| resale + waiting.iter().map(|&d| (t - d).max(0.0)).sum::<f64>();
    let useful_from = if switching {
        now
    } else {
        waiting.first().map_or(f64::INFINITY, |&d| d.max(now))
    };
    if offer(now) >= f[l] {
        return useful_from;
    }
    // Walk the breakpoints of the piecewise-linear offer.
    let mut active_sum = 0.0;
    for (k, &d) in waiting.iter().enumerate() {
        active_sum += d;
        let start = d.max(now);
        let end = waiting.get(k + 1).copied().unwrap_or(f64::INFINITY);
        if end < now {
            continue;
        }
        let active = (k + 1) as f64;
        let hit = (f[l] - resale + active_sum) / active;
        if hit <= end {
            return hit.max(start).max(useful_from);
        }
    }
    f64::INFINITY
}

use super::family::ScalingVector;
use crate::instance::Graph;

pub const POWER_ITERATION_CAP: usize = 100_000;

/// Perron vector of the adjacency matrix, computed per connected component by
/// power iteration on `A + I` from the all-ones vector. Each component is
/// scaled to max entry 1; isolated nodes get 1. Also returns the largest
/// adjacency eigenvalue over all components.
pub fn perron_vector(g: &Graph, tol: f64) -> (ScalingVector, f64) {
    let n = g.n();
    let mut x = vec![1.0; n];
    let mut lambda_max: f64 = 0.0;
    for comp in g.components() {
        if comp.len() == 1 {
            continue;
        }
        let local = g.induced(&comp);
        let (v, lambda) = power_iteration(&local, tol);
        lambda_max = lambda_max.max(lambda);
        for (k, &u) in comp.iter().enumerate() {
            x[u] = v[k];
        }
    }
    (
        ScalingVector::new(x).expect("Perron vectors are positive"),
        lambda_max,
    )
}

fn power_iteration(g: &Graph, tol: f64) -> (Vec<f64>, f64) {
    let n = g.n();
    let mut v = vec![1.0; n];
    let mut rayleigh = f64::NAN;
    for _ in 0..POWER_ITERATION_CAP {
        let w: Vec<f64> = (0..n)
            .map(|u| v[u] + g.neighbors(u).iter().map(|&k| v[k]).sum::<f64>())
            .collect();
        let vv: f64 = v.iter().map(|a| a * a).sum();
        let q = v.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / vv - 1.0;
        let top = w.iter().cloned().fold(0.0, f64::max);
        let next: Vec<f64> = w.iter().map(|a| a / top).collect();
        let change = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let settled = (q - rayleigh).abs() <= tol && change <= tol;
        v = next;
        rayleigh = q;
        if settled {
            break;
        }
    }
    (v, rayleigh)
}

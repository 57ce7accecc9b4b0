use crate::error::{Error, Result};
use crate::instance::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum ThresholdKind {
    General,
    /// `t_u` reads only the costs of `N(u)`.
    Neighbor,
    /// `t_u` is the max over incident edges of a function of one neighbor cost.
    Edge,
}

/// Per-node thresholds as functions of the reported node costs.
///
/// `threshold(u, costs)` must not depend on the costs of nodes owned by the
/// agent that owns `u`; the runner verifies this by re-evaluating with those
/// costs zeroed.
pub trait ThresholdFamily: Send + Sync {
    fn kind(&self) -> ThresholdKind;

    fn threshold(&self, u: usize, costs: &[f64]) -> f64;

    /// Families defined by an explicit selection rule report it here so the
    /// runner can cross-check the thresholds against it.
    fn literal_selection(&self, _costs: &[f64]) -> Option<Vec<bool>> {
        None
    }

    /// Absolute cost distance from a threshold within which the literal rule
    /// and the thresholds may disagree (thresholds found numerically).
    fn literal_tolerance(&self, _costs: &[f64]) -> f64 {
        0.0
    }
}

/// Strictly positive, finite per-node weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingVector(Vec<f64>);

impl ScalingVector {
    pub fn new(x: Vec<f64>) -> Result<Self> {
        if let Some(u) = x.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::Precondition(format!(
                "scaling entry {u} is {}; entries must be positive and finite",
                x[u]
            )));
        }
        Ok(ScalingVector(x))
    }

    pub fn ones(n: usize) -> Self {
        ScalingVector(vec![1.0; n])
    }

    /// Node degrees, with isolated nodes weighted 1.
    pub fn degrees(g: &Graph) -> Self {
        ScalingVector((0..g.n()).map(|u| g.degree(u).max(1) as f64).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum_over(&self, nodes: &[usize]) -> f64 {
        nodes.iter().map(|&v| self.0[v]).sum()
    }
}

/// Linear term `mul * (c_v / div)`. Keeping the factors apart makes
/// `x_u * (x_v / x_v)` evaluate to exactly `x_u`, which the tie cases rely on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearTerm {
    pub neighbor: usize,
    pub mul: f64,
    pub div: f64,
}

impl LinearTerm {
    pub fn new(neighbor: usize, mul: f64, div: f64) -> Self {
        LinearTerm { neighbor, mul, div }
    }

    fn eval(&self, costs: &[f64]) -> f64 {
        self.mul * (costs[self.neighbor] / self.div)
    }
}

/// `t_u = max_{v in N(u)} a_uv * c_v`; nodes without neighbors get 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEdgeThresholds {
    terms: Vec<Vec<LinearTerm>>,
}

impl LinearEdgeThresholds {
    pub fn new(terms: Vec<Vec<LinearTerm>>) -> Self {
        LinearEdgeThresholds { terms }
    }

    /// Coefficient `a_uv`, if the edge is present.
    pub fn coefficient(&self, u: usize, v: usize) -> Option<f64> {
        self.terms[u]
            .iter()
            .find(|t| t.neighbor == v)
            .map(|t| t.mul / t.div)
    }

    pub fn terms(&self) -> &[Vec<LinearTerm>] {
        &self.terms
    }
}

impl ThresholdFamily for LinearEdgeThresholds {
    fn kind(&self) -> ThresholdKind {
        ThresholdKind::Edge
    }

    fn threshold(&self, u: usize, costs: &[f64]) -> f64 {
        self.terms[u]
            .iter()
            .map(|t| t.eval(costs))
            .fold(0.0, f64::max)
    }
}

/// `t_u = sum_{v in N(u)} a_uv * c_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearNeighborThresholds {
    terms: Vec<Vec<LinearTerm>>,
}

impl LinearNeighborThresholds {
    pub fn new(terms: Vec<Vec<LinearTerm>>) -> Self {
        LinearNeighborThresholds { terms }
    }
}

impl ThresholdFamily for LinearNeighborThresholds {
    fn kind(&self) -> ThresholdKind {
        ThresholdKind::Neighbor
    }

    fn threshold(&self, u: usize, costs: &[f64]) -> f64 {
        self.terms[u].iter().map(|t| t.eval(costs)).sum()
    }
}

/// A threshold family given by a closure.
pub struct FnThresholds<F> {
    kind: ThresholdKind,
    f: F,
}

impl<F> FnThresholds<F>
where
    F: Fn(usize, &[f64]) -> f64 + Send + Sync,
{
    pub fn new(kind: ThresholdKind, f: F) -> Self {
        FnThresholds { kind, f }
    }
}

impl<F> ThresholdFamily for FnThresholds<F>
where
    F: Fn(usize, &[f64]) -> f64 + Send + Sync,
{
    fn kind(&self) -> ThresholdKind {
        self.kind
    }

    fn threshold(&self, u: usize, costs: &[f64]) -> f64 {
        (self.f)(u, costs)
    }
}

/// `a_uv = x_u / x_v` on every edge, in both directions.
pub(crate) fn scaled_terms(g: &Graph, x: &ScalingVector) -> Vec<Vec<LinearTerm>> {
    let x = x.as_slice();
    (0..g.n())
        .map(|u| {
            g.neighbors(u)
                .iter()
                .map(|&v| LinearTerm::new(v, x[u], x[v]))
                .collect()
        })
        .collect()
}

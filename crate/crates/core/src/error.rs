use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("{what}: size {actual} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("threshold of node {node} changed when agent {agent} altered its own report")]
    ContractViolation { node: usize, agent: usize },

    #[error("{0}")]
    Precondition(String),

    #[error("threshold of node {node} never reaches 1 as the cost of neighbor {neighbor} grows to {limit}: unbounded approximation ratio")]
    Claim1Violation {
        node: usize,
        neighbor: usize,
        limit: f64,
    },

    #[error("threshold of node {node} is already >= 1 when neighbor {neighbor} has zero cost: unbounded approximation ratio")]
    Claim2Violation { node: usize, neighbor: usize },

    #[error("threshold of node {node} decreases in the cost of node {neighbor}: {low_cost} -> {low_threshold}, {high_cost} -> {high_threshold}")]
    NonMonotoneThreshold {
        node: usize,
        neighbor: usize,
        low_cost: f64,
        low_threshold: f64,
        high_cost: f64,
        high_threshold: f64,
    },

    #[error("single-dimensional rule is not monotone at node {node}: selected at cost {selected_at}, dropped at {dropped_at}")]
    NonMonotoneRule {
        node: usize,
        selected_at: f64,
        dropped_at: f64,
    },

    #[error("random decomposition did not cover all edges within {rounds} rounds (seed {seed})")]
    LoopGuard { rounds: usize, seed: u64 },

    #[error("gamma {gamma} is below the maximum subgraph density {density}")]
    GammaTooSmall { gamma: f64, density: f64 },

    #[error("node {node} has two neighbors owned by agent {agent}; the instance is not 3-hop-far")]
    NotThreeHopFar { node: usize, agent: usize },

    #[error(
        "star part violates the one-neighbor-per-agent condition at node {node} for agent {agent}"
    )]
    StarOwnership { node: usize, agent: usize },

    #[error("decomposition leaves edge ({0}, {1}) uncovered")]
    EdgeCoverage(usize, usize),

    #[error("star thresholds disagree with the literal star rule at node {0}")]
    StarRuleMismatch(usize),

    #[error("removing agent {0} makes the instance infeasible")]
    Monopoly(usize),

    #[error("LMP pricing found no violated column while the master value is {master_value} (duals: alpha {alpha:?}, beta {beta}, z {z})")]
    LmpViolation {
        master_value: f64,
        alpha: Vec<f64>,
        beta: f64,
        z: f64,
    },

    #[error("linear program is {0}")]
    Lp(String),
}

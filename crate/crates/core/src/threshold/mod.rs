//! Threshold mechanisms: every node gets a price computed from the other
//! agents' reports and is bought iff its cost does not exceed the price.

mod convert;
mod family;
mod run;
mod scaled;
mod spectral;

pub use convert::neighbor_to_edge_convert;
pub use family::{
    FnThresholds, LinearEdgeThresholds, LinearNeighborThresholds, LinearTerm, ScalingVector,
    ThresholdFamily, ThresholdKind,
};
pub use run::{
    nondisjoint_wrap, run_threshold_mechanism, run_threshold_mechanism_with, thresholds, RunOptions,
};
pub use scaled::{
    alpha_gx, ax_mechanism, beta_gx, bx_mechanism, max_weight_independent_set, tightness_instance,
    AlphaWitness, MAX_NEIGHBORHOOD,
};
pub use spectral::perron_vector;

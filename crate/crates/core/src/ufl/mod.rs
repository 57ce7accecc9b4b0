//! Truthful-in-expectation facility location from an LMP approximation
//! algorithm and the fractional VCG mechanism.

mod decompose;
mod jms;
mod mechanism;
mod vcg;

pub use decompose::{
    convex_decompose, convex_decompose_enumerated, ConvexDecomposition, DecompositionMethod,
    WeightedSolution, MAX_ENUMERATED_FACILITIES,
};
pub use jms::{jms_lmp, jms_lmp_costs, jms_lmp_traced, Jms, JmsTrace, LmpAlgorithm};
pub use mechanism::{
    run_ufl_mechanism, run_ufl_mechanism_with, UflMechanismResult, UflOptions, UflOutcome,
};
pub use vcg::fractional_vcg_payments;

#[cfg(test)]
mod tests;

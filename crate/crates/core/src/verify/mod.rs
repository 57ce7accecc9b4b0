//! Checkers for the game-theoretic guarantees, the payment benchmark, and the
//! algorithms whose allocations are not weakly monotone.

mod appendix;
mod frugality;
mod truthful;
mod wmon;

pub use appendix::{
    lp_rounding_algorithm, lp_rounding_fixture, ordered_primal_dual, ordered_primal_dual_fixture,
    simultaneous_primal_dual, simultaneous_primal_dual_fixture, WmonFixture,
};
pub use frugality::{
    frugality_nu, frugality_ratio_estimate, min_cost_covers, nu_over, FrugalityEstimate,
    FrugalityReport,
};
pub use truthful::{
    approximation_ratio, ir_violations, misreport_grid, truthfulness_check, ufl_truthfulness_check,
    IrViolation, TruthReport,
};
pub use wmon::{
    allocation_of_nodes, allocation_of_result, wmon_check, wmon_pair, Allocation, WmonWitness,
};

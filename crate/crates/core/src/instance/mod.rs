//! Instances, generators, density utilities and the JSON file format.

pub mod density;
pub mod generate;
pub mod graph;
pub mod io;
pub mod ufl;
pub mod vc;

pub use density::{max_density_fraction, orient_min_max_indegree, sparsity_gamma, Orientation};
pub use generate::{
    generate_gadget, generate_random_ufl, generate_random_vc_instance, generate_ring_ufl,
    group_ownership, random_graph, rng_from_seed, UflParams,
};
pub use graph::{mask_of, nodes_of, Graph};
pub use io::{load_instance, parse_instance, save_instance, to_json, Instance};
pub use ufl::{Facility, UflInstance, UflSolution};
pub use vc::{
    validate_vc_instance, MechanismResult, Ownership, Provision, ValidationReport, VcInstance,
};

//! Truthful mechanisms for multidimensional covering problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`instance`]: graphs, ownership, cost vectors, facility-location instances,
//!   generators, density/orientation utilities and the JSON file format.
//! * [`oracles`]: exact ground-truth solvers (dense simplex, half-integral
//!   vertex-cover LP, branch-and-bound vertex cover, cover enumeration, exact UFL).
//! * [`threshold`]: threshold mechanisms, x-scaled edge/neighbor families,
//!   spectral scaling and the neighbor-to-edge conversion.
//! * [`decomposition`]: max-combination of part mechanisms, the random
//!   single-dimensional decomposition and the sparse-peeling pipeline.
//! * [`ufl`]: the LP-based truthful-in-expectation facility location mechanism.
//! * [`verify`]: WMON/truthfulness/IR checkers, frugality, and the primal-dual
//!   counterexample algorithms.
//!
//! Batch loops go through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iteration otherwise.

pub mod decomposition;
pub mod error;
pub mod instance;
pub mod oracles;
pub mod par;
pub mod threshold;
pub mod ufl;
pub mod verify;

pub use error::{Error, Result};
pub use instance::{Graph, MechanismResult, Ownership, Provision, UflInstance, VcInstance};

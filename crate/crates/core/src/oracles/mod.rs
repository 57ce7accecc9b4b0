//! Exact ground-truth solvers.

pub mod flow;
pub mod lp;
pub mod ufl;
pub mod vc;

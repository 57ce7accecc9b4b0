//! Max-combination of threshold mechanisms over edge-covering subgraphs, and
//! the decompositions built on it.

mod combine;
mod peeling;
mod singledim;
mod sparse;
mod star;

pub use combine::{
    combine, run_decomposition, CombinedThresholds, Decomposition, DecompositionOptions,
    DecompositionRun, Part, PartKind,
};
pub use peeling::{sparse_peeling, zj_decomposition, PeelRound, PeelingResult, Side, StarPiece};
pub use singledim::{
    random_singledim_decomposition, rdim_mechanism, singledim_parts, singledim_selection,
    singledim_vc_mechanism, SingleDimPick, SingleDimThresholds, SINGLEDIM_RATIO,
};
pub use sparse::{check_three_hop_far, minor_closed_mechanism, threehop_mechanism};
pub use star::{star_part, StarThresholds};

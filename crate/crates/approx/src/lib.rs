//! Periodic approximation of invariant measures, polygonal covers of Σ₂ sets, and the word
//! sequences fed to the construction.

mod alpha;
mod cover;
mod debruijn;
mod descriptor;
mod orbit;
mod sequence;
mod tm;

pub use alpha::{alpha_breakpoint, alpha_depth, alpha_k, alpha_of_depth, depth_for_radius, Alpha};
pub use cover::{polygonal_cover, CoverDiagnostics, CoverState, COVER_PAIR_DEPTH, DEFAULT_COVER_MAX_LEN};
pub use debruijn::{
    approximate_computable_measure, debruijn_build, debruijn_error_bound, debruijn_length_bound,
    debruijn_periodic_approx, DeBruijnBuild, DEBRUIJN_EDGE_LIMIT,
};
pub use descriptor::{precision_depth, DistanceDescriptor, Sigma2Descriptor, TargetSet};
pub use orbit::{orbit_distance, orbit_words, segment_distance_lower, SparseMeasure, MAX_SPARSE_DEPTH};
pub use sequence::{
    cesaro_interleave, limit_set_points, pad_for_space, program_from_json, rice_reduction, CesaroBlock, CesaroPlan,
    CoverProgram, MachineRef, PaddedProgram, ProgramJson, RiceProgram, WordSequenceProgram, CESARO_COVER_BUDGET,
};
pub use tm::{CompiledTm, Move, TmRun, TuringMachineSpec};

#[derive(Debug, thiserror::Error)]
pub enum ApproxError {
    #[error(transparent)]
    Measure(#[from] lm_measures::MeasureError),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Invalid(String),
}

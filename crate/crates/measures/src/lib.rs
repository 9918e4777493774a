//! Shift-invariant measures on `A^ℤ`: exact cylinder tables, periodic-orbit
//! measures, Bernoulli and Markov sources, the truncated weak* metric, and
//! ring samplers.

mod alphabet;
mod distance;
mod json;
mod mixing;
mod rational;
mod sample;
mod source;
mod table;

pub use alphabet::{rotate, Alphabet, Word, WordIter};
pub use distance::{
    ball_membership, classify, dist_table_to_segment, dist_to_segment, distance_truncated, grid_point, level_gaps,
    table_distance, Membership, DEFAULT_SEGMENT_GRID,
};
pub use json::{source_from_json, source_to_json, SourceJson};
pub use mixing::psi_mixing_coeff;
pub use rational::{abs_diff, fmt_q, parse_q, pow2_neg, q, qi, to_f64, Q};
pub use sample::{cyclic_counts, empirical_measure, sample_ring, sample_ring_with};
pub use source::{cylinder_prob, BernoulliSpec, MarkovSpec, MeasureSource, PeriodicOrbitMeasure};
pub use table::CylinderTable;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("depth {requested} exceeds the available depth {available}")]
    DepthExceeded { requested: usize, available: usize },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("not shift-invariant: {0}")]
    NotInvariant(String),
    #[error("{0}")]
    Invalid(String),
}

//! One-dimensional cellular automata on rings: local rules, stepping, exhaustive
//! predecessor enumeration and exact pushforward of cylinder measures.

mod export;
mod preimage;
mod ring;
mod rule;

pub use export::{write_pgm, write_ppm};
pub use preimage::{
    exact_pushforward, exact_pushforward_with_budget, predecessors, predecessors_with_budget, pushforward_table,
    pushforward_table_with_budget, PredecessorSet, DEFAULT_BUDGET,
};
pub use ring::{iterate, iterate_capped, step, step_into, RingConfig, SpaceTimeTrace, DEFAULT_TRACE_CAP};
pub use rule::{pack, unpack_into, Cell, RuleTable, DENSE_LIMIT};

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("ring of length {len} is shorter than the neighbourhood ({need})")]
    RingTooShort { len: usize, need: usize },
    #[error("enumeration budget exceeded: {what} against a budget of {budget}")]
    Budget { what: String, budget: u64 },
    #[error(transparent)]
    Measure(#[from] lm_measures::MeasureError),
    #[error("{0}")]
    Invalid(String),
}

//! The layered cellular automaton whose limit measures follow a computable sequence of periodic
//! orbits, with the host agent that stands in for its embedded machines and the segment
//! diagnostics used to check its invariants.

pub mod automaton;
pub mod cell;
pub mod counter;
pub mod host;
pub mod render;
pub mod rule;
pub mod scan;
pub mod schedule;

pub use automaton::{build_automaton, AutomatonConfig, BindingJson, ConstructionAutomaton, SequenceProgramBinding};
pub use cell::{Codec, Comp, CopyCell, LayeredCell, Layers, MergeCell, MergeSym, Probe, Sweep, INIT, WALL};
pub use counter::{
    compare_exact, compare_sign, dec_digits, inc_digits, inc_from_zero, merge_lifetime, CounterDigits, MergeDigits,
};
pub use host::{merge_start_value, ConstructionRun, HostEvent};
pub use lm_approx::TuringMachineSpec;
pub use render::render_palette;
pub use scan::{segment_scan, SegmentInfo, SegmentReport, WallInfo};
pub use schedule::{schedule_k, schedule_t, Schedule, SCHEDULE_LIMIT};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("invalid: {0}")]
    Invalid(String),
    #[error("schedule value above 2^62 at phase {0}")]
    Overflow(u64),
    #[error("malformed cell code {0}")]
    BadCell(u32),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Engine(#[from] lm_engine::EngineError),
    #[error(transparent)]
    Approx(#[from] lm_approx::ApproxError),
}

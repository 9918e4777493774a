//! Experiment runner for the construction: samples rings, iterates them, and tracks empirical
//! tables of the output projection against the limit path of the sequence.

pub mod cesaro;
pub mod config;
pub mod output;
pub mod render;
pub mod run;

pub use cesaro::{cesaro_track, CesaroTracker};
pub use config::{
    sample_cells, CompositeFill, ExperimentConfig, InitialMeasure, PhasePoint, Plan, Reference, ReferenceJson, Times, DEFAULT_BUDGET,
    SCHEMA,
};
pub use output::{emit_csv, read_csv, write_csv, CsvLayout};
pub use render::{render_spacetime, simulate, Rendered, DEFAULT_PIXEL_CAP};
pub use run::{distance_to_points, project, run_experiment, run_plan, SegmentStats, TimeSeriesRow, STAR};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("field `{field}`: {msg}")]
    Invalid { field: String, msg: String },
    #[error("budget: {requested} cell updates requested, cap {cap}; try {suggestion}")]
    Budget { requested: u128, cap: u64, suggestion: String },
    #[error("depth mismatch: {0} vs {1}")]
    DepthMismatch(usize, usize),
    #[error(transparent)]
    Measure(#[from] lm_measures::MeasureError),
    #[error(transparent)]
    Approx(#[from] lm_approx::ApproxError),
    #[error(transparent)]
    Construction(#[from] lm_construction::ConstructionError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(String),
}

impl HarnessError {
    pub(crate) fn invalid(field: &str, msg: impl Into<String>) -> Self {
        HarnessError::Invalid { field: field.into(), msg: msg.into() }
    }
}

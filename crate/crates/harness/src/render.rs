use std::sync::Arc;

use lm_construction::{ConstructionAutomaton, ConstructionRun};
use lm_engine::{write_ppm, Cell, SpaceTimeTrace};

/// Largest image written without striding, in pixels.
pub const DEFAULT_PIXEL_CAP: usize = 1 << 24;

#[derive(Clone, Debug)]
pub struct Rendered {
    /// P6 PPM.
    pub bytes: Vec<u8>,
    /// Rows and columns kept: every `stride`-th of each.
    pub stride: usize,
    pub warning: Option<String>,
}

/// One pixel per cell per recorded row; above `cap` pixels, both axes are strided alike.
pub fn render_spacetime(trace: &SpaceTimeTrace, palette: impl Fn(Cell) -> [u8; 3], cap: usize) -> Rendered {
    let pixels = trace.width * trace.rows.len();
    let mut stride = 1;
    while pixels.div_ceil(stride * stride) > cap.max(1) {
        stride += 1;
    }
    let mut bytes = Vec::new();
    if stride == 1 {
        write_ppm(trace, palette, &mut bytes).expect("writing to memory");
        return Rendered { bytes, stride, warning: None };
    }
    let small = SpaceTimeTrace {
        states: trace.states,
        width: trace.width.div_ceil(stride),
        stride: trace.stride * stride as u64,
        times: trace.times.iter().step_by(stride).copied().collect(),
        rows: trace.rows.iter().step_by(stride).map(|r| r.iter().step_by(stride).copied().collect()).collect(),
    };
    write_ppm(&small, palette, &mut bytes).expect("writing to memory");
    let warning = format!(
        "{}x{} trace above {cap} pixels: every {stride}th row and column kept",
        trace.width,
        trace.rows.len()
    );
    Rendered { bytes, stride, warning: Some(warning) }
}

/// Runs the construction (host included) for `steps` steps, keeping at most `cap` cells of trace.
pub fn simulate(
    a: Arc<ConstructionAutomaton>,
    cells: Vec<Cell>,
    steps: u64,
    cap: usize,
) -> (ConstructionRun, SpaceTimeTrace) {
    let l = cells.len();
    let total = (steps as u128 + 1) * l as u128;
    let keep = cap.max(l) as u128;
    let stride = if total <= keep { 1 } else { total.div_ceil(keep) as u64 };
    let mut tr = SpaceTimeTrace { states: a.states(), width: l, stride, times: vec![0], rows: vec![cells.clone()] };
    let mut run = ConstructionRun::new(a, cells);
    for s in 1..=steps {
        run.step();
        if s % stride == 0 {
            tr.times.push(run.time());
            tr.rows.push(run.cells().to_vec());
        }
    }
    (run, tr)
}

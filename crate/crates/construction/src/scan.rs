//! Segment diagnostics for a configuration at a known time.

use lm_engine::Cell;
use serde::Serialize;

use crate::automaton::ConstructionAutomaton;
use crate::cell::LayeredCell;
use crate::host::attached_counter;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallInfo {
    pub pos: usize,
    /// The attached time counter reads `t − 1`.
    pub initialized: bool,
    /// Value of the attached time counter, if there is one.
    pub value: Option<u128>,
}

/// The segment from the wall at `left` to the next wall on its right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentInfo {
    pub left: usize,
    /// Cells strictly between the two walls; the lengths plus the walls sum to the ring length.
    pub length: usize,
    /// No sweeping state inside, apart from a counter resting against the right wall.
    pub swept: bool,
    /// Value of the time counter attached to the right wall.
    pub counter: Option<u128>,
    /// Cells left of the right wall that already agree with the tiling by the reference word.
    pub copy_progress: usize,
    /// Interior cells with a non-blank layer besides the output.
    pub aux: usize,
    /// Interior cells whose output disagrees with the tiling by the reference word.
    pub defects: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentReport {
    pub t: u64,
    pub walls: Vec<WallInfo>,
    pub segments: Vec<SegmentInfo>,
    /// Composite cells with a non-blank auxiliary layer, over all cells.
    pub aux_density: f64,
    pub init_cells: usize,
}

impl SegmentReport {
    pub fn min_length(&self) -> Option<usize> {
        self.segments.iter().map(|s| s.length).min()
    }

    pub fn max_length(&self) -> Option<usize> {
        self.segments.iter().map(|s| s.length).max()
    }

    pub fn swept_fraction(&self) -> f64 {
        if self.segments.is_empty() {
            return 1.0;
        }
        self.segments.iter().filter(|s| s.swept).count() as f64 / self.segments.len() as f64
    }

    /// Fraction of cells lying in segments longer than `k`.
    pub fn tail_fraction(&self, k: usize, ring: usize) -> f64 {
        self.segments.iter().filter(|s| s.length > k).map(|s| s.length + 1).sum::<usize>() as f64 / ring as f64
    }
}

/// Scans `cells` at time `t`. With `word`, copy progress and defects are measured against the
/// periodic tiling by `word` aligned on each right wall.
pub fn segment_scan(a: &ConstructionAutomaton, cells: &[Cell], t: u64, word: Option<&[u8]>) -> SegmentReport {
    let l = cells.len();
    let codec = a.codec();
    let decoded: Vec<LayeredCell> = cells.iter().map(|&c| codec.decode_lossy(c)).collect();
    let mut walls = Vec::new();
    let mut aux_total = 0;
    let mut init_cells = 0;
    for (i, c) in decoded.iter().enumerate() {
        match c {
            LayeredCell::Wall => {
                let ctr = attached_counter(a, cells, i);
                let value = (!ctr.is_empty()).then(|| ctr.val());
                walls.push(WallInfo { pos: i, initialized: t >= 1 && value == Some(t as u128 - 1), value });
            }
            LayeredCell::Init => init_cells += 1,
            LayeredCell::Composite(x) => aux_total += !x.is_pure_output() as usize,
        }
    }
    let mut segments = Vec::with_capacity(walls.len());
    for (w, info) in walls.iter().enumerate() {
        let right = &walls[(w + 1) % walls.len()];
        let span = (right.pos + l - info.pos - 1) % l + 1;
        let length = span - 1;
        let at = |j: usize| &decoded[(right.pos + l - j) % l];
        let mut aux = 0;
        let mut defects = 0;
        let mut copy_progress = 0;
        let mut progressing = true;
        let mut sweeping = Vec::new();
        for j in 1..span {
            let Some(x) = at(j).layers() else { continue };
            aux += !x.is_pure_output() as usize;
            if !x.sweep.is_empty() {
                sweeping.push(j);
            }
            if let Some(w) = word.filter(|w| !w.is_empty()) {
                let m = w.len();
                let ok = x.output == Some(w[(m - j % m) % m]);
                defects += !ok as usize;
                if ok && progressing {
                    copy_progress += 1;
                } else {
                    progressing = false;
                }
            }
        }
        // a resting counter starts next to the wall and has gaps of at most one cell
        let mut reach = 0;
        for &j in &sweeping {
            if j <= reach + 2 {
                reach = j;
            }
        }
        let swept = sweeping.iter().all(|&j| j <= reach)
            && (sweeping.is_empty() || at(1).layers().is_some_and(|x| !x.sweep.is_empty()));
        segments.push(SegmentInfo {
            left: info.pos,
            length,
            swept,
            counter: right.value,
            copy_progress,
            aux,
            defects,
        });
    }
    SegmentReport { t, walls, segments, aux_density: aux_total as f64 / l as f64, init_cells }
}

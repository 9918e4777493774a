use lm_construction::{segment_scan, ConstructionAutomaton, ConstructionRun, LayeredCell, SegmentReport};
use lm_engine::Cell;
use lm_measures::{empirical_measure, table_distance, CylinderTable, Word, Q};
use rayon::prelude::*;

use crate::cesaro::cesaro_track;
use crate::config::{ExperimentConfig, Plan};
use crate::HarnessError;

/// Symbol for cells without an output letter: `W`, `I`, and composites whose output is `#`.
pub const STAR: char = '*';

#[derive(Clone, Debug, PartialEq, Default)]
pub struct SegmentStats {
    pub count: usize,
    pub min: Option<usize>,
    pub median: Option<usize>,
    pub max: Option<usize>,
    /// Swept segments over all segments (1 when there are none).
    pub swept: Q,
    /// Cells in segments longer than `K(n)`, over all cells.
    pub tail: Q,
}

/// Aggregate over the `S` rings at one observation time.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeriesRow {
    pub t: u64,
    pub phase: Option<u64>,
    /// Empirical table of the projection onto `B ∪ {*}`.
    pub table: CylinderTable,
    /// `[lower, upper]` distance to the reference points.
    pub distance: (Q, Q),
    /// Composite cells with a non-blank auxiliary layer, over all cells.
    pub aux_density: Q,
    /// Distance of the running mean of the tables, filled by [`cesaro_track`].
    pub cesaro: Option<(Q, Q)>,
    pub segments: SegmentStats,
}

/// Output letter index per cell, `|B|` for [`STAR`]; also returns the auxiliary cell count.
pub fn project(a: &ConstructionAutomaton, cells: &[Cell]) -> (Word, usize) {
    let codec = a.codec();
    let star = a.alphabet().size() as u8;
    let mut aux = 0;
    let w = cells
        .iter()
        .map(|&c| match codec.decode_lossy(c) {
            LayeredCell::Composite(x) => {
                aux += !x.is_pure_output() as usize;
                x.output.unwrap_or(star)
            }
            _ => star,
        })
        .collect();
    (w, aux)
}

/// `[min lower, min upper]` over the points.
pub fn distance_to_points(m: &CylinderTable, pts: &[CylinderTable], depth: usize) -> Result<(Q, Q), HarnessError> {
    let mut best: Option<(Q, Q)> = None;
    for p in pts {
        let (lo, up) = table_distance(m, p, depth)?;
        best = Some(match best {
            None => (lo, up),
            Some((a, b)) => (a.min(lo), b.min(up)),
        });
    }
    best.ok_or_else(|| HarnessError::invalid("reference", "no reference points"))
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TimeSeriesRow>, HarnessError> {
    run_plan(&cfg.validate()?)
}

struct Observation {
    word: Word,
    aux: usize,
    report: SegmentReport,
}

fn run_ring(plan: &Plan, i: usize) -> Vec<Observation> {
    let a = &plan.automaton;
    let mut run = ConstructionRun::new(a.clone(), plan.sample_ring(i));
    plan.times
        .iter()
        .map(|&t| {
            run.run_until(t);
            let (word, aux) = project(a, run.cells());
            Observation { word, aux, report: segment_scan(a, run.cells(), t, None) }
        })
        .collect()
}

/// Rings run in parallel; rows are reduced in ring order, so the result depends only on the plan.
pub fn run_plan(plan: &Plan) -> Result<Vec<TimeSeriesRow>, HarnessError> {
    let per_ring: Vec<Vec<Observation>> = (0..plan.s).into_par_iter().map(|i| run_ring(plan, i)).collect();
    let schedule = plan.automaton.schedule();
    let cells = (plan.s * plan.l) as u64;
    let mut rows = Vec::with_capacity(plan.times.len());
    for (j, &t) in plan.times.iter().enumerate() {
        let words: Vec<Word> = per_ring.iter().map(|r| r[j].word.clone()).collect();
        let table = empirical_measure(&plan.ext, &words, plan.depth)?;
        let aux: usize = per_ring.iter().map(|r| r[j].aux).sum();
        let phase = schedule.phase(t);
        let k = phase.and_then(|n| schedule.k(n).ok()).map_or(usize::MAX, |k| k as usize);
        let mut lengths = Vec::new();
        let (mut swept, mut tail) = (0usize, 0usize);
        for r in &per_ring {
            for s in &r[j].report.segments {
                lengths.push(s.length);
                swept += s.swept as usize;
                if s.length > k {
                    tail += s.length + 1;
                }
            }
        }
        lengths.sort_unstable();
        let count = lengths.len();
        let segments = SegmentStats {
            count,
            min: lengths.first().copied(),
            median: lengths.get(count / 2).copied(),
            max: lengths.last().copied(),
            swept: if count == 0 { Q::from_integer(1.into()) } else { Q::new(swept.into(), count.into()) },
            tail: Q::new(tail.into(), cells.into()),
        };
        let pts = plan.reference.points(t, plan.depth, &plan.ext)?;
        let distance = distance_to_points(&table, &pts, plan.depth)?;
        rows.push(TimeSeriesRow {
            t,
            phase,
            table,
            distance,
            aux_density: Q::new(aux.into(), cells.into()),
            cesaro: None,
            segments,
        });
    }
    cesaro_track(&rows, |row| plan.reference.points(row.t, plan.depth, &plan.ext).map(|p| p.to_vec()))
}

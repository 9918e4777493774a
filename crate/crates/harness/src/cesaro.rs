use lm_measures::{Alphabet, CylinderTable, Q};
use num_traits::Zero;

use crate::run::{distance_to_points, TimeSeriesRow};
use crate::HarnessError;

/// Running sum of tables and their count; the mean is exact.
#[derive(Clone, Debug)]
pub struct CesaroTracker {
    alphabet: Alphabet,
    depth: usize,
    sum: Vec<Vec<Q>>,
    count: u64,
}

impl CesaroTracker {
    pub fn new(alphabet: &Alphabet, depth: usize) -> Self {
        let sum = (0..=depth).map(|n| vec![Q::zero(); alphabet.count(n)]).collect();
        CesaroTracker { alphabet: alphabet.clone(), depth, sum, count: 0 }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn push(&mut self, t: &CylinderTable) -> Result<(), HarnessError> {
        if t.depth() != self.depth {
            return Err(HarnessError::DepthMismatch(self.depth, t.depth()));
        }
        if t.alphabet().symbols() != self.alphabet.symbols() {
            return Err(HarnessError::invalid("table", "alphabet differs from the tracker's"));
        }
        for (n, lv) in self.sum.iter_mut().enumerate() {
            for (s, x) in lv.iter_mut().zip(t.level(n)) {
                *s += x;
            }
        }
        self.count += 1;
        Ok(())
    }

    pub fn mean(&self) -> Result<CylinderTable, HarnessError> {
        if self.count == 0 {
            return Err(HarnessError::invalid("cesaro", "no tables pushed"));
        }
        let c = Q::from_integer(self.count.into());
        let levels = self.sum.iter().map(|lv| lv.iter().map(|x| x / &c).collect()).collect();
        Ok(CylinderTable::from_levels(&self.alphabet, levels)?)
    }
}

/// Fills the Cesàro column: the mean of the tables of rows `0..=j` against `reference(row j)`.
pub fn cesaro_track(
    rows: &[TimeSeriesRow],
    mut reference: impl FnMut(&TimeSeriesRow) -> Result<Vec<CylinderTable>, HarnessError>,
) -> Result<Vec<TimeSeriesRow>, HarnessError> {
    let Some(first) = rows.first() else { return Ok(Vec::new()) };
    if rows.windows(2).any(|p| p[0].t > p[1].t) {
        return Err(HarnessError::invalid("rows", "not time-ordered"));
    }
    let depth = first.table.depth();
    if let Some(r) = rows.iter().find(|r| r.table.depth() != depth) {
        return Err(HarnessError::DepthMismatch(depth, r.table.depth()));
    }
    let mut tracker = CesaroTracker::new(first.table.alphabet(), depth);
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        tracker.push(&row.table)?;
        let mean = tracker.mean()?;
        let pts = reference(row)?;
        let mut r = row.clone();
        r.cesaro = Some(distance_to_points(&mean, &pts, depth)?);
        out.push(r);
    }
    Ok(out)
}

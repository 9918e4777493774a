use num_traits::{One, Zero};

use crate::rational::{abs_diff, pow2_neg, Q};
use crate::source::{MeasureSource, PeriodicOrbitMeasure};
use crate::table::CylinderTable;
use crate::MeasureError;

/// `max_{|u| = n} |μ([u]) − ν([u])|` for every `n ≤ depth`.
pub fn level_gaps(a: &CylinderTable, b: &CylinderTable, depth: usize) -> Result<Vec<Q>, MeasureError> {
    if a.alphabet() != b.alphabet() {
        return Err(MeasureError::AlphabetMismatch("tables over different alphabets".into()));
    }
    for t in [a, b] {
        if t.depth() < depth {
            return Err(MeasureError::DepthExceeded { requested: depth, available: t.depth() });
        }
    }
    Ok((0..=depth)
        .map(|n| {
            a.level(n)
                .iter()
                .zip(b.level(n))
                .map(|(x, y)| abs_diff(x, y))
                .max()
                .unwrap_or_else(Q::zero)
        })
        .collect())
}

/// Truncated weak* distance between two tables: `(lower, lower + 2^{-N})`.
pub fn table_distance(a: &CylinderTable, b: &CylinderTable, depth: usize) -> Result<(Q, Q), MeasureError> {
    let lower: Q = level_gaps(a, b, depth)?
        .into_iter()
        .enumerate()
        .map(|(n, g)| g * pow2_neg(n))
        .sum();
    let upper = &lower + pow2_neg(depth);
    Ok((lower, upper))
}

/// Interval `[lower, upper]` containing `d(μ, ν)`.
pub fn distance_truncated(mu: &MeasureSource, nu: &MeasureSource, depth: usize) -> Result<(Q, Q), MeasureError> {
    if mu.alphabet() != nu.alphabet() {
        return Err(MeasureError::AlphabetMismatch("measures over different alphabets".into()));
    }
    table_distance(&mu.table(depth)?, &nu.table(depth)?, depth)
}

pub const DEFAULT_SEGMENT_GRID: u32 = 8;

/// Smallest truncated distance (upper end) from `mu` to `t·a + (1−t)·b` over `t ∈ 2^{-g}ℤ ∩ [0,1]`.
pub fn dist_to_segment(
    mu: &MeasureSource,
    a: &PeriodicOrbitMeasure,
    b: &PeriodicOrbitMeasure,
    depth: usize,
    grid: u32,
) -> Result<Q, MeasureError> {
    let m = mu.table(depth)?;
    let ta = MeasureSource::Periodic(a.clone()).table(depth)?;
    let tb = MeasureSource::Periodic(b.clone()).table(depth)?;
    dist_table_to_segment(&m, &ta, &tb, depth, grid)
}

pub fn dist_table_to_segment(
    m: &CylinderTable,
    ta: &CylinderTable,
    tb: &CylinderTable,
    depth: usize,
    grid: u32,
) -> Result<Q, MeasureError> {
    let steps = 1u64 << grid;
    let mut best: Option<Q> = None;
    for i in 0..=steps {
        let t = Q::new(i.into(), steps.into());
        let mix = CylinderTable::mix(ta, tb, &t)?;
        let (_, up) = table_distance(m, &mix, depth)?;
        if best.as_ref().map_or(true, |b| up < *b) {
            best = Some(up);
        }
    }
    Ok(best.expect("grid has at least two points"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    Outside,
    Inconclusive,
}

/// Whether `d(μ, ν) ≤ ε`, decided from the truncated interval.
pub fn ball_membership(mu: &MeasureSource, nu: &MeasureSource, eps: &Q, depth: usize) -> Result<Membership, MeasureError> {
    let (lo, up) = distance_truncated(mu, nu, depth)?;
    Ok(classify(&lo, &up, eps))
}

pub fn classify(lo: &Q, up: &Q, eps: &Q) -> Membership {
    if up <= eps {
        Membership::Inside
    } else if lo > eps {
        Membership::Outside
    } else {
        Membership::Inconclusive
    }
}

/// Mixture weight helper for callers that iterate a grid themselves.
pub fn grid_point(i: u64, grid: u32) -> Q {
    let steps = 1u64 << grid;
    assert!(i <= steps);
    if i == steps {
        Q::one()
    } else {
        Q::new(i.into(), steps.into())
    }
}

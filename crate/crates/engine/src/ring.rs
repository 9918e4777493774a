use crate::rule::{Cell, RuleTable};
use crate::EngineError;

/// Cyclic configuration standing in for a point of `A^ℤ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingConfig {
    pub states: u32,
    pub cells: Vec<Cell>,
    pub t: u64,
}

impl RingConfig {
    pub fn new(states: u32, cells: Vec<Cell>) -> Result<Self, EngineError> {
        if let Some(c) = cells.iter().find(|&&c| c >= states) {
            return Err(EngineError::Invalid(format!("cell value {c} is not a state")));
        }
        Ok(RingConfig { states, cells, t: 0 })
    }

    pub fn from_word(states: u32, w: &[u8]) -> Result<Self, EngineError> {
        RingConfig::new(states, w.iter().map(|&a| a as Cell).collect())
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cyclic left rotation by `by` cells, keeping the time stamp.
    pub fn rotated(&self, by: usize) -> Self {
        let l = self.cells.len();
        let by = if l == 0 { 0 } else { by % l };
        let cells = self.cells[by..].iter().chain(&self.cells[..by]).copied().collect();
        RingConfig { states: self.states, cells, t: self.t }
    }

    pub fn to_word(&self) -> Vec<u8> {
        self.cells.iter().map(|&c| c as u8).collect()
    }
}

fn check(rule: &RuleTable, cfg: &RingConfig) -> Result<(), EngineError> {
    if cfg.states != rule.states() {
        return Err(EngineError::Invalid(format!(
            "ring has {} states, rule has {}",
            cfg.states,
            rule.states()
        )));
    }
    if cfg.cells.len() < rule.diameter() {
        return Err(EngineError::RingTooShort { len: cfg.cells.len(), need: rule.diameter() });
    }
    Ok(())
}

/// Writes the image of `src` into `dst`, cell `i` reading the cyclic window `[i−r, i+r]`.
pub fn step_into(rule: &RuleTable, src: &[Cell], dst: &mut Vec<Cell>) {
    let l = src.len();
    let r = rule.radius();
    let d = rule.diameter();
    dst.clear();
    dst.reserve(l);
    if let Some(table) = rule.dense_table() {
        let k = rule.states() as usize;
        let modulus = k.pow(d as u32 - 1);
        let at = |j: usize| src[(j + l - r) % l] as usize;
        let mut idx = (0..d - 1).fold(0usize, |a, j| a * k + at(j));
        for i in 0..l {
            idx = (idx % modulus) * k + at(i + d - 1);
            dst.push(table[idx]);
        }
        return;
    }
    let mut ext = Vec::with_capacity(l + 2 * r);
    ext.extend_from_slice(&src[l - r..]);
    ext.extend_from_slice(src);
    ext.extend_from_slice(&src[..r]);
    dst.extend(ext.windows(d).map(|w| rule.apply(w)));
}

pub fn step(rule: &RuleTable, cfg: &RingConfig) -> Result<RingConfig, EngineError> {
    check(rule, cfg)?;
    let mut cells = Vec::new();
    step_into(rule, &cfg.cells, &mut cells);
    Ok(RingConfig { states: cfg.states, cells, t: cfg.t + 1 })
}

/// Recorded rows of a run. Row `j` is the configuration at time `times[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceTimeTrace {
    pub states: u32,
    pub width: usize,
    pub stride: u64,
    pub times: Vec<u64>,
    pub rows: Vec<Vec<Cell>>,
}

/// Trace memory guard, in cells.
pub const DEFAULT_TRACE_CAP: usize = 1 << 26;

/// `T` steps, optionally recording rows. When `(T+1)·L` exceeds `cap` every `stride`-th row is kept.
pub fn iterate_capped(
    rule: &RuleTable,
    cfg: &RingConfig,
    steps: u64,
    trace: bool,
    cap: usize,
) -> Result<(RingConfig, Option<SpaceTimeTrace>), EngineError> {
    check(rule, cfg)?;
    let l = cfg.cells.len();
    let total = (steps as u128 + 1) * l as u128;
    let stride = if total <= cap.max(l) as u128 { 1 } else { total.div_ceil(cap.max(l) as u128) as u64 };
    let mut tr = trace.then(|| SpaceTimeTrace {
        states: cfg.states,
        width: l,
        stride,
        times: vec![cfg.t],
        rows: vec![cfg.cells.clone()],
    });
    let mut cur = cfg.cells.clone();
    let mut next = Vec::with_capacity(l);
    for s in 1..=steps {
        step_into(rule, &cur, &mut next);
        std::mem::swap(&mut cur, &mut next);
        if let Some(tr) = tr.as_mut() {
            if s % stride == 0 {
                tr.times.push(cfg.t + s);
                tr.rows.push(cur.clone());
            }
        }
    }
    Ok((RingConfig { states: cfg.states, cells: cur, t: cfg.t + steps }, tr))
}

pub fn iterate(
    rule: &RuleTable,
    cfg: &RingConfig,
    steps: u64,
    trace: bool,
) -> Result<(RingConfig, Option<SpaceTimeTrace>), EngineError> {
    iterate_capped(rule, cfg, steps, trace, DEFAULT_TRACE_CAP)
}

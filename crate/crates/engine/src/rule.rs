use std::fmt;
use std::sync::Arc;

use crate::EngineError;

/// A cell state. Small alphabets use `0..states`; the construction packs layered cells into one value.
pub type Cell = u32;

/// Dense tables are precompiled when `states^(2r+1)` is at most this.
pub const DENSE_LIMIT: usize = 1 << 24;

type Callback = Arc<dyn Fn(&[Cell]) -> Cell + Send + Sync>;

#[derive(Clone)]
enum Local {
    Dense(Arc<[Cell]>),
    Callback(Callback),
}

/// Radius-`r` local rule `A^{2r+1} → A`.
#[derive(Clone)]
pub struct RuleTable {
    states: u32,
    radius: usize,
    local: Local,
}

impl fmt::Debug for RuleTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.local {
            Local::Dense(_) => "dense",
            Local::Callback(_) => "callback",
        };
        write!(f, "RuleTable {{ states: {}, radius: {}, {kind} }}", self.states, self.radius)
    }
}

fn window_count(states: u32, radius: usize) -> Option<usize> {
    (states as usize).checked_pow(2 * radius as u32 + 1)
}

impl RuleTable {
    /// `table[window_index(w)]` is the image of `w`.
    pub fn dense(states: u32, radius: usize, table: Vec<Cell>) -> Result<Self, EngineError> {
        if states == 0 {
            return Err(EngineError::Invalid("alphabet must be nonempty".into()));
        }
        let n = window_count(states, radius).ok_or_else(|| EngineError::Invalid("neighbourhood too large".into()))?;
        if table.len() != n {
            return Err(EngineError::Invalid(format!("dense table needs {n} entries, got {}", table.len())));
        }
        if let Some(x) = table.iter().find(|&&x| x >= states) {
            return Err(EngineError::Invalid(format!("table entry {x} is not a state")));
        }
        Ok(RuleTable { states, radius, local: Local::Dense(table.into()) })
    }

    /// Unchecked callback rule; outputs are trusted to lie in `0..states`.
    pub fn callback(states: u32, radius: usize, f: impl Fn(&[Cell]) -> Cell + Send + Sync + 'static) -> Self {
        RuleTable { states, radius, local: Local::Callback(Arc::new(f)) }
    }

    /// Tabulates `f` when the table is small enough, otherwise keeps it as a callback.
    pub fn from_fn(states: u32, radius: usize, f: impl Fn(&[Cell]) -> Cell + Send + Sync + 'static) -> Result<Self, EngineError> {
        match window_count(states, radius) {
            Some(n) if n <= DENSE_LIMIT => {
                let mut w = vec![0; 2 * radius + 1];
                let table = (0..n)
                    .map(|i| {
                        unpack_into(i, states, &mut w);
                        f(&w)
                    })
                    .collect();
                RuleTable::dense(states, radius, table)
            }
            _ => Ok(RuleTable::callback(states, radius, f)),
        }
    }

    /// Elementary rule by Wolfram number: the image of `(l, c, r)` is bit `4l + 2c + r`.
    pub fn elementary(number: u8) -> Self {
        let table = (0..8).map(|i| ((number >> i) & 1) as Cell).collect();
        RuleTable::dense(2, 1, table).expect("valid elementary table")
    }

    pub fn identity(states: u32, radius: usize) -> Result<Self, EngineError> {
        RuleTable::from_fn(states, radius, move |w| w[radius])
    }

    /// Radius-1 rule copying the right neighbour, i.e. the left shift `σ`.
    pub fn shift(states: u32) -> Result<Self, EngineError> {
        RuleTable::from_fn(states, 1, |w| w[2])
    }

    pub fn states(&self) -> u32 {
        self.states
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn diameter(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.local, Local::Dense(_))
    }

    /// Packed index of a window: base `states`, leftmost cell most significant.
    pub fn window_index(&self, w: &[Cell]) -> usize {
        pack(w, self.states)
    }

    pub fn apply(&self, w: &[Cell]) -> Cell {
        debug_assert_eq!(w.len(), self.diameter());
        match &self.local {
            Local::Dense(t) => t[pack(w, self.states)],
            Local::Callback(f) => f(w),
        }
    }

    pub(crate) fn dense_table(&self) -> Option<&[Cell]> {
        match &self.local {
            Local::Dense(t) => Some(t),
            Local::Callback(_) => None,
        }
    }

    /// One step on a finite window, which shrinks by `2r`.
    pub fn apply_window(&self, v: &[Cell], out: &mut Vec<Cell>) {
        out.clear();
        let d = self.diameter();
        if v.len() < d {
            return;
        }
        out.extend(v.windows(d).map(|w| self.apply(w)));
    }
}

pub fn pack(w: &[Cell], states: u32) -> usize {
    w.iter().fold(0usize, |acc, &c| acc * states as usize + c as usize)
}

pub fn unpack_into(mut i: usize, states: u32, w: &mut [Cell]) {
    for x in w.iter_mut().rev() {
        *x = (i % states as usize) as Cell;
        i /= states as usize;
    }
}

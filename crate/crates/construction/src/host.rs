//! The host agent: at the scheduled times it does what the embedded machines would do, writing
//! only inside the time-counter extent on the left of each initialized wall.

use std::sync::Arc;

use lm_engine::{step_into, Cell};

use crate::automaton::ConstructionAutomaton;
use crate::cell::{Comp, CopyCell, LayeredCell, Layers, MergeSym};
use crate::counter::{merge_lifetime, CounterDigits, MergeDigits};

/// Something the host did at time `t` next to the wall at `wall`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostEvent {
    /// `w_phase` staged and a copy block started.
    Staged { t: u64, wall: usize, phase: u64 },
    /// The word does not fit in the time-counter extent; nothing was written.
    StagingSkipped { t: u64, wall: usize, phase: u64, need: usize, have: usize },
    /// Merge counter and probe launched for phase `phase`.
    MergeArmed { t: u64, wall: usize, phase: u64 },
    /// Fire placed; the wall goes at `t + 1`.
    Fired { t: u64, wall: usize },
}

/// Starting value of the merge counter armed at `T(n−1)`: the smallest `V` whose counter is still
/// on the tape at step `2n`. A probe sent at the same time is back next to the wall at step `2k`
/// for a segment of length `k`, so the wall is marked exactly when `k ≤ n`.
pub fn merge_start_value(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    (1..).find(|&v| merge_lifetime(v) >= 2 * n).filter(|&v| merge_lifetime(v) <= 2 * n + 1)
}

/// One ring evolving under the automaton with its host agent.
pub struct ConstructionRun {
    automaton: Arc<ConstructionAutomaton>,
    cells: Vec<Cell>,
    scratch: Vec<Cell>,
    t: u64,
    next_phase: u64,
    events: Vec<HostEvent>,
}

impl ConstructionRun {
    pub fn new(automaton: Arc<ConstructionAutomaton>, cells: Vec<Cell>) -> Self {
        assert!(!cells.is_empty(), "empty ring");
        ConstructionRun { automaton, cells, scratch: Vec::new(), t: 0, next_phase: 0, events: Vec::new() }
    }

    pub fn automaton(&self) -> &ConstructionAutomaton {
        &self.automaton
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn time(&self) -> u64 {
        self.t
    }

    pub fn events(&self) -> &[HostEvent] {
        &self.events
    }

    pub fn step(&mut self) {
        step_into(self.automaton.rule(), &self.cells, &mut self.scratch);
        std::mem::swap(&mut self.cells, &mut self.scratch);
        self.t += 1;
        self.host();
    }

    pub fn run_until(&mut self, t: u64) {
        while self.t < t {
            self.step();
        }
    }

    fn decode(&self, i: usize) -> LayeredCell {
        self.automaton.codec().decode_lossy(self.cells[i])
    }

    fn edit(&mut self, i: usize, f: impl FnOnce(&mut Layers)) {
        let codec = self.automaton.codec();
        if let LayeredCell::Composite(mut l) = codec.decode_lossy(self.cells[i]) {
            f(&mut l);
            self.cells[i] = codec.composite(l);
        }
    }

    fn left(&self, i: usize, j: usize) -> usize {
        let l = self.cells.len();
        (i + l - j % l) % l
    }

    /// The time counter attached on the left of the wall at `y`, most significant digit first.
    pub fn attached_counter(&self, y: usize) -> CounterDigits {
        attached_counter(&self.automaton, &self.cells, y)
    }

    fn initialized_walls(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for y in 0..self.cells.len() {
            if self.decode(y) == LayeredCell::Wall {
                let c = self.attached_counter(y);
                if !c.is_empty() && c.val() + 1 == self.t as u128 {
                    out.push((y, c.len()));
                }
            }
        }
        out
    }

    fn host(&mut self) {
        let s = self.automaton.schedule();
        let Ok(tn) = s.t(self.next_phase) else { return };
        let fire = self.next_phase >= 1 && self.t + 1 == tn;
        let stage = self.t == tn;
        if !fire && !stage {
            return;
        }
        let walls = self.initialized_walls();
        if fire {
            for &(x, _) in &walls {
                let i = self.left(x, 1);
                if let LayeredCell::Composite(l) = self.decode(i) {
                    if l.merge.sym == MergeSym::M {
                        self.edit(i, |l| l.comp = Comp::Fire);
                        self.events.push(HostEvent::Fired { t: self.t, wall: x });
                    }
                }
            }
        }
        if stage {
            let m = self.next_phase;
            for &(y, len) in &walls {
                self.stage(y, len, m);
                self.arm(y, len, m + 1);
            }
            self.next_phase += 1;
        }
    }

    fn stage(&mut self, y: usize, len: usize, m: u64) {
        let w = self.automaton.program().word(m);
        let k = w.len();
        if k == 0 || k + 1 > len {
            self.events.push(HostEvent::StagingSkipped { t: self.t, wall: y, phase: m, need: k + 1, have: len });
            return;
        }
        for j in 1..=len {
            let i = self.left(y, j);
            self.edit(i, |l| l.copy = CopyCell::Empty);
        }
        for j in 1..=k {
            let a = w[(k - j % k) % k];
            let i = self.left(y, j);
            self.edit(i, |l| l.output = Some(a));
        }
        // block cell H+i (H = y−k−1) carries the letter for position H−i
        for i in 0..k {
            let a = w[(2 * k - 1 - i % k) % k];
            let c = if i == 0 { CopyCell::Head(a) } else { CopyCell::Letter(a) };
            let p = self.left(y, k + 1 - i);
            self.edit(p, |l| l.copy = c);
        }
        self.events.push(HostEvent::Staged { t: self.t, wall: y, phase: m });
    }

    fn arm(&mut self, y: usize, len: usize, n: u64) {
        let Some(v) = merge_start_value(n) else { return };
        let digits = MergeDigits::of(v).0;
        if digits.len() > len {
            return;
        }
        for j in 1..=len {
            let i = self.left(y, j);
            self.edit(i, |l| l.merge.sym = MergeSym::Empty);
        }
        for (j, &d) in digits.iter().rev().enumerate() {
            let i = self.left(y, j + 1);
            self.edit(i, |l| l.merge.sym = MergeSym::Digit(d));
        }
        let i = self.left(y, 1);
        self.edit(i, |l| l.comp = Comp::Launch);
        self.events.push(HostEvent::MergeArmed { t: self.t, wall: y, phase: n });
    }
}

/// The time counter attached on the left of the wall at `y` (empty when there is none).
pub fn attached_counter(a: &ConstructionAutomaton, cells: &[Cell], y: usize) -> CounterDigits {
    let l = cells.len();
    let codec = a.codec();
    let mut digits = Vec::new();
    for j in 1..l {
        match codec.decode_lossy(cells[(y + l - j) % l]) {
            LayeredCell::Composite(Layers { time: Some(d), .. }) => digits.push(d),
            _ => break,
        }
    }
    digits.reverse();
    CounterDigits(digits)
}

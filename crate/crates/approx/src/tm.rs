use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::ApproxError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Move {
    L,
    S,
    R,
}

/// `TM = (Q, Γ, #, q0, δ, Q_F)` in the shared JSON layout; `delta` keys are `"state,symbol"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TuringMachineSpec {
    pub states: Vec<String>,
    pub tape: Vec<String>,
    pub blank: String,
    pub initial: String,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub delta: BTreeMap<String, (String, String, Move)>,
}

/// Index form of a validated machine.
#[derive(Clone, Debug)]
pub struct CompiledTm {
    pub states: usize,
    pub symbols: usize,
    pub blank: usize,
    pub initial: usize,
    pub finals: Vec<bool>,
    /// `delta[q * symbols + a]`, `None` on final states.
    pub delta: Vec<Option<(usize, usize, Move)>>,
}

impl TuringMachineSpec {
    pub fn from_json(s: &str) -> Result<Self, ApproxError> {
        let tm: TuringMachineSpec =
            serde_json::from_str(s).map_err(|e| ApproxError::Invalid(format!("Turing machine JSON: {e}")))?;
        tm.compile()?;
        Ok(tm)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Checks that `δ` is total on non-final states and refers only to declared names.
    pub fn compile(&self) -> Result<CompiledTm, ApproxError> {
        let idx = |names: &[String], what: &str| -> Result<HashMap<String, usize>, ApproxError> {
            let mut m = HashMap::new();
            for (i, n) in names.iter().enumerate() {
                if m.insert(n.clone(), i).is_some() {
                    return Err(ApproxError::Invalid(format!("duplicate {what} {n:?}")));
                }
            }
            Ok(m)
        };
        let qs = idx(&self.states, "state")?;
        let gs = idx(&self.tape, "tape symbol")?;
        let look = |m: &HashMap<String, usize>, n: &str, what: &str| {
            m.get(n).copied().ok_or_else(|| ApproxError::Invalid(format!("unknown {what} {n:?}")))
        };
        let blank = look(&gs, &self.blank, "blank symbol")?;
        let initial = look(&qs, &self.initial, "initial state")?;
        let mut finals = vec![false; self.states.len()];
        for f in &self.finals {
            finals[look(&qs, f, "final state")?] = true;
        }
        let mut delta = vec![None; self.states.len() * self.tape.len()];
        for (key, (q2, b, mv)) in &self.delta {
            let (q, a) = key
                .split_once(',')
                .ok_or_else(|| ApproxError::Invalid(format!("delta key {key:?} is not \"state,symbol\"")))?;
            let (q, a) = (look(&qs, q, "state")?, look(&gs, a, "tape symbol")?);
            if finals[q] {
                return Err(ApproxError::Invalid(format!("transition out of final state in {key:?}")));
            }
            delta[q * self.tape.len() + a] = Some((look(&qs, q2, "state")?, look(&gs, b, "tape symbol")?, *mv));
        }
        for q in 0..self.states.len() {
            for a in 0..self.tape.len() {
                if !finals[q] && delta[q * self.tape.len() + a].is_none() {
                    return Err(ApproxError::Invalid(format!(
                        "delta undefined on ({}, {})",
                        self.states[q], self.tape[a]
                    )));
                }
            }
        }
        Ok(CompiledTm { states: self.states.len(), symbols: self.tape.len(), blank, initial, finals, delta })
    }

    /// A machine that walks right for `k` steps and halts.
    pub fn halting_after(k: usize) -> Self {
        let states: Vec<String> = (0..=k).map(|i| format!("q{i}")).collect();
        let mut delta = BTreeMap::new();
        for i in 0..k {
            for a in ["#", "1"] {
                delta.insert(format!("q{i},{a}"), (format!("q{}", i + 1), "1".to_string(), Move::R));
            }
        }
        TuringMachineSpec {
            states,
            tape: vec!["#".into(), "1".into()],
            blank: "#".into(),
            initial: "q0".into(),
            finals: vec![format!("q{k}")],
            delta,
        }
    }

    /// A machine that never halts: it bounces between two cells.
    pub fn looping() -> Self {
        let mut delta = BTreeMap::new();
        for a in ["#", "1"] {
            delta.insert(format!("a,{a}"), ("b".to_string(), "1".to_string(), Move::R));
            delta.insert(format!("b,{a}"), ("a".to_string(), a.to_string(), Move::L));
        }
        TuringMachineSpec {
            states: vec!["a".into(), "b".into(), "h".into()],
            tape: vec!["#".into(), "1".into()],
            blank: "#".into(),
            initial: "a".into(),
            finals: vec!["h".into()],
            delta,
        }
    }
}

/// Live configuration on a two-way infinite tape.
#[derive(Clone, Debug)]
pub struct TmRun {
    pub state: usize,
    pub head: i64,
    pub steps: u64,
    tape: HashMap<i64, usize>,
}

impl CompiledTm {
    pub fn start(&self) -> TmRun {
        TmRun { state: self.initial, head: 0, steps: 0, tape: HashMap::new() }
    }

    pub fn halted(&self, r: &TmRun) -> bool {
        self.finals[r.state]
    }

    pub fn read(&self, r: &TmRun, pos: i64) -> usize {
        r.tape.get(&pos).copied().unwrap_or(self.blank)
    }

    /// One transition; false when already halted.
    pub fn step(&self, r: &mut TmRun) -> bool {
        if self.finals[r.state] {
            return false;
        }
        let a = self.read(r, r.head);
        let (q, b, mv) = self.delta[r.state * self.symbols + a].expect("delta is total");
        r.tape.insert(r.head, b);
        r.state = q;
        r.head += match mv {
            Move::L => -1,
            Move::S => 0,
            Move::R => 1,
        };
        r.steps += 1;
        true
    }

    /// Number of steps to halt on the empty tape, if within `limit`.
    pub fn halting_time(&self, limit: u64) -> Option<u64> {
        let mut r = self.start();
        while !self.halted(&r) {
            if r.steps >= limit {
                return None;
            }
            self.step(&mut r);
        }
        Some(r.steps)
    }

    /// Tape cells visited so far span.
    pub fn tape_span(&self, r: &TmRun) -> (i64, i64) {
        let lo = r.tape.keys().copied().min().unwrap_or(0).min(r.head);
        let hi = r.tape.keys().copied().max().unwrap_or(0).max(r.head);
        (lo, hi)
    }
}

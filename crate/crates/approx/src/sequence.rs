use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use lm_measures::{Alphabet, CylinderTable, MeasureSource, PeriodicOrbitMeasure, Word, Q};
use serde::{Deserialize, Serialize};

use crate::cover::{CoverState, DEFAULT_COVER_MAX_LEN};
use crate::descriptor::{DistanceDescriptor, Sigma2Descriptor};
use crate::tm::{CompiledTm, TuringMachineSpec};
use crate::ApproxError;

/// A deterministic computable sequence of words `(w_n)` over an alphabet `B`.
#[derive(Clone)]
pub enum WordSequenceProgram {
    /// `words[n]` for `n < len`, then cycling through `words[cycle_from..]`.
    Explicit { alphabet: Alphabet, words: Vec<Word>, cycle_from: usize },
    /// `words[n mod len]`.
    Alternating { alphabet: Alphabet, words: Vec<Word> },
    Generated { alphabet: Alphabet, label: String, f: Arc<dyn Fn(u64) -> Word + Send + Sync> },
    Cover(Arc<CoverProgram>),
    Rice(Arc<RiceProgram>),
    Padded(Arc<PaddedProgram>),
    Interleaved(Arc<CesaroPlan>),
}

impl fmt::Debug for WordSequenceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordSequenceProgram({})", self.describe())
    }
}

impl WordSequenceProgram {
    pub fn constant(alphabet: &Alphabet, w: &str) -> Result<Self, ApproxError> {
        WordSequenceProgram::explicit(alphabet, &[w], 0)
    }

    pub fn explicit(alphabet: &Alphabet, words: &[&str], cycle_from: usize) -> Result<Self, ApproxError> {
        let words = parse_words(alphabet, words)?;
        if cycle_from >= words.len() {
            return Err(ApproxError::Invalid("cycle_from must index a listed word".into()));
        }
        Ok(WordSequenceProgram::Explicit { alphabet: alphabet.clone(), words, cycle_from })
    }

    pub fn alternating(alphabet: &Alphabet, words: &[&str]) -> Result<Self, ApproxError> {
        let words = parse_words(alphabet, words)?;
        Ok(WordSequenceProgram::Alternating { alphabet: alphabet.clone(), words })
    }

    pub fn generated(alphabet: &Alphabet, label: &str, f: impl Fn(u64) -> Word + Send + Sync + 'static) -> Self {
        WordSequenceProgram::Generated { alphabet: alphabet.clone(), label: label.into(), f: Arc::new(f) }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            WordSequenceProgram::Explicit { alphabet, .. }
            | WordSequenceProgram::Alternating { alphabet, .. }
            | WordSequenceProgram::Generated { alphabet, .. } => alphabet,
            WordSequenceProgram::Cover(c) => c.desc.alphabet(),
            WordSequenceProgram::Rice(r) => r.halt_seq.alphabet(),
            WordSequenceProgram::Padded(p) => p.inner.alphabet(),
            WordSequenceProgram::Interleaved(c) => c.w.alphabet(),
        }
    }

    /// `w_n`
    pub fn word(&self, n: u64) -> Word {
        match self {
            WordSequenceProgram::Explicit { words, cycle_from, .. } => {
                let n = n as usize;
                if n < words.len() {
                    words[n].clone()
                } else {
                    let c = words.len() - cycle_from;
                    words[cycle_from + (n - cycle_from) % c].clone()
                }
            }
            WordSequenceProgram::Alternating { words, .. } => words[(n % words.len() as u64) as usize].clone(),
            WordSequenceProgram::Generated { f, .. } => f(n),
            WordSequenceProgram::Cover(c) => c.word(n),
            WordSequenceProgram::Rice(r) => r.word(n),
            WordSequenceProgram::Padded(p) => p.word(n),
            WordSequenceProgram::Interleaved(c) => c.word(n),
        }
    }

    pub fn describe(&self) -> String {
        let a = self.alphabet();
        let list = |ws: &[Word]| ws.iter().map(|w| a.format_word(w)).collect::<Vec<_>>().join(",");
        match self {
            WordSequenceProgram::Explicit { words, cycle_from, .. } => format!("explicit[{}]@{cycle_from}", list(words)),
            WordSequenceProgram::Alternating { words, .. } => format!("alternating[{}]", list(words)),
            WordSequenceProgram::Generated { label, .. } => format!("generated:{label}"),
            WordSequenceProgram::Cover(c) => format!("cover:{}", c.desc.name()),
            WordSequenceProgram::Rice(r) => format!("rice({}|{})", r.halt_seq.describe(), r.loop_seq.describe()),
            WordSequenceProgram::Padded(p) => format!("padded({})", p.inner.describe()),
            WordSequenceProgram::Interleaved(c) => format!("cesaro({}|{})", c.w.describe(), c.wp.describe()),
        }
    }
}

fn parse_words(alphabet: &Alphabet, words: &[&str]) -> Result<Vec<Word>, ApproxError> {
    if words.is_empty() {
        return Err(ApproxError::Invalid("word list must be nonempty".into()));
    }
    words
        .iter()
        .map(|w| {
            let w = alphabet.parse_word(w)?;
            if w.is_empty() {
                return Err(ApproxError::Invalid("sequence words must be nonempty".into()));
            }
            Ok(w)
        })
        .collect()
}

/// The sequence emitted by a polygonal cover, enumerated on demand.
pub struct CoverProgram {
    desc: Arc<dyn Sigma2Descriptor>,
    state: Mutex<CoverState>,
}

impl CoverProgram {
    pub fn new(desc: Arc<dyn Sigma2Descriptor>) -> Self {
        let state = Mutex::new(CoverState::new(desc.clone(), DEFAULT_COVER_MAX_LEN));
        CoverProgram { desc, state }
    }

    fn word(&self, n: u64) -> Word {
        let mut s = self.state.lock().expect("cover state");
        while s.emitted_len() as u64 <= n {
            let t = s.t();
            s.run_until((2 * t).max(1));
        }
        s.emitted_word(n as usize).clone()
    }
}

/// `w''_n = seqA(n)` if the machine halts on the empty input within `n` steps, else `seqB(n)`.
pub struct RiceProgram {
    pub machine: TuringMachineSpec,
    compiled: CompiledTm,
    pub halt_seq: WordSequenceProgram,
    pub loop_seq: WordSequenceProgram,
    memo: Mutex<(u64, Option<u64>)>,
}

impl RiceProgram {
    fn halted_within(&self, n: u64) -> bool {
        let mut m = self.memo.lock().expect("memo");
        if let Some(h) = m.1 {
            return h <= n;
        }
        if n > m.0 {
            m.1 = self.compiled.halting_time(n);
            m.0 = n;
        }
        m.1.is_some_and(|h| h <= n)
    }

    fn word(&self, n: u64) -> Word {
        if self.halted_within(n) {
            self.halt_seq.word(n)
        } else {
            self.loop_seq.word(n)
        }
    }
}

pub fn rice_reduction(
    machine: &TuringMachineSpec,
    seq_a: WordSequenceProgram,
    seq_b: WordSequenceProgram,
) -> Result<WordSequenceProgram, ApproxError> {
    if seq_a.alphabet() != seq_b.alphabet() {
        return Err(ApproxError::Invalid("both sequences must share an alphabet".into()));
    }
    let compiled = machine.compile()?;
    Ok(WordSequenceProgram::Rice(Arc::new(RiceProgram {
        machine: machine.clone(),
        compiled,
        halt_seq: seq_a,
        loop_seq: seq_b,
        memo: Mutex::new((0, None)),
    })))
}

/// `seq'(n) = seq(r(n))`, where `r` advances by at most one per index and only onto words with `|w|² ≤ n`.
pub struct PaddedProgram {
    pub inner: WordSequenceProgram,
    /// `r(0), r(1), …` computed so far, with `|seq(r(n)+1)|` cached alongside.
    memo: Mutex<(Vec<u64>, HashMap<u64, u64>)>,
}

impl PaddedProgram {
    /// `r(n)`
    pub fn source_index(&self, n: u64) -> u64 {
        let mut g = self.memo.lock().expect("memo");
        let (rs, lens) = &mut *g;
        if rs.is_empty() {
            rs.push(0);
        }
        while rs.len() as u64 <= n {
            let i = rs.len() as u64;
            let r = *rs.last().expect("nonempty");
            let len = *lens.entry(r + 1).or_insert_with(|| self.inner.word(r + 1).len() as u64);
            rs.push(if len * len <= i { r + 1 } else { r });
        }
        rs[n as usize]
    }

    fn word(&self, n: u64) -> Word {
        self.inner.word(self.source_index(n))
    }
}

pub fn pad_for_space(seq: WordSequenceProgram) -> WordSequenceProgram {
    WordSequenceProgram::Padded(Arc::new(PaddedProgram { inner: seq, memo: Mutex::new((Vec::new(), HashMap::new())) }))
}

/// Points of `⋃_{n ∈ [from, to)} [μ̂_{w_n}, μ̂_{w_{n+1}}]` at `grid` equal steps per segment, as depth-`depth`
/// tables. `grid = 1` gives only the endpoints. Repeated points are listed once.
pub fn limit_set_points(
    seq: &WordSequenceProgram,
    from: u64,
    to: u64,
    grid: u32,
    depth: usize,
) -> Result<Vec<CylinderTable>, ApproxError> {
    if from > to || grid == 0 {
        return Err(ApproxError::Invalid("need from ≤ to and grid ≥ 1".into()));
    }
    let a = seq.alphabet().clone();
    let table = |w: Word| -> Result<CylinderTable, ApproxError> {
        Ok(MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), w)?).table(depth)?)
    };
    let mut out: Vec<CylinderTable> = Vec::new();
    let mut push = |t: CylinderTable| {
        if !out.contains(&t) {
            out.push(t);
        }
    };
    if from == to {
        push(table(seq.word(from))?);
        return Ok(out);
    }
    let mut left = table(seq.word(from))?;
    for n in from..to {
        let right = table(seq.word(n + 1))?;
        if left == right {
            push(left.clone());
        } else {
            for j in 0..=grid {
                let t = Q::new(j.into(), grid.into());
                push(CylinderTable::mix(&right, &left, &t)?);
            }
        }
        left = right;
    }
    Ok(out)
}

/// Interleaving of `(w_n)` (describing `A`) and `(w'_n)` (describing `A' ⊂ A`) whose Cesàro means follow `A'`.
pub struct CesaroPlan {
    pub w: WordSequenceProgram,
    pub wp: WordSequenceProgram,
    cover: Mutex<CoverState>,
    blocks: Mutex<HashMap<u32, Arc<CesaroBlock>>>,
}

/// Block `i` covers `n ∈ [|A|^{i²}, |A|^{(i+1)²})`; its first `|path|` indices emit the path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CesaroBlock {
    pub i: u32,
    pub start: u64,
    pub end: u64,
    /// The level `n_i` whose ball union links the three points.
    pub level: u64,
    pub path: Vec<Word>,
    pub tail: Word,
}

/// Cover budget used to build the `V_k^t` behind Cesàro paths.
pub const CESARO_COVER_BUDGET: u64 = 64;

impl CesaroPlan {
    pub fn new(
        w: WordSequenceProgram,
        wp: WordSequenceProgram,
        desc: Arc<dyn Sigma2Descriptor>,
        budget: u64,
    ) -> Result<Self, ApproxError> {
        if w.alphabet() != wp.alphabet() || w.alphabet() != desc.alphabet() {
            return Err(ApproxError::Invalid("sequences and descriptor must share an alphabet".into()));
        }
        let mut cover = CoverState::new(desc, DEFAULT_COVER_MAX_LEN);
        cover.run_until(budget.max(1));
        Ok(CesaroPlan { w, wp, cover: Mutex::new(cover), blocks: Mutex::new(HashMap::new()) })
    }

    fn size(&self) -> u64 {
        self.w.alphabet().size() as u64
    }

    pub fn block_bounds(&self, i: u32) -> (u64, u64) {
        let k = self.size();
        (k.pow(i * i), k.pow((i + 1) * (i + 1)))
    }

    /// Index of the block containing `n ≥ 1`.
    pub fn block_of(&self, n: u64) -> u32 {
        let mut i = 0;
        while self.block_bounds(i).1 <= n {
            i += 1;
        }
        i
    }

    pub fn block(&self, i: u32) -> Arc<CesaroBlock> {
        if let Some(b) = self.blocks.lock().expect("blocks").get(&i) {
            return b.clone();
        }
        let (start, end) = self.block_bounds(i);
        let (a, mid, b) = (self.wp.word(i as u64), self.w.word(i as u64), self.wp.word(i as u64 + 1));
        let mut cover = self.cover.lock().expect("cover");
        let top = cover.t();
        let mut found = None;
        for level in cover.candidate_levels(top) {
            let first = cover.connect_points(level, &a, &mid);
            let second = cover.connect_points(level, &mid, &b);
            if let (Some(mut p), Some(q)) = (first, second) {
                if p.is_empty() && q.is_empty() {
                    p = vec![mid.clone()];
                } else {
                    for u in q {
                        if p.last() != Some(&u) {
                            p.push(u);
                        }
                    }
                }
                found = Some((level, p));
                break;
            }
        }
        let (level, path) = found.expect("levels with infinite radius always connect");
        let blk = Arc::new(CesaroBlock { i, start, end, level, path, tail: b });
        self.blocks.lock().expect("blocks").insert(i, blk.clone());
        blk
    }

    fn word(&self, n: u64) -> Word {
        if n == 0 {
            return self.wp.word(0);
        }
        let b = self.block(self.block_of(n));
        let off = (n - b.start) as usize;
        if off < b.path.len() {
            b.path[off].clone()
        } else {
            b.tail.clone()
        }
    }
}

pub fn cesaro_interleave(
    seq_w: WordSequenceProgram,
    seq_wp: WordSequenceProgram,
    desc: Arc<dyn Sigma2Descriptor>,
) -> Result<WordSequenceProgram, ApproxError> {
    Ok(WordSequenceProgram::Interleaved(Arc::new(CesaroPlan::new(seq_w, seq_wp, desc, CESARO_COVER_BUDGET)?)))
}

/// JSON form of a program.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProgramJson {
    Explicit {
        words: Vec<String>,
        #[serde(default)]
        cycle_from: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
    Alternating {
        words: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
    Cover {
        descriptor: String,
    },
    Rice {
        machine: MachineRef,
        halt_seq: Box<ProgramJson>,
        loop_seq: Box<ProgramJson>,
    },
    Padded {
        inner: Box<ProgramJson>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MachineRef {
    Inline(TuringMachineSpec),
    File(String),
}

fn alphabet_for(sym: &Option<Vec<char>>, words: &[String]) -> Result<Alphabet, ApproxError> {
    if let Some(s) = sym {
        return Ok(Alphabet::new(s.clone())?);
    }
    let mut seen: Vec<char> = words.iter().flat_map(|w| w.chars()).collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.iter().all(|c| *c == '0' || *c == '1') {
        Ok(Alphabet::binary())
    } else {
        Ok(Alphabet::new(seen)?)
    }
}

impl ProgramJson {
    pub fn build(&self) -> Result<WordSequenceProgram, ApproxError> {
        match self {
            ProgramJson::Explicit { words, cycle_from, alphabet } => {
                let a = alphabet_for(alphabet, words)?;
                let ws: Vec<&str> = words.iter().map(String::as_str).collect();
                WordSequenceProgram::explicit(&a, &ws, *cycle_from)
            }
            ProgramJson::Alternating { words, alphabet } => {
                let a = alphabet_for(alphabet, words)?;
                let ws: Vec<&str> = words.iter().map(String::as_str).collect();
                WordSequenceProgram::alternating(&a, &ws)
            }
            ProgramJson::Cover { descriptor } => {
                let d: Arc<dyn Sigma2Descriptor> = Arc::new(DistanceDescriptor::builtin(descriptor)?);
                Ok(WordSequenceProgram::Cover(Arc::new(CoverProgram::new(d))))
            }
            ProgramJson::Rice { machine, halt_seq, loop_seq } => {
                let tm = match machine {
                    MachineRef::Inline(tm) => tm.clone(),
                    MachineRef::File(path) => {
                        let s = std::fs::read_to_string(path)
                            .map_err(|e| ApproxError::Invalid(format!("cannot read machine {path:?}: {e}")))?;
                        TuringMachineSpec::from_json(&s)?
                    }
                };
                rice_reduction(&tm, halt_seq.build()?, loop_seq.build()?)
            }
            ProgramJson::Padded { inner } => Ok(pad_for_space(inner.build()?)),
        }
    }
}

pub fn program_from_json(s: &str) -> Result<WordSequenceProgram, ApproxError> {
    let p: ProgramJson = serde_json::from_str(s).map_err(|e| ApproxError::Invalid(format!("sequence JSON: {e}")))?;
    p.build()
}

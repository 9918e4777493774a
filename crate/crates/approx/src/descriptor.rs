use std::collections::HashMap;
use std::sync::Mutex;

use lm_measures::{Alphabet, Word, Q};

use crate::orbit::{segment_distance_lower, SparseMeasure};
use crate::ApproxError;

/// A Σ₂-computable compact set given by its approximating functions `f_n`.
pub trait Sigma2Descriptor: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// `a(n, m, w)` with `|f_n(μ̂_w) − a(n, m, w)| ≤ 1/m`.
    fn approx(&self, n: u64, m: u64, w: &[u8]) -> Q;

    /// `b(m)`: `d(μ, ν) < b(m)` implies `|f_n(μ) − f_n(ν)| ≤ 1/m`.
    fn modulus(&self, m: u64) -> Q;

    /// True when `f_n` does not depend on `n`, so one evaluation per time stands for every `t'`.
    fn index_free(&self) -> bool {
        false
    }

    fn name(&self) -> String;
}

/// The target of a builtin distance descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSet {
    /// `{μ̂_w}`
    Singleton(Word),
    /// `[μ̂_a, μ̂_b]`
    Segment(Word, Word),
}

/// `f_n = d(·, X)` for a singleton or a segment of periodic-orbit measures.
///
/// `a(n, m, w)` is evaluated at depth `D = ⌈log₂ m⌉ + 1`, so truncation costs at most `1/(2m)`; for
/// segments the mixture weight runs over a grid of `2^D` steps, costing at most another `1/(2m)`.
pub struct DistanceDescriptor {
    alphabet: Alphabet,
    target: TargetSet,
    cache: Mutex<HashMap<(Word, usize), Q>>,
}

impl DistanceDescriptor {
    pub fn new(alphabet: Alphabet, target: TargetSet) -> Result<Self, ApproxError> {
        let words: Vec<&Word> = match &target {
            TargetSet::Singleton(w) => vec![w],
            TargetSet::Segment(a, b) => vec![a, b],
        };
        for w in words {
            if w.is_empty() {
                return Err(ApproxError::Invalid("target word must be nonempty".into()));
            }
            alphabet.check_word(w)?;
        }
        Ok(DistanceDescriptor { alphabet, target, cache: Mutex::new(HashMap::new()) })
    }

    /// `singleton:<word>` or `segment:<word>,<word>` over the binary alphabet unless the words need more symbols.
    pub fn builtin(spec: &str) -> Result<Self, ApproxError> {
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| ApproxError::Invalid(format!("unknown descriptor {spec:?}")))?;
        let alphabet = infer(arg.chars().filter(|&c| c != ','))?;
        let target = match kind {
            "singleton" => TargetSet::Singleton(alphabet.parse_word(arg)?),
            "segment" => {
                let (a, b) = arg
                    .split_once(',')
                    .ok_or_else(|| ApproxError::Invalid("segment needs two words".into()))?;
                TargetSet::Segment(alphabet.parse_word(a)?, alphabet.parse_word(b)?)
            }
            _ => return Err(ApproxError::Invalid(format!("unknown descriptor kind {kind:?}"))),
        };
        DistanceDescriptor::new(alphabet, target)
    }

    pub fn target(&self) -> &TargetSet {
        &self.target
    }

    /// Lower bound of `d(μ̂_w, X)` at `depth`, exact up to the grid for segments.
    pub fn distance_lower(&self, w: &[u8], depth: usize) -> Q {
        let key = (w.to_vec(), depth);
        if let Some(v) = self.cache.lock().expect("cache").get(&key) {
            return v.clone();
        }
        let k = self.alphabet.size();
        let x = SparseMeasure::orbit(k, w, depth);
        let v = match &self.target {
            TargetSet::Singleton(p) => x.distance(&SparseMeasure::orbit(k, p, depth), depth).0,
            TargetSet::Segment(a, b) => {
                let (a, b) = (SparseMeasure::orbit(k, a, depth), SparseMeasure::orbit(k, b, depth));
                segment_distance_lower(&x, &a, &b, depth, 1i128 << depth)
            }
        };
        self.cache.lock().expect("cache").insert(key, v.clone());
        v
    }
}

fn infer(chars: impl Iterator<Item = char>) -> Result<Alphabet, ApproxError> {
    let mut seen: Vec<char> = chars.collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.iter().all(|c| *c == '0' || *c == '1') {
        return Ok(Alphabet::binary());
    }
    Ok(Alphabet::new(seen)?)
}

/// `⌈log₂ m⌉ + 1`, the depth at which `2^{−D} ≤ 1/(2m)`.
pub fn precision_depth(m: u64) -> usize {
    let m = m.max(1);
    (64 - (m - 1).leading_zeros()) as usize + 1
}

impl Sigma2Descriptor for DistanceDescriptor {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn approx(&self, _n: u64, m: u64, w: &[u8]) -> Q {
        self.distance_lower(w, precision_depth(m).min(crate::orbit::MAX_SPARSE_DEPTH))
    }

    fn modulus(&self, m: u64) -> Q {
        Q::new(1.into(), m.max(1).into())
    }

    fn index_free(&self) -> bool {
        true
    }

    fn name(&self) -> String {
        let f = |w: &Word| self.alphabet.format_word(w);
        match &self.target {
            TargetSet::Singleton(w) => format!("singleton:{}", f(w)),
            TargetSet::Segment(a, b) => format!("segment:{},{}", f(a), f(b)),
        }
    }
}

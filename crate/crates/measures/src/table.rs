use num_traits::{One, Zero};

use crate::alphabet::{Alphabet, Word};
use crate::rational::{fmt_q, Q};
use crate::MeasureError;

/// Cylinder probabilities of a shift-invariant measure for every word of length at most `depth`.
///
/// `levels[n][rank(w)]` holds `μ([w])` for `|w| = n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderTable {
    alphabet: Alphabet,
    depth: usize,
    levels: Vec<Vec<Q>>,
}

impl CylinderTable {
    /// Builds a table from a closure and checks the invariants.
    pub fn from_fn(
        alphabet: &Alphabet,
        depth: usize,
        mut f: impl FnMut(&[u8]) -> Q,
    ) -> Result<Self, MeasureError> {
        let t = Self::from_fn_unchecked(alphabet, depth, |w| f(w));
        t.validate()?;
        Ok(t)
    }

    pub(crate) fn from_fn_unchecked(alphabet: &Alphabet, depth: usize, mut f: impl FnMut(&[u8]) -> Q) -> Self {
        let levels = (0..=depth)
            .map(|n| alphabet.words(n).map(|w| f(&w)).collect())
            .collect();
        CylinderTable { alphabet: alphabet.clone(), depth, levels }
    }

    /// Builds a table from explicit level vectors; used by samplers that count exactly.
    pub fn from_levels(alphabet: &Alphabet, levels: Vec<Vec<Q>>) -> Result<Self, MeasureError> {
        if levels.is_empty() {
            return Err(MeasureError::Invalid("table needs at least level 0".into()));
        }
        for (n, l) in levels.iter().enumerate() {
            if l.len() != alphabet.count(n) {
                return Err(MeasureError::Invalid(format!("level {n} has wrong size")));
            }
        }
        let t = CylinderTable { alphabet: alphabet.clone(), depth: levels.len() - 1, levels };
        t.validate()?;
        Ok(t)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, n: usize) -> &[Q] {
        &self.levels[n]
    }

    pub fn get(&self, w: &[u8]) -> Result<&Q, MeasureError> {
        if w.len() > self.depth {
            return Err(MeasureError::DepthExceeded { requested: w.len(), available: self.depth });
        }
        self.alphabet.check_word(w)?;
        Ok(&self.levels[w.len()][self.alphabet.rank(w)])
    }

    /// Same table cut down to a smaller depth.
    pub fn truncate(&self, depth: usize) -> Self {
        assert!(depth <= self.depth);
        CylinderTable {
            alphabet: self.alphabet.clone(),
            depth,
            levels: self.levels[..=depth].to_vec(),
        }
    }

    /// Checks total mass, range and both marginal consistencies, exactly.
    pub fn validate(&self) -> Result<(), MeasureError> {
        let k = self.alphabet.size();
        if !self.levels[0][0].is_one() {
            return Err(MeasureError::NotInvariant("empty word must have mass 1".into()));
        }
        for n in 0..=self.depth {
            for (r, p) in self.levels[n].iter().enumerate() {
                if *p < Q::zero() || *p > Q::one() {
                    let w = self.alphabet.unrank(r, n);
                    return Err(MeasureError::Invalid(format!(
                        "probability of {:?} is {} (outside [0,1])",
                        self.alphabet.format_word(&w),
                        fmt_q(p)
                    )));
                }
            }
        }
        for n in 0..self.depth {
            let kn = self.alphabet.count(n);
            for r in 0..kn {
                let p = &self.levels[n][r];
                // ua has rank r*k + a; au has rank a*k^n + r
                let right: Q = (0..k).map(|a| &self.levels[n + 1][r * k + a]).sum();
                let left: Q = (0..k).map(|a| &self.levels[n + 1][a * kn + r]).sum();
                if &right != p || &left != p {
                    let w = self.alphabet.unrank(r, n);
                    return Err(MeasureError::NotInvariant(format!(
                        "marginals of {:?} do not add up",
                        self.alphabet.format_word(&w)
                    )));
                }
            }
        }
        Ok(())
    }

    /// `t·a + (1−t)·b`, both tables over the same alphabet.
    pub fn mix(a: &CylinderTable, b: &CylinderTable, t: &Q) -> Result<CylinderTable, MeasureError> {
        if a.alphabet != b.alphabet {
            return Err(MeasureError::AlphabetMismatch("mixing tables over different alphabets".into()));
        }
        let depth = a.depth.min(b.depth);
        let s = Q::one() - t;
        let levels = (0..=depth)
            .map(|n| {
                a.levels[n]
                    .iter()
                    .zip(&b.levels[n])
                    .map(|(x, y)| t * x + &s * y)
                    .collect()
            })
            .collect();
        Ok(CylinderTable { alphabet: a.alphabet.clone(), depth, levels })
    }

    /// Entries as `(word, probability)` in length-then-lexicographic order.
    pub fn entries(&self) -> impl Iterator<Item = (Word, &Q)> + '_ {
        (0..=self.depth).flat_map(move |n| {
            self.levels[n]
                .iter()
                .enumerate()
                .map(move |(r, p)| (self.alphabet.unrank(r, n), p))
        })
    }
}

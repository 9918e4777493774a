use num_traits::{One, Zero};

use crate::alphabet::{Alphabet, Word};
use crate::rational::Q;
use crate::table::CylinderTable;
use crate::MeasureError;

#[derive(Clone, Debug, PartialEq)]
pub struct BernoulliSpec {
    pub alphabet: Alphabet,
    pub weights: Vec<Q>,
}

impl BernoulliSpec {
    pub fn new(alphabet: Alphabet, weights: Vec<Q>) -> Result<Self, MeasureError> {
        if weights.len() != alphabet.size() {
            return Err(MeasureError::Invalid("one weight per symbol expected".into()));
        }
        if weights.iter().any(|w| *w < Q::zero()) {
            return Err(MeasureError::Invalid("negative weight".into()));
        }
        if weights.iter().sum::<Q>() != Q::one() {
            return Err(MeasureError::Invalid("weights must sum to 1".into()));
        }
        Ok(BernoulliSpec { alphabet, weights })
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let k = alphabet.size() as i64;
        let weights = vec![Q::new(1.into(), k.into()); alphabet.size()];
        BernoulliSpec { alphabet, weights }
    }

    pub fn full_support(&self) -> bool {
        self.weights.iter().all(|w| *w > Q::zero())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSpec {
    pub alphabet: Alphabet,
    pub p: Vec<Vec<Q>>,
    pub pi: Vec<Q>,
}

impl MarkovSpec {
    pub fn new(alphabet: Alphabet, p: Vec<Vec<Q>>, pi: Vec<Q>) -> Result<Self, MeasureError> {
        let k = alphabet.size();
        if p.len() != k || p.iter().any(|r| r.len() != k) || pi.len() != k {
            return Err(MeasureError::Invalid("transition matrix and stationary vector must match the alphabet".into()));
        }
        for row in &p {
            if row.iter().any(|x| *x < Q::zero()) || row.iter().sum::<Q>() != Q::one() {
                return Err(MeasureError::Invalid("rows of P must be stochastic".into()));
            }
        }
        if pi.iter().any(|x| *x < Q::zero()) || pi.iter().sum::<Q>() != Q::one() {
            return Err(MeasureError::Invalid("pi must be a probability vector".into()));
        }
        for b in 0..k {
            let s: Q = (0..k).map(|a| &pi[a] * &p[a][b]).sum();
            if s != pi[b] {
                return Err(MeasureError::Invalid("pi is not stationary for P".into()));
            }
        }
        Ok(MarkovSpec { alphabet, p, pi })
    }

    /// Solves `πP = π` exactly for an irreducible chain.
    pub fn with_stationary(alphabet: Alphabet, p: Vec<Vec<Q>>) -> Result<Self, MeasureError> {
        let k = alphabet.size();
        if p.len() != k || p.iter().any(|r| r.len() != k) {
            return Err(MeasureError::Invalid("transition matrix must be |A|x|A|".into()));
        }
        // (P^T - I) π = 0 with the last equation replaced by Σ π = 1
        let mut m: Vec<Vec<Q>> = (0..k)
            .map(|i| {
                let mut row: Vec<Q> = (0..k).map(|j| p[j][i].clone()).collect();
                row[i] -= Q::one();
                row.push(Q::zero());
                row
            })
            .collect();
        m[k - 1] = vec![Q::one(); k + 1];
        for col in 0..k {
            let piv = (col..k).find(|&r| !m[r][col].is_zero())
                .ok_or_else(|| MeasureError::Invalid("chain has no unique stationary vector".into()))?;
            m.swap(col, piv);
            let d = m[col][col].clone();
            for x in m[col].iter_mut() {
                *x /= &d;
            }
            for r in 0..k {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in 0..=k {
                        let v = &f * &m[col][c];
                        m[r][c] -= v;
                    }
                }
            }
        }
        let pi = m.into_iter().map(|r| r[k].clone()).collect();
        MarkovSpec::new(alphabet, p, pi)
    }

    pub fn full_support(&self) -> bool {
        self.pi.iter().all(|x| *x > Q::zero()) && self.p.iter().flatten().all(|x| *x > Q::zero())
    }

    /// `P^n`
    pub fn power(&self, n: usize) -> Vec<Vec<Q>> {
        let k = self.alphabet.size();
        let mut r: Vec<Vec<Q>> = (0..k)
            .map(|i| (0..k).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
            .collect();
        for _ in 0..n {
            r = (0..k)
                .map(|i| (0..k).map(|j| (0..k).map(|l| &r[i][l] * &self.p[l][j]).sum()).collect())
                .collect();
        }
        r
    }
}

/// The invariant measure carried by the periodic orbit of `word`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicOrbitMeasure {
    pub alphabet: Alphabet,
    pub word: Word,
}

impl PeriodicOrbitMeasure {
    pub fn new(alphabet: Alphabet, word: Word) -> Result<Self, MeasureError> {
        if word.is_empty() {
            return Err(MeasureError::Invalid("periodic word must be nonempty".into()));
        }
        alphabet.check_word(&word)?;
        Ok(PeriodicOrbitMeasure { alphabet, word })
    }

    pub fn parse(alphabet: &Alphabet, s: &str) -> Result<Self, MeasureError> {
        PeriodicOrbitMeasure::new(alphabet.clone(), alphabet.parse_word(s)?)
    }

    /// Number of cyclic positions of `word` where `u` occurs.
    pub fn occurrences(&self, u: &[u8]) -> usize {
        let w = &self.word;
        let l = w.len();
        (0..l).filter(|&i| u.iter().enumerate().all(|(j, &a)| w[(i + j) % l] == a)).count()
    }

    pub fn prob(&self, u: &[u8]) -> Q {
        Q::new(self.occurrences(u).into(), self.word.len().into())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureSource {
    Bernoulli(BernoulliSpec),
    Markov(MarkovSpec),
    Periodic(PeriodicOrbitMeasure),
    Table(CylinderTable),
}

impl MeasureSource {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            MeasureSource::Bernoulli(b) => &b.alphabet,
            MeasureSource::Markov(m) => &m.alphabet,
            MeasureSource::Periodic(p) => &p.alphabet,
            MeasureSource::Table(t) => t.alphabet(),
        }
    }

    /// Largest depth answerable exactly, `None` when unbounded.
    pub fn max_depth(&self) -> Option<usize> {
        match self {
            MeasureSource::Table(t) => Some(t.depth()),
            _ => None,
        }
    }

    pub fn periodic(alphabet: &Alphabet, w: &str) -> Result<Self, MeasureError> {
        Ok(MeasureSource::Periodic(PeriodicOrbitMeasure::parse(alphabet, w)?))
    }

    pub fn uniform(alphabet: &Alphabet) -> Self {
        MeasureSource::Bernoulli(BernoulliSpec::uniform(alphabet.clone()))
    }

    /// Cylinder table of this source up to `depth`.
    pub fn table(&self, depth: usize) -> Result<CylinderTable, MeasureError> {
        if let MeasureSource::Table(t) = self {
            if depth > t.depth() {
                return Err(MeasureError::DepthExceeded { requested: depth, available: t.depth() });
            }
            return Ok(t.truncate(depth));
        }
        if let MeasureSource::Periodic(p) = self {
            return crate::sample::empirical_measure(&p.alphabet, &[p.word.clone()], depth);
        }
        let mut err = None;
        let t = CylinderTable::from_fn_unchecked(self.alphabet(), depth, |w| {
            cylinder_prob(self, w).unwrap_or_else(|e| {
                err = Some(e);
                Q::zero()
            })
        });
        match err {
            Some(e) => Err(e),
            None => Ok(t),
        }
    }
}

/// Exact `μ([u])`.
pub fn cylinder_prob(src: &MeasureSource, u: &[u8]) -> Result<Q, MeasureError> {
    src.alphabet().check_word(u)?;
    if u.is_empty() {
        return Ok(Q::one());
    }
    Ok(match src {
        MeasureSource::Bernoulli(b) => u.iter().map(|&a| &b.weights[a as usize]).product(),
        MeasureSource::Markov(m) => {
            let mut p = m.pi[u[0] as usize].clone();
            for w in u.windows(2) {
                p *= &m.p[w[0] as usize][w[1] as usize];
            }
            p
        }
        MeasureSource::Periodic(p) => p.prob(u),
        MeasureSource::Table(t) => t.get(u)?.clone(),
    })
}

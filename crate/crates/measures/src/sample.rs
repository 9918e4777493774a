use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Word};
use crate::rational::{to_f64, Q};
use crate::source::MeasureSource;
use crate::table::CylinderTable;
use crate::MeasureError;

/// Samples a ring of length `len` from a Bernoulli or Markov source.
///
/// A Markov ring is a stationary path of length `len` read cyclically; the
/// dependency across the seam is ignored.
pub fn sample_ring(src: &MeasureSource, len: usize, seed: u64) -> Result<Word, MeasureError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_ring_with(src, len, &mut rng)
}

pub fn sample_ring_with(src: &MeasureSource, len: usize, rng: &mut impl rand::Rng) -> Result<Word, MeasureError> {
    if len == 0 {
        return Err(MeasureError::Invalid("ring length must be positive".into()));
    }
    match src {
        MeasureSource::Bernoulli(b) => {
            let d = weighted(&b.weights)?;
            Ok((0..len).map(|_| d.sample(rng) as u8).collect())
        }
        MeasureSource::Markov(m) => {
            let start = weighted(&m.pi)?;
            let rows = m.p.iter().map(|r| weighted(r)).collect::<Result<Vec<_>, _>>()?;
            let mut w = Vec::with_capacity(len);
            let mut a = start.sample(rng);
            w.push(a as u8);
            for _ in 1..len {
                a = rows[a].sample(rng);
                w.push(a as u8);
            }
            Ok(w)
        }
        _ => Err(MeasureError::Invalid("only Bernoulli and Markov sources can be sampled".into())),
    }
}

fn weighted(ws: &[Q]) -> Result<WeightedIndex<f64>, MeasureError> {
    WeightedIndex::new(ws.iter().map(to_f64)).map_err(|e| MeasureError::Invalid(format!("bad weights: {e}")))
}

/// Cyclic occurrence counts, `counts[n][rank(u)]`, summed over rings.
/// Windows wrap around, so a ring shorter than `depth` is read as its periodic extension.
pub fn cyclic_counts(alphabet: &Alphabet, rings: &[Word], depth: usize) -> Result<Vec<Vec<u64>>, MeasureError> {
    let k = alphabet.size();
    let mut counts: Vec<Vec<u64>> = (0..=depth).map(|n| vec![0u64; alphabet.count(n)]).collect();
    for ring in rings {
        let l = ring.len();
        if l == 0 {
            return Err(MeasureError::Invalid("empty ring".into()));
        }
        alphabet.check_word(ring)?;
        counts[0][0] += l as u64;
        for i in 0..l {
            let mut r = 0usize;
            for n in 1..=depth {
                r = r * k + ring[(i + n - 1) % l] as usize;
                counts[n][r] += 1;
            }
        }
    }
    Ok(counts)
}

/// Average over rings of cyclic frequencies. Rings may have different lengths.
pub fn empirical_measure(alphabet: &Alphabet, rings: &[Word], depth: usize) -> Result<CylinderTable, MeasureError> {
    if rings.is_empty() {
        return Err(MeasureError::Invalid("no rings".into()));
    }
    let same_len = rings.iter().all(|r| r.len() == rings[0].len());
    if same_len {
        let counts = cyclic_counts(alphabet, rings, depth)?;
        let total = (rings.len() * rings[0].len()) as u64;
        let levels = counts
            .into_iter()
            .map(|lv| lv.into_iter().map(|c| Q::new(c.into(), total.into())).collect())
            .collect();
        return CylinderTable::from_levels(alphabet, levels);
    }
    let mut levels: Vec<Vec<Q>> = (0..=depth).map(|n| vec![Q::from_integer(0.into()); alphabet.count(n)]).collect();
    let s = Q::new(1.into(), rings.len().into());
    for ring in rings {
        let c = cyclic_counts(alphabet, std::slice::from_ref(ring), depth)?;
        for (n, lv) in c.into_iter().enumerate() {
            for (r, x) in lv.into_iter().enumerate() {
                levels[n][r] += Q::new(x.into(), ring.len().into()) * &s;
            }
        }
    }
    CylinderTable::from_levels(alphabet, levels)
}

use num_traits::{Signed, Zero};

use crate::rational::Q;
use crate::source::MeasureSource;
use crate::MeasureError;

/// `ψ_μ(n)` for Bernoulli and Markov measures.
///
/// For a Markov chain the supremum over past and future events collapses to
/// the boundary letters, giving `max_{a,b} |P^n(a,b)/π(b) − 1|`.
pub fn psi_mixing_coeff(src: &MeasureSource, n: usize) -> Result<Q, MeasureError> {
    if n == 0 {
        return Err(MeasureError::Invalid("gap must be at least 1".into()));
    }
    match src {
        MeasureSource::Bernoulli(b) => {
            if !b.full_support() {
                return Err(MeasureError::Invalid("Bernoulli measure without full support".into()));
            }
            Ok(Q::zero())
        }
        MeasureSource::Markov(m) => {
            if !m.full_support() {
                return Err(MeasureError::Invalid("Markov measure without full support".into()));
            }
            let pn = m.power(n);
            let k = m.alphabet.size();
            let mut best = Q::zero();
            for a in 0..k {
                for b in 0..k {
                    let v = (&pn[a][b] / &m.pi[b] - Q::from_integer(1.into())).abs();
                    if v > best {
                        best = v;
                    }
                }
            }
            Ok(best)
        }
        _ => Err(MeasureError::Invalid("ψ-mixing coefficient needs a Bernoulli or Markov source".into())),
    }
}

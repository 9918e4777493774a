use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::rational::{fmt_q, parse_q, Q};
use crate::source::{BernoulliSpec, MarkovSpec, MeasureSource, PeriodicOrbitMeasure};
use crate::table::CylinderTable;
use crate::MeasureError;

/// Wire form of a [`MeasureSource`]. Rationals are `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceJson {
    Bernoulli {
        weights: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
    Markov {
        #[serde(rename = "P")]
        p: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pi: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
    Periodic {
        word: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
    Table {
        depth: usize,
        entries: BTreeMap<String, String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<Vec<char>>,
    },
}

fn alphabet_or(sym: &Option<Vec<char>>, k: usize) -> Result<Alphabet, MeasureError> {
    match sym {
        Some(s) => {
            let a = Alphabet::new(s.clone())?;
            if a.size() != k {
                return Err(MeasureError::Invalid(format!("alphabet has {} symbols, data needs {k}", a.size())));
            }
            Ok(a)
        }
        None if k <= 36 => Ok(Alphabet::of_size(k)),
        None => Err(MeasureError::Invalid("alphabet field required for more than 36 symbols".into())),
    }
}

fn parse_all(v: &[String]) -> Result<Vec<Q>, MeasureError> {
    v.iter().map(|s| parse_q(s)).collect()
}

impl SourceJson {
    pub fn into_source(self) -> Result<MeasureSource, MeasureError> {
        match self {
            SourceJson::Bernoulli { weights, alphabet } => {
                let a = alphabet_or(&alphabet, weights.len())?;
                Ok(MeasureSource::Bernoulli(BernoulliSpec::new(a, parse_all(&weights)?)?))
            }
            SourceJson::Markov { p, pi, alphabet } => {
                let a = alphabet_or(&alphabet, p.len())?;
                let pm = p.iter().map(|r| parse_all(r)).collect::<Result<Vec<_>, _>>()?;
                let m = match pi {
                    Some(pi) => MarkovSpec::new(a, pm, parse_all(&pi)?)?,
                    None => MarkovSpec::with_stationary(a, pm)?,
                };
                Ok(MeasureSource::Markov(m))
            }
            SourceJson::Periodic { word, alphabet } => {
                let a = match alphabet {
                    Some(s) => Alphabet::new(s)?,
                    None => infer_alphabet(word.chars())?,
                };
                Ok(MeasureSource::Periodic(PeriodicOrbitMeasure::parse(&a, &word)?))
            }
            SourceJson::Table { depth, entries, alphabet } => {
                let a = match alphabet {
                    Some(s) => Alphabet::new(s)?,
                    None => infer_alphabet(entries.keys().flat_map(|k| k.chars()))?,
                };
                let mut parsed = BTreeMap::new();
                for (k, v) in &entries {
                    let w = a.parse_word(k)?;
                    if w.len() > depth {
                        return Err(MeasureError::Invalid(format!("entry {k:?} longer than depth {depth}")));
                    }
                    parsed.insert(w, parse_q(v)?);
                }
                let mut missing = None;
                let t = CylinderTable::from_fn(&a, depth, |w| {
                    if w.is_empty() {
                        return Q::from_integer(1.into());
                    }
                    parsed.get(w).cloned().unwrap_or_else(|| {
                        missing.get_or_insert_with(|| a.format_word(w));
                        Q::from_integer(0.into())
                    })
                });
                match (t, missing) {
                    (Ok(t), _) => Ok(MeasureSource::Table(t)),
                    (Err(e), Some(m)) => Err(MeasureError::Invalid(format!("{e} (no entry for {m:?}, read as 0)"))),
                    (Err(e), None) => Err(e),
                }
            }
        }
    }

    pub fn from_source(src: &MeasureSource) -> Self {
        let syms = Some(src.alphabet().symbols().to_vec());
        match src {
            MeasureSource::Bernoulli(b) => SourceJson::Bernoulli {
                weights: b.weights.iter().map(fmt_q).collect(),
                alphabet: syms,
            },
            MeasureSource::Markov(m) => SourceJson::Markov {
                p: m.p.iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
                pi: Some(m.pi.iter().map(fmt_q).collect()),
                alphabet: syms,
            },
            MeasureSource::Periodic(p) => SourceJson::Periodic {
                word: p.alphabet.format_word(&p.word),
                alphabet: syms,
            },
            MeasureSource::Table(t) => SourceJson::Table {
                depth: t.depth(),
                entries: t
                    .entries()
                    .filter(|(w, _)| !w.is_empty())
                    .map(|(w, p)| (t.alphabet().format_word(&w), fmt_q(p)))
                    .collect(),
                alphabet: syms,
            },
        }
    }
}

/// Binary alphabet when every symbol is `0`/`1`, otherwise the sorted set of symbols seen.
fn infer_alphabet(chars: impl Iterator<Item = char>) -> Result<Alphabet, MeasureError> {
    let mut seen: Vec<char> = chars.collect();
    seen.sort_unstable();
    seen.dedup();
    if seen.iter().all(|c| *c == '0' || *c == '1') {
        return Ok(Alphabet::binary());
    }
    Alphabet::new(seen)
}

pub fn source_from_json(s: &str) -> Result<MeasureSource, MeasureError> {
    let j: SourceJson = serde_json::from_str(s).map_err(|e| MeasureError::Invalid(format!("measure JSON: {e}")))?;
    j.into_source()
}

pub fn source_to_json(src: &MeasureSource) -> String {
    serde_json::to_string_pretty(&SourceJson::from_source(src)).expect("serializable")
}

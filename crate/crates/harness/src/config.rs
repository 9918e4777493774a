use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use lm_approx::{limit_set_points, ProgramJson, WordSequenceProgram};
use lm_construction::{AutomatonConfig, ConstructionAutomaton, Schedule, INIT, WALL};
use lm_engine::Cell;
use lm_measures::{parse_q, to_f64, Alphabet, CylinderTable, SourceJson, Q};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::HarnessError;

pub const SCHEMA: u32 = 1;

/// Cap on `L · t_max · S`, in cell updates.
pub const DEFAULT_BUDGET: u64 = 4_000_000_000;

/// Experiment description, read from JSON.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    pub automaton: AutomatonConfig,
    #[serde(default)]
    pub initial: InitialMeasure,
    #[serde(rename = "L")]
    pub l: usize,
    #[serde(rename = "S")]
    pub s: usize,
    pub times: Times,
    pub depth: usize,
    #[serde(default)]
    pub reference: ReferenceJson,
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

/// Product measure on the layered alphabet: `W` and `I` with the given weights, the rest spread
/// over composite states.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InitialMeasure {
    pub wall: String,
    pub init: String,
    pub composite: CompositeFill,
}

impl InitialMeasure {
    /// `W` and `I` weights as sampling thresholds.
    pub fn weights(&self) -> Result<(f64, f64), HarnessError> {
        let weight = |field: &str, s: &str| -> Result<Q, HarnessError> {
            let w = parse_q(s).map_err(|e| HarnessError::invalid(field, e.to_string()))?;
            if w < Q::zero() || w > Q::one() {
                return Err(HarnessError::invalid(field, "weight outside [0, 1]"));
            }
            Ok(w)
        };
        let wall = weight("initial.wall", &self.wall)?;
        let init = weight("initial.init", &self.init)?;
        if &wall + &init >= Q::one() {
            return Err(HarnessError::invalid("initial", "wall + init must leave mass for composite states"));
        }
        Ok((to_f64(&wall), to_f64(&init)))
    }
}

impl Default for InitialMeasure {
    fn default() -> Self {
        InitialMeasure { wall: "1/16".into(), init: "1/16".into(), composite: CompositeFill::Blank }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum CompositeFill {
    /// Blank auxiliary layers, uniform output letter.
    Blank,
    /// Uniform over every composite state.
    All,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum Times {
    Explicit(Vec<u64>),
    PhaseEndpoints {
        #[serde(default)]
        n_min: u64,
        n_max: u64,
        #[serde(default = "all_points")]
        points: Vec<PhasePoint>,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum PhasePoint {
    /// `T(n)`
    Start,
    /// `T(n) + K(n)`
    Settled,
    /// `T(n+1) − 1`
    End,
}

fn all_points() -> Vec<PhasePoint> {
    vec![PhasePoint::Start, PhasePoint::Settled, PhasePoint::End]
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReferenceJson {
    /// Mixtures along `[μ̂_{w_j}, μ̂_{w_{j+1}}]` for `j` within `window` of the current phase.
    /// Without `sequence`, the automaton's own sequence.
    Sequence {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        sequence: Option<ProgramJson>,
        #[serde(default = "default_grid")]
        grid: u32,
        #[serde(default = "default_window")]
        window: u64,
    },
    Target {
        measure: SourceJson,
    },
}

fn default_grid() -> u32 {
    4
}

fn default_window() -> u64 {
    1
}

impl Default for ReferenceJson {
    fn default() -> Self {
        ReferenceJson::Sequence { sequence: None, grid: default_grid(), window: default_window() }
    }
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self, HarnessError> {
        serde_json::from_str(s).map_err(|e| HarnessError::invalid("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Checks the invariants and resolves everything the run needs.
    pub fn validate(&self) -> Result<Plan, HarnessError> {
        if self.schema != SCHEMA {
            return Err(HarnessError::invalid("schema", format!("expected {SCHEMA}, got {}", self.schema)));
        }
        let automaton = Arc::new(
            self.automaton.build().map_err(|e| HarnessError::invalid("automaton", e.to_string()))?,
        );
        let schedule = automaton.schedule();
        let b = automaton.alphabet().clone();
        if b.symbols().contains(&crate::STAR) {
            return Err(HarnessError::invalid("automaton.B", format!("{:?} is reserved", crate::STAR)));
        }
        let mut symbols = b.symbols().to_vec();
        symbols.push(crate::STAR);
        let ext = Alphabet::new(symbols)?;

        let (wall, init) = self.initial.weights()?;

        if self.s == 0 {
            return Err(HarnessError::invalid("S", "need at least one ring"));
        }
        if self.depth == 0 {
            return Err(HarnessError::invalid("depth", "must be positive"));
        }
        if self.depth > self.l {
            return Err(HarnessError::invalid("depth", "exceeds the ring length"));
        }

        let phase_err = |e: lm_construction::ConstructionError| HarnessError::invalid("times", e.to_string());
        let (times, n_max) = match &self.times {
            Times::Explicit(ts) => {
                if ts.windows(2).any(|p| p[0] > p[1]) {
                    return Err(HarnessError::invalid("times.explicit", "observation times must be sorted"));
                }
                let n = ts.last().and_then(|&t| schedule.phase(t)).unwrap_or(0);
                (ts.clone(), n)
            }
            Times::PhaseEndpoints { n_min, n_max, points } => {
                if n_min > n_max {
                    return Err(HarnessError::invalid("times.phase_endpoints", "n_min > n_max"));
                }
                let mut ts = Vec::new();
                for n in *n_min..=*n_max {
                    for p in points {
                        ts.push(match p {
                            PhasePoint::Start => schedule.t(n).map_err(phase_err)?,
                            PhasePoint::Settled => schedule.t(n).map_err(phase_err)? + schedule.k(n).map_err(phase_err)?,
                            PhasePoint::End => schedule.t(n + 1).map_err(phase_err)? - 1,
                        });
                    }
                }
                ts.sort_unstable();
                ts.dedup();
                (ts, *n_max)
            }
        };
        if times.is_empty() {
            return Err(HarnessError::invalid("times", "no observation times"));
        }
        let k = schedule.k(n_max).map_err(phase_err)?;
        if (self.l as u128) < 4 * k as u128 {
            return Err(HarnessError::invalid("L", format!("need L ≥ 4·K({n_max}) = {}", 4 * k)));
        }

        let t_max = *times.last().unwrap();
        let requested = self.l as u128 * t_max.max(1) as u128 * self.s as u128;
        if requested > self.budget as u128 {
            return Err(HarnessError::Budget { requested, cap: self.budget, suggestion: self.suggest(t_max, 4 * k) });
        }

        let reference = match &self.reference {
            ReferenceJson::Sequence { sequence, grid, window } => {
                if *grid == 0 {
                    return Err(HarnessError::invalid("reference.grid", "must be positive"));
                }
                let program = match sequence {
                    Some(p) => p.build().map_err(|e| HarnessError::invalid("reference.sequence", e.to_string()))?,
                    None => automaton.program().clone(),
                };
                if program.alphabet().symbols() != b.symbols() {
                    return Err(HarnessError::invalid("reference.sequence", "alphabet differs from B"));
                }
                Reference::Sequence {
                    program,
                    grid: *grid,
                    window: *window,
                    schedule,
                    cache: Arc::new(Mutex::new(HashMap::new())),
                }
            }
            ReferenceJson::Target { measure } => {
                let src = measure
                    .clone()
                    .into_source()
                    .map_err(|e| HarnessError::invalid("reference.measure", e.to_string()))?;
                if src.alphabet().symbols() != b.symbols() {
                    return Err(HarnessError::invalid("reference.measure", "alphabet differs from B"));
                }
                Reference::Target(embed(&src.table(self.depth)?, &ext)?)
            }
        };

        Ok(Plan {
            automaton,
            ext,
            wall,
            init,
            composite: self.initial.composite,
            l: self.l,
            s: self.s,
            depth: self.depth,
            seed: self.seed,
            times,
            reference,
        })
    }

    /// Fewer rings first, then shorter rings down to the minimum length.
    fn suggest(&self, t_max: u64, l_min: u64) -> String {
        let cap = self.budget as u128;
        let t = t_max.max(1) as u128;
        let s = (cap / (self.l as u128 * t)).max(1);
        if s * self.l as u128 * t <= cap {
            return format!("S={s} with L={}", self.l);
        }
        let l = (cap / t).max(l_min as u128);
        if l * t <= cap {
            format!("S=1 with L={l}")
        } else {
            format!("S=1 with L={l_min} and an earlier last observation")
        }
    }
}

/// Extends a table over `B` to `B ∪ {*}` with no mass on words containing `*`.
pub(crate) fn embed(t: &CylinderTable, ext: &Alphabet) -> Result<CylinderTable, HarnessError> {
    let base = t.alphabet().size();
    Ok(CylinderTable::from_fn(ext, t.depth(), |w| {
        if w.iter().any(|&c| c as usize >= base) {
            Q::zero()
        } else {
            t.get(w).expect("word over B").clone()
        }
    })?)
}

/// Reference points a row is compared with.
#[derive(Clone, Debug)]
pub enum Reference {
    Sequence {
        program: WordSequenceProgram,
        grid: u32,
        window: u64,
        schedule: Schedule,
        cache: Arc<Mutex<HashMap<(u64, usize), Arc<Vec<CylinderTable>>>>>,
    },
    Target(CylinderTable),
}

impl Reference {
    /// Points over `B ∪ {*}` at time `t`.
    pub fn points(&self, t: u64, depth: usize, ext: &Alphabet) -> Result<Arc<Vec<CylinderTable>>, HarnessError> {
        match self {
            Reference::Target(tab) => {
                if tab.depth() != depth {
                    return Err(HarnessError::DepthMismatch(tab.depth(), depth));
                }
                Ok(Arc::new(vec![tab.clone()]))
            }
            Reference::Sequence { program, grid, window, schedule, cache } => {
                let n = schedule.phase(t).unwrap_or(0);
                if let Some(p) = cache.lock().unwrap().get(&(n, depth)) {
                    return Ok(p.clone());
                }
                let pts = limit_set_points(program, n.saturating_sub(*window), n + window, *grid, depth)?
                    .iter()
                    .map(|x| embed(x, ext))
                    .collect::<Result<Vec<_>, _>>()?;
                let pts = Arc::new(pts);
                cache.lock().unwrap().insert((n, depth), pts.clone());
                Ok(pts)
            }
        }
    }
}

/// A validated experiment.
#[derive(Clone, Debug)]
pub struct Plan {
    pub automaton: Arc<ConstructionAutomaton>,
    /// `B ∪ {*}`
    pub ext: Alphabet,
    pub wall: f64,
    pub init: f64,
    pub composite: CompositeFill,
    pub l: usize,
    pub s: usize,
    pub depth: usize,
    pub seed: u64,
    pub times: Vec<u64>,
    pub reference: Reference,
}

impl Plan {
    /// Ring `i`: ChaCha8 seeded with the experiment seed, stream `i`.
    pub fn sample_ring(&self, i: usize) -> Vec<Cell> {
        sample_cells(&self.automaton, self.wall, self.init, self.composite, self.l, self.seed, i as u64)
    }
}

/// A ring drawn from the product measure with the given `W` and `I` weights.
pub fn sample_cells(
    a: &ConstructionAutomaton,
    wall: f64,
    init: f64,
    fill: CompositeFill,
    l: usize,
    seed: u64,
    stream: u64,
) -> Vec<Cell> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    let k = a.alphabet().size() as u8;
    (0..l)
        .map(|_| {
            let u: f64 = r.gen();
            if u < wall {
                WALL
            } else if u < wall + init {
                INIT
            } else {
                match fill {
                    CompositeFill::Blank => a.letter(Some(r.gen_range(0..k))),
                    CompositeFill::All => r.gen_range(2..a.states()),
                }
            }
        })
        .collect()
}

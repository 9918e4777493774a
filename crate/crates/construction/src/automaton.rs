use lm_approx::{ProgramJson, TuringMachineSpec, WordSequenceProgram};
use lm_engine::{Cell, RuleTable};
use lm_measures::Alphabet;
use serde::{Deserialize, Serialize};

use crate::cell::{Codec, LayeredCell, Layers};
use crate::rule::{self, RADIUS};
use crate::schedule::Schedule;
use crate::ConstructionError;

/// Where the sequence `(w_n)` comes from.
#[derive(Clone, Debug)]
pub enum SequenceProgramBinding {
    /// Three machines simulated in the computation layer (index, word, countdown).
    Faithful(Box<[TuringMachineSpec; 3]>),
    /// A host-side agent writes `w_n` and the phase markers at the scheduled times.
    HostOracle(WordSequenceProgram),
}

#[derive(Clone)]
pub struct ConstructionAutomaton {
    alphabet: Alphabet,
    schedule: Schedule,
    program: WordSequenceProgram,
    codec: Codec,
    rule: RuleTable,
}

impl std::fmt::Debug for ConstructionAutomaton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConstructionAutomaton")
            .field("alphabet", &self.alphabet.symbols())
            .field("schedule", &self.schedule)
            .field("program", &self.program.describe())
            .finish()
    }
}

pub fn build_automaton(
    b: &Alphabet,
    binding: SequenceProgramBinding,
    q: u64,
) -> Result<ConstructionAutomaton, ConstructionError> {
    let schedule = Schedule::new(q)?;
    let program = match binding {
        SequenceProgramBinding::HostOracle(p) => p,
        SequenceProgramBinding::Faithful(_) => {
            return Err(ConstructionError::Unsupported(
                "machines simulated inside the cells are not implemented; use the host binding".into(),
            ))
        }
    };
    if program.alphabet().symbols() != b.symbols() {
        return Err(ConstructionError::Invalid(format!(
            "sequence alphabet {:?} differs from B = {:?}",
            program.alphabet().symbols(),
            b.symbols()
        )));
    }
    let codec = Codec::new(b.size())?;
    let c = codec;
    let rule = RuleTable::callback(codec.states(), RADIUS, move |w: &[Cell]| rule::packed(&c, w));
    Ok(ConstructionAutomaton { alphabet: b.clone(), schedule, program, codec, rule })
}

impl ConstructionAutomaton {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn program(&self) -> &WordSequenceProgram {
        &self.program
    }

    pub fn codec(&self) -> Codec {
        self.codec
    }

    pub fn rule(&self) -> &RuleTable {
        &self.rule
    }

    pub fn states(&self) -> u32 {
        self.codec.states()
    }

    /// A composite cell holding only the output letter `a` (`None` for `#`).
    pub fn letter(&self, a: Option<u8>) -> Cell {
        self.codec.composite(Layers::output(a))
    }

    pub fn decode(&self, c: Cell) -> Result<LayeredCell, ConstructionError> {
        self.codec.decode(c)
    }

    pub fn encode(&self, c: &LayeredCell) -> Cell {
        self.codec.encode(c)
    }
}

/// `{"B":["0","1"],"q":5,"binding":{"mode":"host","sequence":…}}`
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutomatonConfig {
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(default = "default_q")]
    pub q: u64,
    pub binding: BindingJson,
}

fn default_q() -> u64 {
    5
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum BindingJson {
    Host { sequence: ProgramJson },
    Faithful { machines: Vec<TuringMachineSpec> },
}

impl AutomatonConfig {
    pub fn from_json(s: &str) -> Result<Self, ConstructionError> {
        serde_json::from_str(s).map_err(|e| ConstructionError::Invalid(format!("automaton config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn alphabet(&self) -> Result<Alphabet, ConstructionError> {
        let mut chars = Vec::with_capacity(self.b.len());
        for s in &self.b {
            let mut it = s.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => chars.push(c),
                _ => return Err(ConstructionError::Invalid(format!("B: letter {s:?} must be one character"))),
            }
        }
        Alphabet::new(chars).map_err(|e| ConstructionError::Invalid(format!("B: {e}")))
    }

    pub fn build(&self) -> Result<ConstructionAutomaton, ConstructionError> {
        let b = self.alphabet()?;
        let binding = match &self.binding {
            BindingJson::Host { sequence } => SequenceProgramBinding::HostOracle(sequence.build()?),
            BindingJson::Faithful { machines } => {
                let m: [TuringMachineSpec; 3] = machines
                    .clone()
                    .try_into()
                    .map_err(|_| ConstructionError::Invalid("binding.machines: exactly three machines".into()))?;
                SequenceProgramBinding::Faithful(Box::new(m))
            }
        };
        build_automaton(&b, binding, self.q)
    }

    /// Constant sequence `w` over the binary alphabet.
    pub fn constant(w: &str) -> Self {
        AutomatonConfig {
            b: vec!["0".into(), "1".into()],
            q: 5,
            binding: BindingJson::Host {
                sequence: ProgramJson::Explicit { words: vec![w.into()], cycle_from: 0, alphabet: None },
            },
        }
    }
}


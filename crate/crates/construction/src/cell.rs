//! Layered cell states and their packing into engine cell codes.
//!
//! Code 0 is the wall `W`, code 1 is `I`, and every composite state is `2 + index`, where the index
//! is mixed-radix over the layers in the order output, comp, time, sweeping, copy, merge (output is
//! the most significant digit).

use lm_engine::Cell;

use crate::ConstructionError;

pub const WALL: Cell = 0;
pub const INIT: Cell = 1;

/// Host markers on the computation layer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Comp {
    #[default]
    Empty,
    /// Destroys the wall on the right at the next step when the merge layer holds `M`.
    Fire,
    /// Emits a length probe right of the wall on the right.
    Launch,
}

/// Sweeping-layer states. Digits are `0..=2`.
///
/// `Cmp` is a comparison in progress: `d` is the running difference between the sweeping counter
/// and the time counter read so far (saturated at ±2, which is decisive), `ds` the sweeping
/// counter's own prefix (saturated at 2), used when the time digits read so far turn out to belong
/// to a detached counter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Sweep {
    #[default]
    Empty,
    /// Moving digit; `None` is a buffer.
    Go(Option<u8>),
    Stop(u8),
    Cmp { d: i8, ds: u8, digit: u8 },
    /// Comparison lost by the wall: the wall on the right is destroyed, then the counter moves on.
    Minus(u8),
    /// Counter being erased (comparison lost by the counter, or dominated).
    Plus(u8),
}

impl Sweep {
    pub fn digit(self) -> Option<u8> {
        match self {
            Sweep::Empty | Sweep::Go(None) => None,
            Sweep::Go(Some(d)) | Sweep::Stop(d) | Sweep::Minus(d) | Sweep::Plus(d) => Some(d),
            Sweep::Cmp { digit, .. } => Some(digit),
        }
    }

    pub fn is_empty(self) -> bool {
        matches!(self, Sweep::Empty | Sweep::Go(None))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CopyCell {
    #[default]
    Empty,
    Letter(u8),
    /// The leftmost letter of a live copy block; it writes itself to the output layer.
    Head(u8),
}

impl CopyCell {
    pub fn letter(self) -> Option<u8> {
        match self {
            CopyCell::Empty => None,
            CopyCell::Letter(a) | CopyCell::Head(a) => Some(a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum MergeSym {
    #[default]
    Empty,
    /// Digit of the decrementing merge counter, in `{-1, 0, 1}`.
    Digit(i8),
    C,
    M,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Probe {
    #[default]
    None,
    Right,
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct MergeCell {
    pub sym: MergeSym,
    pub probe: Probe,
}

/// The six layers of a composite cell. `None` stands for `#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Layers {
    pub output: Option<u8>,
    pub comp: Comp,
    pub time: Option<u8>,
    pub sweep: Sweep,
    pub copy: CopyCell,
    pub merge: MergeCell,
}

impl Layers {
    pub fn output(a: Option<u8>) -> Self {
        Layers { output: a, ..Layers::default() }
    }

    /// All layers except output are `#`.
    pub fn is_pure_output(&self) -> bool {
        Layers { output: self.output, ..Layers::default() } == *self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LayeredCell {
    Wall,
    Init,
    Composite(Layers),
}

impl LayeredCell {
    pub fn layers(&self) -> Option<&Layers> {
        match self {
            LayeredCell::Composite(l) => Some(l),
            _ => None,
        }
    }
}

const COMP: u32 = 3;
const TIME: u32 = 4;
const SWEEP: u32 = 1 + 4 + 3 + 45 + 3 + 3;
const MERGE_SYM: u32 = 6;
const MERGE: u32 = MERGE_SYM * 3;

/// Packing for an output alphabet of size `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Codec {
    k: u32,
}

impl Codec {
    pub fn new(k: usize) -> Result<Self, ConstructionError> {
        if !(1..=16).contains(&k) {
            return Err(ConstructionError::Invalid(format!("output alphabet size {k} outside 1..=16")));
        }
        Ok(Codec { k: k as u32 })
    }

    pub fn alphabet_size(&self) -> usize {
        self.k as usize
    }

    fn radices(&self) -> [u32; 6] {
        [self.k + 1, COMP, TIME, SWEEP, 2 * self.k + 1, MERGE]
    }

    /// Number of cell codes, `2 + |composites|`.
    pub fn states(&self) -> u32 {
        2 + self.radices().iter().product::<u32>()
    }

    pub fn encode(&self, c: &LayeredCell) -> Cell {
        match c {
            LayeredCell::Wall => WALL,
            LayeredCell::Init => INIT,
            LayeredCell::Composite(l) => {
                let digits = [
                    l.output.map_or(self.k, u32::from),
                    comp_index(l.comp),
                    l.time.map_or(3, u32::from),
                    sweep_index(l.sweep),
                    copy_index(l.copy, self.k),
                    merge_index(l.merge),
                ];
                let mut v = 0u32;
                for (d, r) in digits.iter().zip(self.radices()) {
                    debug_assert!(*d < r);
                    v = v * r + d;
                }
                2 + v
            }
        }
    }

    pub fn decode(&self, code: Cell) -> Result<LayeredCell, ConstructionError> {
        match code {
            WALL => Ok(LayeredCell::Wall),
            INIT => Ok(LayeredCell::Init),
            c if c < self.states() => Ok(LayeredCell::Composite(self.decode_layers(c - 2))),
            c => Err(ConstructionError::BadCell(c)),
        }
    }

    fn decode_layers(&self, mut v: u32) -> Layers {
        let r = self.radices();
        let mut d = [0u32; 6];
        for i in (0..6).rev() {
            d[i] = v % r[i];
            v /= r[i];
        }
        Layers {
            output: (d[0] < self.k).then_some(d[0] as u8),
            comp: [Comp::Empty, Comp::Fire, Comp::Launch][d[1] as usize],
            time: (d[2] < 3).then_some(d[2] as u8),
            sweep: sweep_from(d[3]),
            copy: copy_from(d[4], self.k),
            merge: merge_from(d[5]),
        }
    }

    /// Decodes a cell the rule produced or was given; unknown codes read as a blank composite.
    pub fn decode_lossy(&self, code: Cell) -> LayeredCell {
        self.decode(code).unwrap_or(LayeredCell::Composite(Layers::default()))
    }

    pub fn composite(&self, l: Layers) -> Cell {
        self.encode(&LayeredCell::Composite(l))
    }

    /// Markdown table describing the packing.
    pub fn code_table(&self) -> String {
        let names = ["output", "comp", "time", "sweeping", "copy", "merge"];
        let values = [
            format!("letters 0..{} then # = {}", self.k - 1, self.k),
            "# = 0, Fire = 1, Launch = 2".to_string(),
            "digits 0, 1, 2 then # = 3".to_string(),
            "# = 0, Go(#) = 1, Go(d) = 2+d, Stop(d) = 5+d, Cmp(d, ds, digit) = 8 + 9·(d+2) + 3·ds + digit, \
             Minus(d) = 53+d, Plus(d) = 56+d"
                .to_string(),
            format!("# = 0, Letter(a) = 1+a, Head(a) = {}+a", 1 + self.k),
            "6·probe + sym with sym # = 0, -1 = 1, 0 = 2, 1 = 3, C = 4, M = 5 and probe none = 0, → = 1, ← = 2"
                .to_string(),
        ];
        let mut s = String::from("| code | meaning |\n|---|---|\n| 0 | W |\n| 1 | I |\n");
        s.push_str(&format!(
            "| 2 + v | composite; v is mixed radix, most significant first, radices {:?} |\n\n",
            self.radices()
        ));
        s.push_str("| layer | radix | digit |\n|---|---|---|\n");
        for ((n, r), v) in names.iter().zip(self.radices()).zip(values) {
            s.push_str(&format!("| {n} | {r} | {v} |\n"));
        }
        s
    }
}

fn comp_index(c: Comp) -> u32 {
    match c {
        Comp::Empty => 0,
        Comp::Fire => 1,
        Comp::Launch => 2,
    }
}

fn sweep_index(s: Sweep) -> u32 {
    match s {
        Sweep::Empty => 0,
        Sweep::Go(None) => 1,
        Sweep::Go(Some(d)) => 2 + d as u32,
        Sweep::Stop(d) => 5 + d as u32,
        Sweep::Cmp { d, ds, digit } => 8 + 9 * (d + 2) as u32 + 3 * ds as u32 + digit as u32,
        Sweep::Minus(d) => 53 + d as u32,
        Sweep::Plus(d) => 56 + d as u32,
    }
}

fn sweep_from(i: u32) -> Sweep {
    match i {
        0 => Sweep::Empty,
        1 => Sweep::Go(None),
        2..=4 => Sweep::Go(Some((i - 2) as u8)),
        5..=7 => Sweep::Stop((i - 5) as u8),
        8..=52 => {
            let j = i - 8;
            Sweep::Cmp { d: (j / 9) as i8 - 2, ds: ((j / 3) % 3) as u8, digit: (j % 3) as u8 }
        }
        53..=55 => Sweep::Minus((i - 53) as u8),
        _ => Sweep::Plus((i - 56) as u8),
    }
}

fn copy_index(c: CopyCell, k: u32) -> u32 {
    match c {
        CopyCell::Empty => 0,
        CopyCell::Letter(a) => 1 + a as u32,
        CopyCell::Head(a) => 1 + k + a as u32,
    }
}

fn copy_from(i: u32, k: u32) -> CopyCell {
    match i {
        0 => CopyCell::Empty,
        i if i <= k => CopyCell::Letter((i - 1) as u8),
        i => CopyCell::Head((i - 1 - k) as u8),
    }
}

fn merge_index(m: MergeCell) -> u32 {
    let sym = match m.sym {
        MergeSym::Empty => 0,
        MergeSym::Digit(d) => (d + 2) as u32,
        MergeSym::C => 4,
        MergeSym::M => 5,
    };
    let probe = match m.probe {
        Probe::None => 0,
        Probe::Right => 1,
        Probe::Left => 2,
    };
    MERGE_SYM * probe + sym
}

fn merge_from(i: u32) -> MergeCell {
    let sym = match i % MERGE_SYM {
        0 => MergeSym::Empty,
        s @ 1..=3 => MergeSym::Digit(s as i8 - 2),
        4 => MergeSym::C,
        _ => MergeSym::M,
    };
    let probe = match i / MERGE_SYM {
        0 => Probe::None,
        1 => Probe::Right,
        _ => Probe::Left,
    };
    MergeCell { sym, probe }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_code_round_trips() {
        for k in [1, 2, 3] {
            let c = Codec::new(k).unwrap();
            for code in 0..c.states() {
                let cell = c.decode(code).unwrap();
                assert_eq!(c.encode(&cell), code);
            }
            assert!(c.decode(c.states()).is_err());
        }
    }

    #[test]
    fn blank_composites() {
        let c = Codec::new(2).unwrap();
        let l = Layers::output(Some(1));
        assert!(l.is_pure_output());
        assert_eq!(c.decode(c.composite(l)).unwrap(), LayeredCell::Composite(l));
    }
}

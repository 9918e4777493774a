//! The radius-3 local rule.
//!
//! Sweeping counters keep their digits on every other cell while moving (the cells between are
//! `#`), so two digits at distance at most 2 belong to the same counter and distinct counters are
//! kept at least two empty cells apart. A counter whose growth would break that gap is dominated:
//! it turns into `Plus` and is erased without ever comparing.

use lm_engine::Cell;

use crate::cell::{Codec, Comp, CopyCell, LayeredCell, Layers, MergeCell, MergeSym, Probe, Sweep};

pub const RADIUS: usize = 3;

struct View {
    c: [LayeredCell; 7],
}

impl View {
    fn at(&self, i: isize) -> &LayeredCell {
        &self.c[(i + 3) as usize]
    }

    fn lay(&self, i: isize) -> Option<&Layers> {
        self.at(i).layers()
    }

    fn wall(&self, i: isize) -> bool {
        matches!(self.at(i), LayeredCell::Wall)
    }

    fn init(&self, i: isize) -> bool {
        matches!(self.at(i), LayeredCell::Init)
    }

    /// An `I` with no other `I` among the three cells on its left, as far as the window shows.
    fn survives(&self, p: isize) -> bool {
        self.init(p) && (1..=3).all(|j| p - j < -3 || !self.init(p - j))
    }

    fn wallish(&self, i: isize) -> bool {
        self.wall(i) || self.survives(i)
    }

    fn time(&self, i: isize) -> Option<u8> {
        self.lay(i).and_then(|l| l.time)
    }

    fn sweep(&self, i: isize) -> Sweep {
        self.lay(i).map_or(Sweep::Empty, |l| l.sweep)
    }

    fn dig(&self, i: isize) -> Option<u8> {
        self.sweep(i).digit()
    }

    fn occ(&self, i: isize) -> bool {
        self.dig(i).is_some()
    }

    fn is_go(&self, i: isize) -> bool {
        matches!(self.sweep(i), Sweep::Go(Some(_)))
    }

    fn is_plus(&self, i: isize) -> bool {
        matches!(self.sweep(i), Sweep::Plus(_))
    }

    /// Leftmost digit of its counter.
    fn msb(&self, i: isize) -> bool {
        self.occ(i) && !self.occ(i - 1) && (self.wall(i - 1) || !self.occ(i - 2))
    }

    /// Next less significant digit of the same counter, if any.
    fn lower(&self, i: isize) -> Option<u8> {
        if self.occ(i + 1) {
            self.dig(i + 1)
        } else if !self.wall(i + 1) && self.occ(i + 2) {
            self.dig(i + 2)
        } else {
            None
        }
    }

    fn lsb(&self, i: isize) -> bool {
        self.occ(i) && self.lower(i).is_none()
    }

    /// Digit at `i` after this step's increment.
    fn inc(&self, i: isize) -> u8 {
        let carry = self.lower(i).map_or(true, |d| d == 2);
        self.dig(i).unwrap_or(0) % 2 + carry as u8
    }

    /// Whether the moving digit at `i` advances this step.
    fn moves(&self, i: isize) -> bool {
        if !self.is_go(i) || self.wall(i + 1) || self.init(i + 1) || self.occ(i + 1) {
            return false;
        }
        if self.occ(i + 2) {
            return true;
        }
        if self.dig(i) == Some(2) && self.msb(i) {
            // a lone 2 waits one step so that its carry lands behind it
            return false;
        }
        self.wall(i + 2) || !self.occ(i + 3)
    }

    /// A new leading digit at `g` would come within one cell of another counter or hit a wall.
    fn growth_blocked(&self, g: isize) -> bool {
        self.wall(g) || self.init(g) || self.occ(g - 1) || (!self.wall(g - 1) && self.occ(g - 2))
    }

    /// The digit at `s` is next to a dominated digit of its counter, on either side.
    fn doomed_from(&self, s: isize) -> bool {
        self.is_plus(s - 1)
            || (!self.occ(s - 1) && !self.wall(s - 1) && self.is_plus(s - 2))
            || self.is_plus(s + 1)
            || (!self.occ(s + 1) && !self.wall(s + 1) && self.is_plus(s + 2))
    }

    fn comp(&self, i: isize) -> Comp {
        self.lay(i).map_or(Comp::Empty, |l| l.comp)
    }

    fn copy(&self, i: isize) -> CopyCell {
        self.lay(i).map_or(CopyCell::Empty, |l| l.copy)
    }

    fn merge(&self, i: isize) -> MergeCell {
        self.lay(i).map_or(MergeCell::default(), |l| l.merge)
    }
}

/// The local rule on decoded cells; `w` is the window `x−3 … x+3`.
pub fn local(w: &[LayeredCell; 7]) -> LayeredCell {
    let v = View { c: *w };
    match v.at(0) {
        LayeredCell::Init => {
            if v.survives(0) {
                LayeredCell::Wall
            } else {
                LayeredCell::Composite(Layers::default())
            }
        }
        LayeredCell::Wall => wall(&v),
        LayeredCell::Composite(l) => LayeredCell::Composite(composite(&v, l)),
    }
}

fn wall(v: &View) -> LayeredCell {
    let zone = (-3..=3).any(|p| p != 0 && v.survives(p));
    let unsupported = v.wall(-1) || v.init(-1) || v.time(-1).is_none();
    let lost = matches!(v.sweep(-1), Sweep::Minus(_));
    let fired = v.comp(-1) == Comp::Fire && v.merge(-1).sym == MergeSym::M;
    if v.time(1) == Some(2) && !zone {
        return LayeredCell::Composite(Layers { time: Some(1), ..Layers::default() });
    }
    if zone || unsupported || lost || fired {
        LayeredCell::Composite(Layers::default())
    } else {
        LayeredCell::Wall
    }
}

fn composite(v: &View, l: &Layers) -> Layers {
    let zone_left = (-3..=-1).any(|p| v.survives(p));
    let zone_right = (1..=3).any(|p| v.survives(p));
    let short = v.wallish(1) && (v.wallish(-1) || v.wallish(-2) || v.wallish(-3));
    if zone_left || zone_right {
        let fresh = v.survives(1) && !zone_left && !short;
        return Layers { output: l.output, time: fresh.then_some(0), ..Layers::default() };
    }
    let copy = copy(v);
    let output = match v.copy(0) {
        CopyCell::Head(a) => Some(a),
        _ => l.output,
    };
    Layers {
        output,
        comp: Comp::Empty,
        time: if short { None } else { time(v) },
        sweep: sweep(v),
        copy,
        merge: MergeCell { sym: merge_sym(v), probe: probe(v) },
    }
}

fn time(v: &View) -> Option<u8> {
    match v.time(0) {
        None => (!v.wall(1) && v.time(1) == Some(2)).then_some(1),
        Some(d) => {
            if v.wall(1) {
                // an overflowing counter on the other side takes this wall; detach from it
                (v.time(2) != Some(2)).then_some(d % 2 + 1)
            } else {
                v.time(1).map(|e| d % 2 + (e == 2) as u8)
            }
        }
    }
}

fn sat(x: i8) -> i8 {
    x.clamp(-2, 2)
}

/// Comparison step at the centre, continuing from the left neighbour's state `(d, ds)`.
fn compare_at(v: &View, d: i8, ds: u8) -> Sweep {
    let digit = v.inc(0);
    let at_wall = v.wall(1);
    let ps = v.dig(0).unwrap_or(0) + if at_wall { 0 } else { v.dig(1).unwrap_or(0) / 2 };
    let pt = v.time(0).unwrap_or(0) + if at_wall { 0 } else { v.time(1).unwrap_or(0) / 2 };
    let base = if v.time(0).is_none() { ds as i8 } else { d };
    let d2 = if base.abs() >= 2 { base } else { sat(2 * base + ps as i8 - pt as i8) };
    let ds2 = if ds >= 2 { 2 } else { (2 * ds + ps).min(2) };
    if at_wall {
        if d2 < 0 {
            Sweep::Minus(digit)
        } else {
            Sweep::Empty
        }
    } else {
        Sweep::Cmp { d: d2, ds: ds2, digit }
    }
}

/// State given to a new leading digit created next to the counter whose leading digit is at `m`.
fn grown(v: &View, m: isize, digit: u8) -> Sweep {
    match v.sweep(m) {
        Sweep::Go(_) => Sweep::Go(Some(digit)),
        Sweep::Stop(_) if v.time(m - 1).is_none() => Sweep::Cmp { d: 0, ds: 0, digit },
        Sweep::Stop(_) => Sweep::Stop(digit),
        Sweep::Cmp { d, ds, .. } => Sweep::Cmp { d, ds, digit },
        _ => Sweep::Empty,
    }
}

fn sweep(v: &View) -> Sweep {
    if v.moves(-1) {
        let d = v.inc(-1);
        return if v.doomed_from(-1) { Sweep::Plus(d) } else { Sweep::Go(Some(d)) };
    }
    let s = v.sweep(0);
    if s.is_empty() {
        // new leading digit: carry out of a leading 2 that stays put
        if v.msb(1) && v.dig(1) == Some(2) && !v.moves(1) && !v.is_plus(1) && !v.growth_blocked(0) {
            return grown(v, 1, 1);
        }
        // leading zero so that the counter covers the time counter it is compared with
        if v.msb(1) && matches!(v.sweep(1), Sweep::Stop(_)) && v.time(0).is_some() && !v.growth_blocked(0) {
            return Sweep::Stop(0);
        }
        if v.wall(-1) && v.time(-2) == Some(0) && v.time(-3).is_none() && !v.occ(1) && !v.occ(2) {
            return Sweep::Go(Some(1));
        }
        return Sweep::Empty;
    }
    let digit = v.inc(0);
    let msb = v.msb(0);
    if let Sweep::Plus(_) = s {
        return if v.lsb(0) { Sweep::Empty } else { Sweep::Plus(digit) };
    }
    // the wall on the right is taken by an overflowing counter: this sweep is over
    if v.doomed_from(0) || (v.wall(1) && v.time(2) == Some(2)) {
        return Sweep::Plus(digit);
    }
    let carry_out = v.dig(0) == Some(2);
    match s {
        Sweep::Go(Some(_)) => {
            if v.moves(0) {
                return if msb && carry_out { Sweep::Go(Some(1)) } else { Sweep::Empty };
            }
            if msb && carry_out && v.growth_blocked(-1) {
                return Sweep::Plus(digit);
            }
            let blocked_by_own = v.occ(1) && !v.is_go(1);
            if v.wall(1) || blocked_by_own {
                Sweep::Stop(digit)
            } else {
                Sweep::Go(Some(digit))
            }
        }
        Sweep::Stop(_) => {
            if msb && carry_out && v.growth_blocked(-1) {
                return Sweep::Plus(digit);
            }
            if msb && v.time(-1).is_some() && v.growth_blocked(-1) {
                return Sweep::Plus(digit);
            }
            if let Sweep::Cmp { d, ds, .. } = v.sweep(-1) {
                return compare_at(v, d, ds);
            }
            if msb && v.time(-1).is_none() {
                return compare_at(v, 0, 0);
            }
            if v.is_go(1) || (!v.wall(1) && !v.occ(1)) {
                return Sweep::Go(Some(digit));
            }
            Sweep::Stop(digit)
        }
        Sweep::Cmp { d, ds, .. } => {
            if msb && carry_out && v.growth_blocked(-1) {
                return Sweep::Plus(digit);
            }
            if v.is_go(1) || (!v.wall(1) && !v.occ(1) && v.occ(2)) {
                Sweep::Go(Some(digit))
            } else if v.wall(1) || !v.occ(1) {
                Sweep::Empty
            } else {
                Sweep::Cmp { d, ds, digit }
            }
        }
        Sweep::Minus(_) => Sweep::Go(Some(digit)),
        _ => Sweep::Empty,
    }
}

fn copy(v: &View) -> CopyCell {
    if v.wall(1) || v.copy(1) == CopyCell::Empty {
        return CopyCell::Empty;
    }
    match v.copy(2).letter() {
        Some(a) if !v.wall(2) => {
            if matches!(v.copy(1), CopyCell::Head(_)) && v.sweep(0).is_empty() {
                CopyCell::Head(a)
            } else {
                CopyCell::Letter(a)
            }
        }
        _ => match v.lay(2).and_then(|l| l.output) {
            Some(a) => CopyCell::Letter(a),
            None => CopyCell::Empty,
        },
    }
}

fn merge_sym(v: &View) -> MergeSym {
    match v.merge(0).sym {
        MergeSym::Digit(d) => {
            let borrow = if v.wall(1) {
                true
            } else if let MergeSym::Digit(e) = v.merge(1).sym {
                e == -1
            } else {
                return MergeSym::Empty;
            };
            if v.wall(1) && v.merge(2).probe == Probe::Left && v.comp(0) != Comp::Launch {
                return MergeSym::M;
            }
            let msb = !matches!(v.merge(-1).sym, MergeSym::Digit(_));
            if msb && d == 0 && (!borrow || v.wall(1)) {
                return MergeSym::Empty;
            }
            MergeSym::Digit(d.rem_euclid(2) - borrow as i8)
        }
        MergeSym::M if v.wall(1) => MergeSym::M,
        _ => MergeSym::Empty,
    }
}

fn probe(v: &View) -> Probe {
    if v.wall(-1) && v.comp(-2) == Comp::Launch {
        return Probe::Right;
    }
    let here = v.merge(0).probe;
    let r_in = !v.wall(-1) && v.merge(-1).probe == Probe::Right;
    let bounce = here == Probe::Right && v.wall(1);
    let l_in = !v.wall(1) && v.merge(1).probe == Probe::Left && here != Probe::Right;
    if r_in {
        Probe::Right
    } else if bounce || l_in {
        Probe::Left
    } else {
        Probe::None
    }
}

/// The rule on packed codes.
pub fn packed(codec: &Codec, w: &[Cell]) -> Cell {
    let mut c = [LayeredCell::Wall; 7];
    for (slot, &code) in c.iter_mut().zip(w) {
        *slot = codec.decode_lossy(code);
    }
    codec.encode(&local(&c))
}

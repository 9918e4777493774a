use std::cmp::Ordering;
use std::fmt;

/// A redundant binary counter over `{0, 1, 2}`, most significant digit first.
///
/// `val(u) = Σ_i u_i·2^i` with `i = 0` the last (least significant) digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CounterDigits(pub Vec<u8>);

impl CounterDigits {
    pub fn zero() -> Self {
        CounterDigits(vec![0])
    }

    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| c.to_digit(10).filter(|d| *d <= 2).map(|d| d as u8))
            .collect::<Option<Vec<_>>>()
            .map(CounterDigits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn val(&self) -> u128 {
        self.0.iter().fold(0u128, |acc, &d| 2 * acc + d as u128)
    }
}

impl fmt::Display for CounterDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// One incrementation step.
///
/// Each digit becomes `u_i mod 2`, plus one if it is the last digit or its right neighbour is 2. A
/// leading 2 emits a new leading 1. The empty counter reads as 0 and becomes "1".
pub fn inc_digits(u: &CounterDigits) -> CounterDigits {
    let d = &u.0;
    if d.is_empty() {
        return CounterDigits(vec![1]);
    }
    let n = d.len();
    let mut out = Vec::with_capacity(n + 1);
    if d[0] == 2 {
        out.push(1);
    }
    for i in 0..n {
        let carry = i == n - 1 || d[i + 1] == 2;
        out.push(d[i] % 2 + carry as u8);
    }
    CounterDigits(out)
}

/// `inc^t("0")`
pub fn inc_from_zero(t: u64) -> CounterDigits {
    let mut u = CounterDigits::zero();
    for _ in 0..t {
        u = inc_digits(&u);
    }
    u
}

/// The digit-by-digit comparison, leftmost first.
///
/// Shorter counters are padded with leading zeros. With one digit left the result is
/// `sign(u_0 − v_0)`; otherwise `u_0 + ⌊u_1/2⌋` is compared with `v_0 + ⌊v_1/2⌋` and, on a tie,
/// the comparison continues on `(u_1 mod 2, u_2, …)` against `(v_1 mod 2, v_2, …)`.
///
/// Exact for counters generated by [`inc_digits`]; on arbitrary strings it can be wrong.
pub fn compare_sign(u: &CounterDigits, v: &CounterDigits) -> Ordering {
    let n = u.len().max(v.len());
    let pad = |w: &CounterDigits| {
        let mut p = vec![0u8; n - w.len()];
        p.extend_from_slice(&w.0);
        p
    };
    let (mut a, mut b) = (pad(u), pad(v));
    for i in 0..n {
        if i == n - 1 {
            return a[i].cmp(&b[i]);
        }
        let (x, y) = (a[i] + a[i + 1] / 2, b[i] + b[i + 1] / 2);
        if x != y {
            return x.cmp(&y);
        }
        a[i + 1] %= 2;
        b[i + 1] %= 2;
    }
    Ordering::Equal
}

/// Sign of `val(u) − val(v)` by the saturating running difference the automaton uses.
///
/// The difference of the prefixes read so far is kept while it lies in `{−1, 0, 1}`; once it
/// reaches ±2 the rest of the digits cannot change its sign. Exact on every digit string.
pub fn compare_exact(u: &CounterDigits, v: &CounterDigits) -> Ordering {
    let n = u.len().max(v.len());
    let at = |w: &CounterDigits, i: usize| -> i32 {
        let off = n - w.len();
        if i < off {
            0
        } else {
            w.0[i - off] as i32
        }
    };
    let mut d = 0i32;
    for i in 0..n {
        if d.abs() >= 2 {
            break;
        }
        d = 2 * d + at(u, i) - at(v, i);
    }
    d.cmp(&0)
}

/// A merge counter over `{−1, 0, 1}`, most significant digit first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MergeDigits(pub Vec<i8>);

impl MergeDigits {
    /// Binary digits of `v > 0`.
    pub fn of(v: u64) -> Self {
        assert!(v > 0);
        let s = format!("{v:b}");
        MergeDigits(s.bytes().map(|b| (b - b'0') as i8).collect())
    }

    pub fn val(&self) -> i64 {
        self.0.iter().fold(0i64, |acc, &d| 2 * acc + d as i64)
    }

    /// True for the single digit "0", after which the counter disappears.
    pub fn is_spent(&self) -> bool {
        self.0 == [0]
    }
}

/// One decrementation step, as the merge layer performs it.
///
/// A digit receives a borrow when it is the last digit or its right neighbour is −1, and becomes
/// `(u_i mod 2) − borrow` (with −1 mod 2 = 1). A leading 0 that receives no borrow is dropped.
/// "0" disappears.
pub fn dec_digits(u: &MergeDigits) -> Option<MergeDigits> {
    let d = &u.0;
    let n = d.len();
    if n == 0 || u.is_spent() {
        return None;
    }
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let borrow = i == n - 1 || d[i + 1] == -1;
        if i == 0 && d[i] == 0 && !borrow {
            continue;
        }
        out.push(d[i].rem_euclid(2) - borrow as i8);
    }
    Some(MergeDigits(out))
}

/// Number of steps a merge counter started at `v` stays on the tape (it is present at steps
/// `0..=lifetime`).
pub fn merge_lifetime(v: u64) -> u64 {
    let mut u = MergeDigits::of(v);
    let mut s = 0;
    while let Some(next) = dec_digits(&u) {
        u = next;
        s += 1;
    }
    s - 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(inc_digits(&CounterDigits::parse("0").unwrap()).to_string(), "1");
        assert_eq!(inc_digits(&CounterDigits::parse("12").unwrap()).to_string(), "21");
        assert_eq!(inc_digits(&CounterDigits::default()).to_string(), "1");
        assert_eq!(compare_sign(&CounterDigits::parse("2").unwrap(), &CounterDigits::parse("1").unwrap()), Ordering::Greater);
    }

    #[test]
    fn dec_counts_down() {
        let mut u = MergeDigits::of(13);
        for s in 0..=13 {
            assert_eq!(u.val(), 13 - s);
            if s < 13 {
                u = dec_digits(&u).unwrap();
            }
        }
    }
}

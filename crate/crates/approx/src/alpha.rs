use std::fmt;

use lm_measures::{fmt_q, Q};
use num_traits::Pow;

/// Covering radius `α_k`, possibly vacuous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Alpha {
    Infinite,
    Finite(Q),
}

impl Alpha {
    /// `α > x`
    pub fn exceeds(&self, x: &Q) -> bool {
        match self {
            Alpha::Infinite => true,
            Alpha::Finite(a) => a > x,
        }
    }

    pub fn finite(&self) -> Option<&Q> {
        match self {
            Alpha::Infinite => None,
            Alpha::Finite(a) => Some(a),
        }
    }

    pub fn times(&self, c: i64) -> Alpha {
        match self {
            Alpha::Infinite => Alpha::Infinite,
            Alpha::Finite(a) => Alpha::Finite(a * Q::from_integer(c.into())),
        }
    }
}

impl PartialOrd for Alpha {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        use std::cmp::Ordering::*;
        Some(match (self, other) {
            (Alpha::Infinite, Alpha::Infinite) => Equal,
            (Alpha::Infinite, _) => Greater,
            (_, Alpha::Infinite) => Less,
            (Alpha::Finite(a), Alpha::Finite(b)) => a.cmp(b),
        })
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alpha::Infinite => write!(f, "inf"),
            Alpha::Finite(a) => write!(f, "{}", fmt_q(a)),
        }
    }
}

/// `⌊log_base k⌋` for `k ≥ 1`.
pub fn ilog(base: u64, k: u64) -> u32 {
    assert!(base >= 2 && k >= 1);
    k.ilog(base)
}

/// `m = ⌊(log_{|A|} k − 1)/3⌋`, the de Bruijn depth whose periodic words have length at most `k`.
pub fn alpha_depth(size: u64, k: u64) -> i64 {
    (ilog(size, k) as i64 - 1).div_euclid(3)
}

/// `α_k = |A|^{−m + log_{|A|}(2m)} = 2m·|A|^{−m}`, infinite when `m ≤ 0`.
pub fn alpha_k(size: u64, k: u64) -> Alpha {
    let m = alpha_depth(size, k);
    if m <= 0 {
        return Alpha::Infinite;
    }
    alpha_of_depth(size, m as u32)
}

/// The radius guaranteed by a de Bruijn approximation at depth `m ≥ 1`.
pub fn alpha_of_depth(size: u64, m: u32) -> Alpha {
    let den: Q = Q::from_integer(size.into()).pow(m as i32);
    Alpha::Finite(Q::from_integer((2 * m as u64).into()) / den)
}

/// Smallest `m ≥ 1` with `2m·|A|^{−m} ≤ eps`.
pub fn depth_for_radius(size: u64, eps: &Q) -> u32 {
    let mut m = 1u32;
    loop {
        if let Alpha::Finite(a) = alpha_of_depth(size, m) {
            if &a <= eps {
                return m;
            }
        }
        m += 1;
    }
}

/// First `k` at which `alpha_k` takes each new value: `|A|^{3m+1}` for `m = 1, 2, …`.
pub fn alpha_breakpoint(size: u64, m: u32) -> Option<u64> {
    size.checked_pow(3 * m + 1)
}

use std::collections::BTreeMap;

use lm_measures::{Q, Word};
use num_integer::Integer;

/// Deepest level accepted by [`SparseMeasure`]; keeps numerators inside `i128`.
pub const MAX_SPARSE_DEPTH: usize = 40;

/// Cylinder frequencies of a finite mixture of periodic-orbit measures, stored sparsely as
/// integer numerators over one common denominator. Only cylinders that occur are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMeasure {
    k: u64,
    depth: usize,
    den: i128,
    levels: Vec<BTreeMap<u64, i128>>,
}

impl SparseMeasure {
    /// `μ̂_w` up to `depth`.
    pub fn orbit(k: usize, w: &[u8], depth: usize) -> Self {
        assert!(!w.is_empty(), "periodic word must be nonempty");
        assert!(depth <= MAX_SPARSE_DEPTH);
        let k = k as u64;
        let l = w.len();
        let mut levels = vec![BTreeMap::new(); depth + 1];
        levels[0].insert(0, l as i128);
        for i in 0..l {
            let mut r = 0u64;
            for (n, lv) in levels.iter_mut().enumerate().skip(1) {
                r = r * k + w[(i + n - 1) % l] as u64;
                *lv.entry(r).or_insert(0) += 1;
            }
        }
        SparseMeasure { k, depth, den: l as i128, levels }
    }

    /// `t·a + (1−t)·b` with `t = num/den`.
    pub fn mix(a: &Self, b: &Self, num: i128, den: i128) -> Self {
        assert!(a.k == b.k && 0 <= num && num <= den && den > 0);
        let depth = a.depth.min(b.depth);
        let l = a.den.lcm(&b.den);
        let (fa, fb) = (l / a.den * num, l / b.den * (den - num));
        let mut levels = vec![BTreeMap::new(); depth + 1];
        for (n, lv) in levels.iter_mut().enumerate() {
            for (&r, &c) in &a.levels[n] {
                *lv.entry(r).or_insert(0) += c * fa;
            }
            for (&r, &c) in &b.levels[n] {
                *lv.entry(r).or_insert(0) += c * fb;
            }
            lv.retain(|_, c| *c != 0);
        }
        let mut m = SparseMeasure { k: a.k, depth, den: l * den, levels };
        m.reduce();
        m
    }

    fn reduce(&mut self) {
        let g = self.levels.iter().flat_map(|lv| lv.values()).fold(self.den, |g, c| g.gcd(c));
        if g > 1 {
            self.den /= g;
            for lv in &mut self.levels {
                for c in lv.values_mut() {
                    *c /= g;
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// `μ([u])` for `|u| ≤ depth`.
    pub fn prob(&self, u: &[u8]) -> Q {
        let r = u.iter().fold(0u64, |acc, &a| acc * self.k + a as u64);
        let c = self.levels[u.len()].get(&r).copied().unwrap_or(0);
        Q::new(c.into(), self.den.into())
    }

    /// `Σ_{n ≤ depth} 2^{−n}·max|Δ_n|` as a numerator over `lcm·2^depth`.
    fn weighted_gap(&self, other: &Self, depth: usize) -> (i128, i128) {
        assert_eq!(self.k, other.k);
        let depth = depth.min(self.depth).min(other.depth);
        let l = self.den.lcm(&other.den);
        let (fa, fb) = (l / self.den, l / other.den);
        let mut total = 0i128;
        for n in 1..=depth {
            let (a, b) = (&self.levels[n], &other.levels[n]);
            let mut best = 0i128;
            for (r, &x) in a {
                best = best.max((x * fa - b.get(r).copied().unwrap_or(0) * fb).abs());
            }
            for (r, &y) in b {
                if !a.contains_key(r) {
                    best = best.max(y * fb);
                }
            }
            total += best << (depth - n);
        }
        (total, l << depth)
    }

    /// `(lower, upper)` for `d(self, other)` truncated at `depth`, exactly.
    pub fn distance(&self, other: &Self, depth: usize) -> (Q, Q) {
        let depth = depth.min(self.depth).min(other.depth);
        let (num, den) = self.weighted_gap(other, depth);
        let lo = Q::new(num.into(), den.into());
        let up = &lo + lm_measures::pow2_neg(depth);
        (lo, up)
    }

    /// Lower end of the interval as a float, for ordering and reports.
    pub fn distance_f64(&self, other: &Self, depth: usize) -> f64 {
        let (num, den) = self.weighted_gap(other, depth);
        num as f64 / den as f64
    }
}

/// `d(μ̂_u, μ̂_v)` truncated at `depth`.
pub fn orbit_distance(k: usize, u: &[u8], v: &[u8], depth: usize) -> (Q, Q) {
    SparseMeasure::orbit(k, u, depth).distance(&SparseMeasure::orbit(k, v, depth), depth)
}

/// Smallest lower bound of `d(x, t·a + (1−t)·b)` over `t ∈ {0, 1/g, …, 1}`.
///
/// The truncated distance is convex in `t`, so the grid minimum is found by bisection on the
/// discrete slope.
pub fn segment_distance_lower(x: &SparseMeasure, a: &SparseMeasure, b: &SparseMeasure, depth: usize, g: i128) -> Q {
    let at = |i: i128| {
        let m = SparseMeasure::mix(a, b, i, g);
        x.weighted_gap(&m, depth)
    };
    let cmp = |p: (i128, i128), q: (i128, i128)| (p.0 * q.1).cmp(&(q.0 * p.1));
    let (mut lo, mut hi) = (0i128, g);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if cmp(at(mid), at(mid + 1)) == std::cmp::Ordering::Greater {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    let (n, d) = at(lo);
    Q::new(n.into(), d.into())
}

pub fn orbit_words(k: usize, max_len: usize) -> Vec<Word> {
    let a = lm_measures::Alphabet::of_size(k);
    (1..=max_len).flat_map(|n| a.words(n)).collect()
}

use lm_measures::{Alphabet, MeasureSource, Word, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::alpha::depth_for_radius;
use crate::ApproxError;

/// Largest `|A|^{3n}` accepted.
pub const DEBRUIJN_EDGE_LIMIT: u64 = 1 << 26;

/// Everything the periodic approximation computed on the way to its word.
#[derive(Clone, Debug)]
pub struct DeBruijnBuild {
    pub alphabet: Alphabet,
    pub n: usize,
    /// `p_w` by rank of `w ∈ A^n`, summing to `|A|^{3n}`.
    pub counts: Vec<u64>,
    /// `p'_w` after the balancing and connecting paths.
    pub repaired: Vec<u64>,
    /// `I(u) = d⁺(u) − d⁻(u)` before repair, by rank of `u ∈ A^{n−1}`.
    pub imbalance: Vec<i64>,
    pub word: Word,
}

impl DeBruijnBuild {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn added_edges(&self) -> u64 {
        self.repaired.iter().sum::<u64>() - self.total()
    }
}

struct Graph {
    k: usize,
    n: usize,
    nodes: usize,
    edges: Vec<u64>,
}

impl Graph {
    fn from_node(&self, r: usize) -> usize {
        if self.n == 1 { 0 } else { r / self.k }
    }

    fn to_node(&self, r: usize) -> usize {
        if self.n == 1 { 0 } else { r % self.nodes }
    }

    fn imbalance(&self) -> Vec<i64> {
        let mut i = vec![0i64; self.nodes];
        for (r, &c) in self.edges.iter().enumerate() {
            i[self.from_node(r)] += c as i64;
            i[self.to_node(r)] -= c as i64;
        }
        i
    }

    fn letters(&self, node: usize) -> Vec<usize> {
        let mut w = vec![0; self.n - 1];
        let mut x = node;
        for c in w.iter_mut().rev() {
            *c = x % self.k;
            x /= self.k;
        }
        w
    }

    /// Adds the shortest label path from `u` to `v`: the longest suffix of `u` that is a prefix of `v` is kept.
    fn add_path(&mut self, u: usize, v: usize) {
        let (lu, lv) = (self.letters(u), self.letters(v));
        let m = self.n - 1;
        let overlap = (0..m).rev().find(|&j| lu[m - j..] == lv[..j]).unwrap_or(0);
        let mut cur = u;
        for &b in &lv[overlap..] {
            let r = cur * self.k + b;
            self.edges[r] += 1;
            cur = self.to_node(r);
        }
        debug_assert_eq!(cur, v);
    }

    /// Weakly connected components of the nodes carrying edges, each as its smallest node.
    fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.nodes).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut used = vec![false; self.nodes];
        for (r, &c) in self.edges.iter().enumerate() {
            if c > 0 {
                let (a, b) = (self.from_node(r), self.to_node(r));
                used[a] = true;
                used[b] = true;
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut reps: Vec<usize> = (0..self.nodes).filter(|&x| used[x]).map(|x| find(&mut parent, x)).collect();
        reps.sort_unstable();
        reps.dedup();
        reps
    }

    /// Hierholzer from the smallest node with an out-edge, smallest label first.
    fn eulerian_labels(&self) -> Vec<u8> {
        let mut left = self.edges.clone();
        let mut next = vec![0usize; self.nodes];
        let start = (0..self.edges.len()).find(|&r| left[r] > 0).map(|r| self.from_node(r)).expect("graph has edges");
        let mut stack: Vec<(usize, u8)> = vec![(start, u8::MAX)];
        let mut out = Vec::with_capacity(self.edges.iter().sum::<u64>() as usize);
        while let Some(&(v, _)) = stack.last() {
            while next[v] < self.k && left[v * self.k + next[v]] == 0 {
                next[v] += 1;
            }
            if next[v] < self.k {
                let r = v * self.k + next[v];
                left[r] -= 1;
                stack.push((self.to_node(r), next[v] as u8));
            } else {
                let (_, b) = stack.pop().expect("nonempty");
                if b != u8::MAX {
                    out.push(b);
                }
            }
        }
        out.reverse();
        out
    }
}

/// Rounds `μ([w])·K` to integers summing to `K`, moving each by less than one.
fn round_counts(probs: &[Q], total: u64) -> Vec<u64> {
    let k = BigInt::from(total);
    let mut counts = Vec::with_capacity(probs.len());
    let mut fracs = Vec::with_capacity(probs.len());
    for p in probs {
        let x = p * Q::from_integer(k.clone());
        let (fl, _) = x.numer().div_mod_floor(x.denom());
        let frac = &x - Q::from_integer(fl.clone());
        counts.push(fl.to_u64().expect("count fits"));
        fracs.push(frac);
    }
    let short = total - counts.iter().sum::<u64>();
    let mut order: Vec<usize> = (0..probs.len()).filter(|&i| !fracs[i].is_zero()).collect();
    order.sort_by(|&a, &b| fracs[b].cmp(&fracs[a]).then(a.cmp(&b)));
    for &i in order.iter().take(short as usize) {
        counts[i] += 1;
    }
    counts
}

pub fn debruijn_build(target: &MeasureSource, n: usize) -> Result<DeBruijnBuild, ApproxError> {
    if n == 0 {
        return Err(ApproxError::Invalid("de Bruijn depth must be at least 1".into()));
    }
    let alphabet = target.alphabet().clone();
    let k = alphabet.size();
    let total = (k as u64)
        .checked_pow(3 * n as u32)
        .filter(|&t| t <= DEBRUIJN_EDGE_LIMIT)
        .ok_or_else(|| ApproxError::Budget(format!("|A|^(3·{n}) edges exceed {DEBRUIJN_EDGE_LIMIT}")))?;
    let table = target.table(n)?;
    table.validate()?;
    let counts = round_counts(table.level(n), total);
    let mut g = Graph { k, n, nodes: alphabet.count(n - 1), edges: counts.clone() };
    let imbalance = g.imbalance();
    let mut cur = imbalance.clone();
    loop {
        let u = cur.iter().position(|&x| x < 0);
        let v = cur.iter().position(|&x| x > 0);
        match (u, v) {
            (Some(u), Some(v)) => {
                g.add_path(u, v);
                cur[u] += 1;
                cur[v] -= 1;
            }
            _ => break,
        }
    }
    debug_assert!(g.imbalance().iter().all(|&x| x == 0));
    loop {
        let reps = g.components();
        if reps.len() <= 1 {
            break;
        }
        for w in reps.windows(2) {
            g.add_path(w[0], w[1]);
        }
        g.add_path(*reps.last().expect("nonempty"), reps[0]);
    }
    let word = g.eulerian_labels();
    Ok(DeBruijnBuild { alphabet, n, counts, repaired: g.edges, imbalance, word })
}

/// Periodic word `π` whose orbit measure is within `2n·|A|^{−2n}` of `target` on every cylinder of length `n`.
pub fn debruijn_periodic_approx(target: &MeasureSource, n: usize) -> Result<Word, ApproxError> {
    Ok(debruijn_build(target, n)?.word)
}

/// Per-word frequency bound `|A|^{−(2n − log_{|A|} 2n)} = 2n·|A|^{−2n}`.
pub fn debruijn_error_bound(size: u64, n: usize) -> Q {
    Q::new((2 * n as u64).into(), BigInt::from(size).pow(2 * n as u32))
}

/// Length bound `|A|^{3n+1}`.
pub fn debruijn_length_bound(size: u64, n: usize) -> u64 {
    size.pow(3 * n as u32 + 1)
}

/// `f(n)`: a periodic word within `2^{−n}` of `target`, from the smallest de Bruijn depth whose radius is small enough.
pub fn approximate_computable_measure(target: &MeasureSource, n: u32) -> Result<Word, ApproxError> {
    let eps = lm_measures::pow2_neg(n as usize);
    let m = depth_for_radius(target.alphabet().size() as u64, &eps);
    debruijn_periodic_approx(target, m as usize)
}

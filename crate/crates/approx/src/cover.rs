use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use lm_measures::{Word, Q};

use crate::alpha::{alpha_breakpoint, alpha_depth, alpha_of_depth, Alpha};
use crate::descriptor::Sigma2Descriptor;
use crate::orbit::{orbit_words, SparseMeasure};

/// Word-length cap for cover enumeration.
pub const DEFAULT_COVER_MAX_LEN: usize = 6;
/// Depth of the pairwise distance intervals used for ball tests.
pub const COVER_PAIR_DEPTH: usize = 24;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverDiagnostics {
    /// Pairs whose interval straddles `2α`: edge omitted.
    pub inconclusive_edges: u64,
    /// Point-to-center tests straddling `α`: attachment omitted.
    pub inconclusive_attachments: u64,
    /// Emissions whose connecting level had a finite radius.
    pub finite_level_paths: u64,
    pub notes: Vec<String>,
}

struct LevelGraph {
    nodes: Vec<usize>,
    adj: Vec<Vec<usize>>,
    /// BFS distance to the centers attached to a point, keyed by the point's word index.
    reach: HashMap<usize, Vec<u32>>,
}

/// Enumeration state of the polygonal cover: `V_k^t` is `{w : |w| ≤ k ≤ K_w}`, stored through `K_w`.
pub struct CoverState {
    desc: Arc<dyn Sigma2Descriptor>,
    size: u64,
    words: Vec<Word>,
    orbits: Vec<SparseMeasure>,
    lower: Vec<Q>,
    upper: Vec<Q>,
    t: u64,
    levels: Vec<u64>,
    emitted: Vec<u32>,
    emitted_at: Vec<u64>,
    diag: CoverDiagnostics,
    adj_by_m: HashMap<i64, Arc<Vec<Vec<bool>>>>,
    attach_by_m: HashMap<i64, Arc<Vec<Vec<bool>>>>,
    graphs: HashMap<(Vec<u64>, i64), LevelGraph>,
}

fn radius(size: u64, m: i64) -> Alpha {
    if m <= 0 {
        Alpha::Infinite
    } else {
        alpha_of_depth(size, m as u32)
    }
}

impl CoverState {
    pub fn new(desc: Arc<dyn Sigma2Descriptor>, max_len: usize) -> Self {
        let k = desc.alphabet().size();
        let words = orbit_words(k, max_len);
        let orbits: Vec<SparseMeasure> = words.iter().map(|w| SparseMeasure::orbit(k, w, COVER_PAIR_DEPTH)).collect();
        let n = words.len();
        let mut lower = vec![Q::from_integer(0.into()); n * n];
        let mut upper = lower.clone();
        for i in 0..n {
            for j in i..n {
                let (lo, up) = orbits[i].distance(&orbits[j], COVER_PAIR_DEPTH);
                lower[i * n + j] = lo.clone();
                lower[j * n + i] = lo;
                upper[i * n + j] = up.clone();
                upper[j * n + i] = up;
            }
        }
        CoverState {
            desc,
            size: k as u64,
            words,
            orbits,
            lower,
            upper,
            t: 0,
            levels: vec![0; n],
            emitted: Vec::new(),
            emitted_at: Vec::new(),
            diag: CoverDiagnostics::default(),
            adj_by_m: HashMap::new(),
            attach_by_m: HashMap::new(),
            graphs: HashMap::new(),
        }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn diagnostics(&self) -> &CoverDiagnostics {
        &self.diag
    }

    /// `K_w` for every enumerated word, 0 when absent from every `V_k`.
    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    pub fn v_set(&self, k: u64) -> Vec<Word> {
        (0..self.words.len()).filter(|&i| self.in_v(i, k)).map(|i| self.words[i].clone()).collect()
    }

    fn in_v(&self, i: usize, k: u64) -> bool {
        self.words[i].len() as u64 <= k && k <= self.levels[i]
    }

    /// `V_k^{earlier} ⊆ V_k^{now}` for every `k`.
    pub fn is_monotone_since(&self, earlier: &[u64]) -> bool {
        earlier.len() == self.levels.len() && earlier.iter().zip(&self.levels).all(|(a, b)| a <= b)
    }

    pub fn emitted_len(&self) -> usize {
        self.emitted.len()
    }

    pub fn emitted_word(&self, i: usize) -> &Word {
        &self.words[self.emitted[i] as usize]
    }

    /// Time step at which the `i`-th word was emitted.
    pub fn emitted_time(&self, i: usize) -> u64 {
        self.emitted_at[i]
    }

    pub fn emitted(&self) -> impl Iterator<Item = &Word> + '_ {
        self.emitted.iter().map(move |&i| &self.words[i as usize])
    }

    /// Largest `k ≤ cap` with `2α_k > x`, or 0.
    fn kappa(&self, x: &Q, cap: u64) -> u64 {
        let mut m = alpha_depth(self.size, cap);
        let mut top = cap;
        loop {
            if radius(self.size, m).times(2).exceeds(x) {
                return top;
            }
            if m <= 0 {
                return 0;
            }
            // last k of the previous radius
            top = alpha_breakpoint(self.size, m as u32).expect("breakpoint fits") - 1;
            m -= 1;
        }
    }

    /// Advances to `t + 1`: recomputes the `V_k` and emits every new element with its connecting path.
    pub fn advance(&mut self) {
        self.t += 1;
        let t = self.t;
        let old = self.levels.clone();
        let index_free = self.desc.index_free();
        for i in 0..self.words.len() {
            let l = self.words[i].len() as u64;
            if l > t {
                continue;
            }
            let mut best = 0u64;
            if index_free {
                let x = self.desc.approx(t, t, &self.words[i]);
                best = self.kappa(&x, t);
            } else {
                for tp in l..=t {
                    let x = self.desc.approx(tp, t, &self.words[i]);
                    best = best.max(self.kappa(&x, tp));
                }
            }
            if best >= l && best > self.levels[i] {
                self.levels[i] = best;
            }
        }
        let mut fresh: Vec<(u64, usize)> = Vec::new();
        for i in 0..self.words.len() {
            let l = self.words[i].len() as u64;
            let from = old[i].max(l - 1) + 1;
            for k in from..=self.levels[i] {
                fresh.push((k, i));
            }
        }
        fresh.sort_unstable();
        for (k, w) in fresh {
            self.emit_towards(k, w);
        }
    }

    pub fn run_until(&mut self, t: u64) {
        while self.t < t {
            self.advance();
        }
    }

    fn push(&mut self, w: usize) {
        self.emitted.push(w as u32);
        self.emitted_at.push(self.t);
    }

    fn emit_towards(&mut self, k: u64, w: usize) {
        let Some(&last) = self.emitted.last() else {
            self.push(w);
            return;
        };
        let last = last as usize;
        for i in self.candidate_levels(k) {
            if let Some(path) = self.path_at(i, last, w) {
                if alpha_depth(self.size, i) > 0 {
                    self.diag.finite_level_paths += 1;
                }
                for u in path {
                    if u != last && u != w {
                        self.push(u);
                    }
                }
                self.push(w);
                return;
            }
        }
        unreachable!("level 0 has an infinite radius");
    }

    /// Levels at which the ball union can change, descending from `k`.
    pub fn candidate_levels(&self, k: u64) -> Vec<u64> {
        let mut c: Vec<u64> = vec![k, 0];
        c.extend(self.levels.iter().copied().filter(|&x| x < k));
        c.extend(self.words.iter().map(|w| w.len() as u64).filter(|&x| x < k));
        c.extend(self.words.iter().map(|w| w.len() as u64 - 1).filter(|&x| x < k));
        let mut m = 1u32;
        while let Some(b) = alpha_breakpoint(self.size, m) {
            if b > k {
                break;
            }
            c.push(b - 1);
            m += 1;
        }
        c.sort_unstable_by(|a, b| b.cmp(a));
        c.dedup();
        c
    }

    fn tables(&mut self, m: i64) -> (Arc<Vec<Vec<bool>>>, Arc<Vec<Vec<bool>>>) {
        if let (Some(a), Some(b)) = (self.adj_by_m.get(&m), self.attach_by_m.get(&m)) {
            return (a.clone(), b.clone());
        }
        let n = self.words.len();
        let alpha = radius(self.size, m);
        let two = alpha.times(2);
        let mut adj = vec![vec![false; n]; n];
        let mut att = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                let (lo, up) = (&self.lower[i * n + j], &self.upper[i * n + j]);
                adj[i][j] = two.exceeds(up);
                if !adj[i][j] && two.exceeds(lo) && i < j {
                    self.diag.inconclusive_edges += 1;
                }
                att[i][j] = alpha.exceeds(up);
                if !att[i][j] && alpha.exceeds(lo) {
                    self.diag.inconclusive_attachments += 1;
                }
            }
        }
        let (adj, att) = (Arc::new(adj), Arc::new(att));
        self.adj_by_m.insert(m, adj.clone());
        self.attach_by_m.insert(m, att.clone());
        (adj, att)
    }

    fn node_mask(&self, i: u64) -> Vec<u64> {
        let mut mask = vec![0u64; self.words.len().div_ceil(64)];
        for u in 0..self.words.len() {
            if self.in_v(u, i) {
                mask[u / 64] |= 1 << (u % 64);
            }
        }
        mask
    }

    /// Centers `u_0 … u_j` of `V_i` linking `μ̂_from` to `μ̂_to` through overlapping balls, if any.
    fn path_at(&mut self, i: u64, from: usize, to: usize) -> Option<Vec<usize>> {
        let m = alpha_depth(self.size, i);
        if m <= 0 {
            return Some(Vec::new());
        }
        let (adj, att) = self.tables(m);
        let key = (self.node_mask(i), m);
        if !self.graphs.contains_key(&key) {
            let nodes: Vec<usize> = (0..self.words.len()).filter(|&u| self.in_v(u, i)).collect();
            let index: HashMap<usize, usize> = nodes.iter().enumerate().map(|(p, &u)| (u, p)).collect();
            let g_adj = nodes
                .iter()
                .map(|&u| nodes.iter().filter(|&&v| v != u && adj[u][v]).map(|v| index[v]).collect())
                .collect();
            self.graphs.insert(key.clone(), LevelGraph { nodes, adj: g_adj, reach: HashMap::new() });
        }
        let g = self.graphs.get_mut(&key).expect("inserted");
        let dist = g.reach.entry(to).or_insert_with(|| {
            let mut d = vec![u32::MAX; g.nodes.len()];
            let mut q = VecDeque::new();
            for (p, &u) in g.nodes.iter().enumerate() {
                if att[to][u] {
                    d[p] = 0;
                    q.push_back(p);
                }
            }
            while let Some(p) = q.pop_front() {
                for &r in &g.adj[p] {
                    if d[r] == u32::MAX {
                        d[r] = d[p] + 1;
                        q.push_back(r);
                    }
                }
            }
            d
        });
        let start = (0..g.nodes.len())
            .filter(|&p| att[from][g.nodes[p]] && dist[p] != u32::MAX)
            .min_by_key(|&p| (dist[p], p))?;
        let mut path = vec![g.nodes[start]];
        let mut p = start;
        while dist[p] > 0 {
            p = *g.adj[p].iter().filter(|&&r| dist[r] == dist[p] - 1).min().expect("BFS predecessor");
            path.push(g.nodes[p]);
        }
        Some(path)
    }

    /// Path through the centers of `V_i^t` from `μ̂_a` to `μ̂_b`, for arbitrary words `a`, `b`.
    /// Empty when the level's radius is infinite.
    pub fn connect_points(&mut self, i: u64, a: &[u8], b: &[u8]) -> Option<Vec<Word>> {
        let m = alpha_depth(self.size, i);
        if m <= 0 {
            return Some(Vec::new());
        }
        let alpha = radius(self.size, m);
        let (adj, _) = self.tables(m);
        let k = self.size as usize;
        let (oa, ob) = (SparseMeasure::orbit(k, a, COVER_PAIR_DEPTH), SparseMeasure::orbit(k, b, COVER_PAIR_DEPTH));
        let nodes: Vec<usize> = (0..self.words.len()).filter(|&u| self.in_v(u, i)).collect();
        let near = |o: &SparseMeasure, u: usize| alpha.exceeds(&o.distance(&self.orbits[u], COVER_PAIR_DEPTH).1);
        let mut dist: HashMap<usize, u32> = HashMap::new();
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut q = VecDeque::new();
        for &u in &nodes {
            if near(&oa, u) {
                dist.insert(u, 0);
                q.push_back(u);
            }
        }
        while let Some(u) = q.pop_front() {
            if near(&ob, u) {
                let mut path = vec![u];
                let mut x = u;
                while let Some(&p) = prev.get(&x) {
                    path.push(p);
                    x = p;
                }
                path.reverse();
                return Some(path.into_iter().map(|x| self.words[x].clone()).collect());
            }
            for &v in &nodes {
                if adj[u][v] && !dist.contains_key(&v) {
                    dist.insert(v, dist[&u] + 1);
                    prev.insert(v, u);
                    q.push_back(v);
                }
            }
        }
        None
    }
}

/// The first `budget` steps of the enumeration; the emitted prefix of `(w_n)`.
pub fn polygonal_cover(desc: Arc<dyn Sigma2Descriptor>, budget: u64) -> Vec<Word> {
    let mut s = CoverState::new(desc, DEFAULT_COVER_MAX_LEN);
    s.run_until(budget);
    s.emitted().cloned().collect()
}

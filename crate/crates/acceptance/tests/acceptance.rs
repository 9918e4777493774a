//! Acceptance suite. Prints one PASS/FAIL line per criterion, with its sub-checks below it.
//!
//! A sub-check marked `documented` is a known shortfall recorded in the decisions ledger; it is
//! printed as FAIL but does not fail the run. Any other failing sub-check exits non-zero.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use lm_approx::{
    debruijn_build, orbit_distance, rice_reduction, CesaroPlan, CoverState, DistanceDescriptor, TuringMachineSpec,
    WordSequenceProgram, CESARO_COVER_BUDGET, DEFAULT_COVER_MAX_LEN,
};
use lm_construction::{
    compare_sign, inc_digits, segment_scan, AutomatonConfig, ConstructionAutomaton, ConstructionRun, CounterDigits,
    LayeredCell, SegmentReport, INIT,
};
use lm_engine::{pushforward_table, step_into, RuleTable};
use lm_harness::{run_experiment, sample_cells, CompositeFill, ExperimentConfig, TimeSeriesRow};
use lm_measures::{
    cyclic_counts, dist_table_to_segment, q, sample_ring, table_distance, to_f64, Alphabet, BernoulliSpec,
    CylinderTable, MarkovSpec, MeasureSource, PeriodicOrbitMeasure, Word, Q,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    what: String,
    ok: bool,
    documented: bool,
}

struct Criterion {
    id: u32,
    name: &'static str,
    checks: Vec<Check>,
    elapsed: Duration,
}

impl Criterion {
    fn new(id: u32, name: &'static str) -> Self {
        Criterion { id, name, checks: Vec::new(), elapsed: Duration::ZERO }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push(Check { what: what.into(), ok, documented: false });
    }

    /// A shortfall recorded in the decisions ledger.
    fn documented(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push(Check { what: what.into(), ok, documented: true });
    }

    fn runtime(&mut self, start: Instant, cap: Duration) {
        self.elapsed = start.elapsed();
        self.check(self.elapsed < cap, format!("runtime {:.1?} < {:?}", self.elapsed, cap));
    }

    fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    fn report(&self) {
        println!("{} criterion {} ({})", if self.pass() { "PASS" } else { "FAIL" }, self.id, self.name);
        for c in &self.checks {
            let tag = match (c.ok, c.documented) {
                (true, _) => "ok  ",
                (false, true) => "FAIL (documented)",
                (false, false) => "FAIL",
            };
            println!("    {tag} {}", c.what);
        }
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn counters() -> Criterion {
    let mut c = Criterion::new(1, "counter oracle");
    let start = Instant::now();
    let mut u = CounterDigits::zero();
    let mut bad = None;
    for t in 1..=1u64 << 16 {
        u = inc_digits(&u);
        if u.val() != t as u128 && bad.is_none() {
            bad = Some(t);
        }
    }
    c.check(bad.is_none(), format!("val(inc^t(0)) = t for t ≤ 2^16 (first mismatch: {bad:?})"));

    let n = 1usize << 12;
    let mut all = vec![CounterDigits::zero()];
    for _ in 0..n {
        let next = inc_digits(all.last().unwrap());
        all.push(next);
    }
    let mut wrong = 0u64;
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            wrong += (compare_sign(a, b) != i.cmp(&j)) as u64;
        }
    }
    c.check(wrong == 0, format!("compare_sign on all pairs t, t' ≤ 2^12: {wrong} disagreements"));
    c.runtime(start, secs(10));
    c
}

fn random_target(rng: &mut ChaCha8Rng, i: usize) -> MeasureSource {
    let a = Alphabet::binary();
    match i % 3 {
        0 => {
            let p = (0..2)
                .map(|_| {
                    let x = rng.gen_range(1..8);
                    vec![q(x, 8), q(8 - x, 8)]
                })
                .collect();
            MeasureSource::Markov(MarkovSpec::with_stationary(a, p).unwrap())
        }
        1 => {
            let p = rng.gen_range(1..12);
            MeasureSource::Bernoulli(BernoulliSpec::new(a, vec![q(p, 12), q(12 - p, 12)]).unwrap())
        }
        _ => {
            let orbit = |rng: &mut ChaCha8Rng| {
                let w: Word = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..2)).collect();
                MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), w).unwrap()).table(3).unwrap()
            };
            let (t1, t2) = (orbit(rng), orbit(rng));
            MeasureSource::Table(CylinderTable::mix(&t1, &t2, &q(rng.gen_range(1..7), 7)).unwrap())
        }
    }
}

fn de_bruijn() -> Criterion {
    let mut c = Criterion::new(2, "de Bruijn approximation");
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let a = Alphabet::binary();
    for n in [2usize, 3] {
        let (mut long, mut far, mut worst) = (0, 0, Q::from_integer(0.into()));
        let len_bound = 1u64 << (3 * n + 1);
        let err_bound = Q::new((2 * n as i64).into(), (1i64 << (2 * n)).into());
        for i in 0..20 {
            let target = random_target(&mut rng, i);
            let w = debruijn_build(&target, n).unwrap().word;
            long += (w.len() as u64 > len_bound) as usize;
            let counts = cyclic_counts(&a, std::slice::from_ref(&w), n).unwrap();
            let table = target.table(n).unwrap();
            for u in a.words(n) {
                let f = Q::new(counts[n][a.rank(&u)].into(), (w.len() as u64).into());
                let e = (f - table.get(&u).unwrap()).abs();
                far += (e > err_bound) as usize;
                worst = worst.max(e);
            }
        }
        c.check(long == 0, format!("n = {n}: |π| ≤ 2^{} on 20 targets ({long} over)", 3 * n + 1));
        c.check(
            far == 0,
            format!("n = {n}: per-word error ≤ {:.5}, worst {:.5} ({far} over)", to_f64(&err_bound), to_f64(&worst)),
        );
    }
    c.runtime(start, secs(30));
    c
}

/// Mean and standard error of per-ring cylinder frequencies, levels 1 to 3.
fn monte_carlo(rule: &RuleTable, src: &MeasureSource, t: u64, rings: usize, len: usize) -> Vec<(f64, f64)> {
    let a = Alphabet::binary();
    let words: Vec<Word> = (1..=3).flat_map(|n| a.words(n)).collect();
    let mut sum = vec![0f64; words.len()];
    let mut sq = vec![0f64; words.len()];
    let mut cur = Vec::new();
    let mut next = Vec::with_capacity(len);
    for s in 0..rings {
        cur.clear();
        cur.extend(sample_ring(src, len, 50_000 + s as u64).unwrap().into_iter().map(u32::from));
        for _ in 0..t {
            step_into(rule, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        let w: Word = cur.iter().map(|&x| x as u8).collect();
        let counts = cyclic_counts(&a, &[w], 3).unwrap();
        for (j, u) in words.iter().enumerate() {
            let f = counts[u.len()][a.rank(u)] as f64 / len as f64;
            sum[j] += f;
            sq[j] += f * f;
        }
    }
    (0..words.len())
        .map(|j| {
            let m = sum[j] / rings as f64;
            let var = (sq[j] / rings as f64 - m * m).max(0.0);
            (m, (var / rings as f64).sqrt())
        })
        .collect()
}

fn pushforward() -> Criterion {
    let mut c = Criterion::new(3, "exact pushforward");
    let start = Instant::now();
    let a = Alphabet::binary();
    let uniform = MeasureSource::uniform(&a);
    let biased = MeasureSource::Bernoulli(BernoulliSpec::new(a.clone(), vec![q(1, 4), q(3, 4)]).unwrap());
    let words: Vec<Word> = (1..=3).flat_map(|n| a.words(n)).collect();
    for rule in [90u8, 110, 184] {
        let r = RuleTable::elementary(rule);
        for (name, src) in [("uniform", &uniform), ("Bernoulli(3/4)", &biased)] {
            for t in 1..=2u64 {
                let exact = pushforward_table(&r, src, 3, t as usize).unwrap();
                let mc = monte_carlo(&r, src, t, 10_000, 2048);
                let worst = words
                    .iter()
                    .zip(&mc)
                    .map(|(u, (m, se))| (m - to_f64(exact.get(u).unwrap())).abs() / se.max(1e-300))
                    .fold(0f64, f64::max);
                let within = words.iter().zip(&mc).all(|(u, (m, se))| {
                    (m - to_f64(exact.get(u).unwrap())).abs() <= 4.0 * se + 1e-12
                });
                c.check(within, format!("rule {rule}, {name}, t = {t}: worst deviation {worst:.2}σ"));
            }
        }
    }
    let base = uniform.table(3).unwrap();
    for rule in [90u8, 150, 30, 60, 102, 170] {
        let r = RuleTable::elementary(rule);
        let inv = (1..=2).all(|t| pushforward_table(&r, &uniform, 3, t).unwrap() == base);
        c.check(inv, format!("surjective rule {rule}: F_*λ = λ on cylinders up to length 3, t ≤ 2"));
    }
    let moved = pushforward_table(&RuleTable::elementary(110), &uniform, 3, 1).unwrap() != base;
    c.check(moved, "rule 110 moves the uniform measure");
    c.runtime(start, secs(120));
    c
}

fn constant_01() -> Arc<ConstructionAutomaton> {
    Arc::new(AutomatonConfig::constant("01").build().unwrap())
}

fn is_structural(a: &ConstructionAutomaton, c: u32) -> bool {
    matches!(a.codec().decode_lossy(c), LayeredCell::Wall | LayeredCell::Init)
}

#[derive(Default)]
struct FactTally {
    short: usize,
    uninitialized: usize,
    created: usize,
    on_schedule: usize,
    at_overflow: usize,
    elsewhere: usize,
}

fn facts_on_ring(a: &Arc<ConstructionAutomaton>, cells: Vec<u32>, horizon: u64, tally: &mut FactTally) {
    let s = a.schedule();
    let mut run = ConstructionRun::new(a.clone(), cells);
    run.step();
    let scan = |run: &ConstructionRun| -> SegmentReport { segment_scan(run.automaton(), run.cells(), run.time(), None) };
    let mut prev = scan(&run);
    let mut prev_struct: Vec<bool> = run.cells().iter().map(|&x| is_structural(a, x)).collect();
    while run.time() < horizon {
        run.step();
        let t = run.time();
        let r = scan(&run);
        for (i, &x) in run.cells().iter().enumerate() {
            tally.created += (is_structural(a, x) && !prev_struct[i]) as usize;
            prev_struct[i] = is_structural(a, x);
        }
        tally.short += r.segments.iter().filter(|x| x.length < 4).count();
        tally.uninitialized += r.walls.iter().filter(|w| w.value != Some(t as u128 - 1)).count();
        for (i, w) in prev.walls.iter().enumerate() {
            if w.initialized && !r.walls.iter().any(|x| x.pos == w.pos) {
                let k = prev.segments[i].length as u64;
                let tk = s.t(k).unwrap();
                let overflow = (1u64 << k.min(62)) + k + 1;
                if t == tk {
                    tally.on_schedule += 1;
                } else if t == overflow && overflow < tk {
                    tally.at_overflow += 1;
                } else {
                    tally.elsewhere += 1;
                }
            }
        }
        prev = r;
    }
}

fn facts() -> Criterion {
    let mut c = Criterion::new(4, "construction facts");
    let start = Instant::now();
    let a = constant_01();
    let mut tally = FactTally::default();
    for seed in 0..50u64 {
        let cells = sample_cells(&a, 1.0 / 16.0, 1.0 / 16.0, CompositeFill::Blank, 1024, seed, 0);
        facts_on_ring(&a, cells, 400, &mut tally);
    }
    c.check(tally.short == 0, format!("segment length ≥ 4 for t ≥ 2: {} violations", tally.short));
    c.check(tally.uninitialized == 0, format!("time counters read t − 1: {} violations", tally.uninitialized));
    c.check(tally.created == 0, format!("no W or I created after t = 1: {} creations", tally.created));

    let mut late = Vec::new();
    for k in 4..=128usize {
        let bound = k as u64 * (1 + (k as f64).log2().ceil() as u64);
        let mut cells: Vec<u32> = (0..k + 41).map(|i| a.letter(Some((i % 2) as u8))).collect();
        cells[0] = INIT;
        cells[k + 1] = INIT;
        let mut run = ConstructionRun::new(a.clone(), cells);
        let mut swept = false;
        while run.time() < bound {
            run.step();
            let r = segment_scan(&a, run.cells(), run.time(), None);
            if run.time() >= 2 && r.segments.iter().any(|x| x.left == 0 && x.length == k && x.swept) {
                swept = true;
                break;
            }
        }
        if !swept {
            late.push(k);
        }
    }
    c.check(late.is_empty(), format!("planted lengths 4..=128 swept by k(1+⌈log₂k⌉): late {late:?}"));

    let total = tally.on_schedule + tally.at_overflow + tally.elsewhere;
    c.check(tally.elsewhere == 0, format!("{} of {total} destructions off both T(k) and the counter overflow", tally.elsewhere));
    c.documented(
        tally.at_overflow == 0,
        format!(
            "destructions only at T(k): {} at T(k), {} at overflow 2^k+k+1 < T(k) (k ≤ 6)",
            tally.on_schedule, tally.at_overflow
        ),
    );
    c.runtime(start, secs(180));
    c
}

fn convergence_rows() -> Vec<TimeSeriesRow> {
    let cfg = ExperimentConfig::from_json(
        r#"{"schema":1,
            "automaton":{"B":["0","1"],"q":5,"binding":{"mode":"host","sequence":{"kind":"explicit","words":["01"]}}},
            "L":1024,"S":100,"times":{"phase_endpoints":{"n_min":4,"n_max":9,"points":["settled"]}},
            "depth":4,"seed":0}"#,
    )
    .unwrap();
    run_experiment(&cfg).unwrap()
}

fn convergence(rows: &[TimeSeriesRow], elapsed: Duration) -> Criterion {
    let mut c = Criterion::new(5, "convergence, constant 01");
    let up: Vec<f64> = rows.iter().map(|r| to_f64(&r.distance.1)).collect();
    let lo: Vec<f64> = rows.iter().map(|r| to_f64(&r.distance.0)).collect();
    let mono = rows.windows(2).all(|p| p[1].distance.0 <= p[0].distance.0 && p[1].distance.1 <= p[0].distance.1);
    c.check(mono, format!("distance interval non-increasing over n = 4..9: lower {lo:.4?}, upper {up:.4?}"));
    let last = rows.last().unwrap();
    c.check(last.distance.1 <= q(1, 5), format!("upper bound at n = 9: {:.4} ≤ 0.2", to_f64(&last.distance.1)));
    let aux: Vec<f64> = rows.iter().map(|r| to_f64(&r.aux_density)).collect();
    c.documented(last.aux_density <= q(1, 10), format!("auxiliary density at n = 9 ≤ 0.1: {aux:.3?}"));
    c.elapsed = elapsed;
    c.check(elapsed < secs(600), format!("runtime {elapsed:.1?} < 600s"));
    c
}

fn ext_table(w: &[u8], depth: usize) -> CylinderTable {
    let ext = Alphabet::new(vec!['0', '1', '*']).unwrap();
    MeasureSource::Periodic(PeriodicOrbitMeasure::new(ext, w.to_vec()).unwrap()).table(depth).unwrap()
}

fn path_sweeping() -> Criterion {
    let mut c = Criterion::new(6, "path sweeping, alternating 01/0011 padded");
    let start = Instant::now();
    let a = Arc::new(
        AutomatonConfig::from_json(
            r#"{"B":["0","1"],"q":5,"binding":{"mode":"host","sequence":
                {"kind":"padded","inner":{"kind":"alternating","words":["01","0011"]}}}}"#,
        )
        .unwrap()
        .build()
        .unwrap(),
    );
    let s = a.schedule();
    let mut times = Vec::new();
    for n in 5..=9u64 {
        let (tn, tn1) = (s.t(n).unwrap(), s.t(n + 1).unwrap());
        times.extend([tn, tn + s.k(n).unwrap(), (tn + tn1) / 2, tn1 - 1]);
    }
    times.sort_unstable();
    let cfg = ExperimentConfig::from_json(&format!(
        r#"{{"schema":1,"automaton":{},"L":1024,"S":100,"times":{{"explicit":{times:?}}},"depth":4,"seed":0}}"#,
        AutomatonConfig::from_json(
            r#"{"B":["0","1"],"q":5,"binding":{"mode":"host","sequence":
                {"kind":"padded","inner":{"kind":"alternating","words":["01","0011"]}}}}"#
        )
        .unwrap()
        .to_json()
    ))
    .unwrap();
    let rows = run_experiment(&cfg).unwrap();
    let p = a.program();
    for n in 5..=9u64 {
        let (tn, tn1) = (s.t(n).unwrap(), s.t(n + 1).unwrap());
        let target = ext_table(&p.word(n), 4);
        let best = rows
            .iter()
            .filter(|r| r.t >= tn && r.t < tn1)
            .map(|r| table_distance(&r.table, &target, 4).unwrap().1)
            .min()
            .unwrap();
        c.check(best <= q(1, 4), format!("n = {n}: min distance to μ̂_w{n} = {:.4} ≤ 0.25", to_f64(&best)));
        let mid = rows.iter().find(|r| r.t == (tn + tn1) / 2).unwrap();
        let (wa, wb) = (ext_table(&p.word(n - 1), 4), target);
        let d = dist_table_to_segment(&mid.table, &wa, &wb, 4, 6).unwrap();
        c.check(
            d <= q(1, 4),
            format!(
                "n = {n}: mid-phase t = {} within {:.4} ≤ 0.25 of [μ̂_{}, μ̂_{}]",
                mid.t,
                to_f64(&d),
                p.alphabet().format_word(&p.word(n - 1)),
                p.alphabet().format_word(&p.word(n))
            ),
        );
    }
    c.runtime(start, secs(600));
    c
}

fn cover() -> Criterion {
    let mut c = Criterion::new(7, "polygonal cover, singleton 01");
    let start = Instant::now();
    let budget = 10_000u64;
    let mut st = CoverState::new(Arc::new(DistanceDescriptor::builtin("singleton:01").unwrap()), DEFAULT_COVER_MAX_LEN);
    let mut prev = st.levels().to_vec();
    let mut monotone = true;
    while st.t() < budget {
        st.advance();
        monotone &= st.is_monotone_since(&prev);
        prev = st.levels().to_vec();
    }
    c.check(monotone, "V_k^t ⊆ V_k^{t+1} at every step");
    let target = vec![0u8, 1];
    let late: Vec<(usize, Q)> = (0..st.emitted_len())
        .filter(|&i| st.emitted_time(i) > budget * 3 / 4)
        .map(|i| (st.emitted_word(i).len(), orbit_distance(2, st.emitted_word(i), &target, 6).0))
        .collect();
    let far = late.iter().filter(|(_, d)| *d > q(1, 10)).count();
    let worst = late.iter().map(|(_, d)| d.clone()).max().map_or(0.0, |d| to_f64(&d));
    c.documented(
        !late.is_empty() && far == 0,
        format!("final-quartile words at depth-6 distance ≤ 0.1: {far} of {} above, worst {worst:.4}", late.len()),
    );
    c.runtime(start, secs(60));
    c
}

fn cesaro(rows: &[TimeSeriesRow], elapsed: Duration) -> Criterion {
    let mut c = Criterion::new(8, "Cesàro");
    let start = Instant::now();
    let a = Alphabet::binary();
    let plan = CesaroPlan::new(
        WordSequenceProgram::constant(&a, "0").unwrap(),
        WordSequenceProgram::constant(&a, "01").unwrap(),
        Arc::new(DistanceDescriptor::builtin("segment:0,01").unwrap()),
        CESARO_COVER_BUDGET,
    )
    .unwrap();
    let seq = lm_approx::cesaro_interleave(
        WordSequenceProgram::constant(&a, "0").unwrap(),
        WordSequenceProgram::constant(&a, "01").unwrap(),
        Arc::new(DistanceDescriptor::builtin("segment:0,01").unwrap()),
    )
    .unwrap();
    let mut ok = true;
    let mut prev_end = 1;
    for i in 0..=3u32 {
        let b = plan.block(i);
        let (start, end) = (2u64.pow(i * i), 2u64.pow((i + 1) * (i + 1)));
        ok &= b.start == start && b.end == end && b.start == prev_end;
        ok &= !b.path.is_empty() && b.path.len() as u64 <= end - start;
        ok &= b.tail == vec![0, 1];
        ok &= (start..end).all(|n| plan.block_of(n) == i);
        for n in start..end.min(start + 64) {
            let off = (n - start) as usize;
            let want = if off < b.path.len() { b.path[off].clone() } else { b.tail.clone() };
            ok &= seq.word(n) == want;
        }
        prev_end = end;
    }
    ok &= seq.word(0) == vec![0, 1];
    c.check(ok, "blocks i ≤ 3 tile [|A|^{i²}, |A|^{(i+1)²}), path then tail, word(n) agrees");
    let last = rows.last().unwrap().cesaro.clone().unwrap();
    c.check(last.1 <= q(1, 5), format!("tracker at the final observation: upper {:.4} ≤ 0.2", to_f64(&last.1)));
    c.elapsed = start.elapsed();
    c.check(c.elapsed < secs(60), format!("runtime {:.1?} < 60s on top of criterion 5 ({elapsed:.1?})", c.elapsed));
    c
}

fn rice() -> Criterion {
    let mut c = Criterion::new(9, "Rice reduction");
    let start = Instant::now();
    let a = Alphabet::binary();
    let tm = TuringMachineSpec::halting_after(17);
    let seq = rice_reduction(
        &tm,
        WordSequenceProgram::constant(&a, "0").unwrap(),
        WordSequenceProgram::constant(&a, "01").unwrap(),
    )
    .unwrap();
    let bad: Vec<u64> = (0..200u64)
        .filter(|&n| {
            let want: Word = if n >= 17 { vec![0] } else { vec![0, 1] };
            seq.word(n) != want
        })
        .collect();
    c.check(bad.is_empty(), format!("seqB for n < 17, seqA for n ≥ 17, n < 200: mismatches at {bad:?}"));
    c.runtime(start, secs(1));
    c
}

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    println!("acceptance suite");
    let mut all = vec![counters(), de_bruijn(), pushforward(), facts()];
    let start = Instant::now();
    let rows = convergence_rows();
    let run = start.elapsed();
    all.push(convergence(&rows, run));
    all.push(path_sweeping());
    all.push(cover());
    all.push(cesaro(&rows, run));
    all.push(rice());
    for c in &all {
        c.report();
    }
    let passed = all.iter().filter(|c| c.pass()).count();
    let undocumented: Vec<u32> =
        all.iter().filter(|c| c.checks.iter().any(|x| !x.ok && !x.documented)).map(|c| c.id).collect();
    println!("{passed} of {} criteria pass; undocumented failures: {undocumented:?}", all.len());
    if undocumented.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

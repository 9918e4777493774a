//! `lm`: thin wrapper over the library crates.
//!
//! Exit codes: 0 on success, 1 on invalid input (with the offending field), 2 on budget refusal.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use lm_approx::{
    debruijn_error_bound, debruijn_length_bound, debruijn_periodic_approx, pad_for_space, polygonal_cover,
    program_from_json, DistanceDescriptor, ProgramJson,
};
use lm_construction::{render_palette, segment_scan, AutomatonConfig};
use lm_engine::{exact_pushforward_with_budget, iterate_capped, write_pgm, EngineError, RingConfig, RuleTable};
use lm_harness::{
    render_spacetime, run_experiment, sample_cells, simulate, write_csv, CsvLayout, ExperimentConfig, HarnessError,
    InitialMeasure,
};
use lm_measures::{
    abs_diff, fmt_q, sample_ring, source_from_json, to_f64, MeasureSource, PeriodicOrbitMeasure, SourceJson,
};

#[derive(Parser, Debug)]
#[command(name = "lm", about = "Limit measures of cellular automata: approximation, pushforward, construction runs")]
struct Cli {
    /// Worker threads for ring-parallel work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Periodic de Bruijn approximation of a measure.
    Approx {
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        n: usize,
    },
    /// Words emitted by the polygonal cover of a descriptor.
    Cover {
        /// A file holding `{"descriptor": "..."}`, or a builtin such as `singleton:01`.
        #[arg(long)]
        descriptor: String,
        #[arg(long)]
        budget: u64,
    },
    /// Exact `F^t_* μ([u])` for an elementary rule.
    Pushforward {
        #[arg(long)]
        rule: u8,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
    },
    /// Run the construction on one sampled ring.
    Simulate {
        #[arg(long)]
        automaton: PathBuf,
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "T")]
        t: u64,
        #[arg(long)]
        seed: u64,
        /// Initial measure JSON (`{"wall":"1/16","init":"1/16","composite":"blank"}` by default).
        #[arg(long)]
        initial: Option<PathBuf>,
        /// P6 space-time diagram.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value_t = lm_harness::DEFAULT_PIXEL_CAP)]
        pixel_cap: usize,
        #[arg(long, default_value_t = 2_000_000_000)]
        budget: u64,
    },
    /// Sampled experiment; one CSV row per observation time.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        seed: u64,
    },
    /// Space-time diagram of an elementary rule from a sampled ring (`.pgm` or `.ppm`).
    Render {
        #[arg(long)]
        rule: u8,
        #[command(flatten)]
        measure: MeasureArgs,
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "T")]
        t: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = lm_harness::DEFAULT_PIXEL_CAP)]
        pixel_cap: usize,
    },
    /// Print `w_n` for a range of `n`.
    Sequence {
        /// Program JSON file.
        #[arg(long, conflicts_with = "kind")]
        program: Option<PathBuf>,
        /// `explicit`, `alternating`, `cover` or `rice`.
        #[arg(long)]
        kind: Option<String>,
        /// Comma-separated words for explicit and alternating sequences.
        #[arg(long)]
        words: Option<String>,
        /// Descriptor for `cover`.
        #[arg(long)]
        descriptor: Option<String>,
        /// Machine JSON for `rice`.
        #[arg(long)]
        tm: Option<PathBuf>,
        /// Words after halting (rice), comma-separated, cycled.
        #[arg(long)]
        halt: Option<String>,
        /// Words while running (rice), comma-separated, cycled.
        #[arg(long = "loop")]
        looping: Option<String>,
        /// Apply pad_for_space.
        #[arg(long)]
        pad: bool,
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// Measure JSON file.
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Bernoulli weights, comma-separated rationals.
    #[arg(long)]
    bernoulli: Option<String>,
    /// Orbit measure of a periodic word.
    #[arg(long)]
    periodic: Option<String>,
}

enum Failure {
    Invalid(String),
    Budget(String),
}

type Out = Result<String, Failure>;

fn invalid(field: &str, e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(format!("field `{field}`: {e}"))
}

fn read(path: &Path, field: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(field, format!("{}: {e}", path.display())))
}

fn engine_failure(field: &str, e: EngineError) -> Failure {
    match e {
        EngineError::Budget { .. } => Failure::Budget(e.to_string()),
        e => invalid(field, e),
    }
}

fn harness_failure(e: HarnessError) -> Failure {
    match e {
        HarnessError::Budget { .. } => Failure::Budget(e.to_string()),
        e @ HarnessError::Invalid { .. } => Failure::Invalid(e.to_string()),
        e => Failure::Invalid(e.to_string()),
    }
}

impl MeasureArgs {
    fn source(&self) -> Result<MeasureSource, Failure> {
        match (&self.measure, &self.bernoulli, &self.periodic) {
            (Some(p), None, None) => source_from_json(&read(p, "measure")?).map_err(|e| invalid("measure", e)),
            (None, Some(w), None) => {
                let weights = w.split(',').map(|x| x.trim().to_string()).collect();
                SourceJson::Bernoulli { weights, alphabet: None }.into_source().map_err(|e| invalid("bernoulli", e))
            }
            (None, None, Some(w)) => SourceJson::Periodic { word: w.clone(), alphabet: None }
                .into_source()
                .map_err(|e| invalid("periodic", e)),
            _ => Err(invalid("measure", "give exactly one of --measure, --bernoulli, --periodic")),
        }
    }
}

fn approx(measure: &MeasureArgs, n: usize) -> Out {
    let src = measure.source()?;
    let a = src.alphabet().clone();
    let word = debruijn_periodic_approx(&src, n).map_err(|e| match e {
        lm_approx::ApproxError::Budget(m) => Failure::Budget(m),
        e => invalid("n", e),
    })?;
    let target = src.table(n).map_err(|e| invalid("measure", e))?;
    let got = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), word.clone()).map_err(|e| invalid("n", e))?)
        .table(n)
        .map_err(|e| invalid("n", e))?;
    let k = a.size() as u64;
    let mut out = String::new();
    writeln!(out, "{}", a.format_word(&word)).unwrap();
    writeln!(out, "# length {} (bound {})", word.len(), debruijn_length_bound(k, n)).unwrap();
    writeln!(out, "# word\ttarget\tperiodic\terror").unwrap();
    let mut worst = lm_measures::qi(0);
    for u in a.words(n) {
        let (p, g) = (target.get(&u).unwrap(), got.get(&u).unwrap());
        let e = abs_diff(p, g);
        writeln!(out, "{}\t{}\t{}\t{}", a.format_word(&u), fmt_q(p), fmt_q(g), fmt_q(&e)).unwrap();
        worst = worst.max(e);
    }
    let bound = debruijn_error_bound(k, n);
    writeln!(out, "# max error {} ({:.6}), bound {}", fmt_q(&worst), to_f64(&worst), fmt_q(&bound)).unwrap();
    Ok(out)
}

fn descriptor(spec: &str) -> Result<DistanceDescriptor, Failure> {
    let p = Path::new(spec);
    let text = if p.exists() {
        let raw = read(p, "descriptor")?;
        match serde_json::from_str::<serde_json::Value>(&raw) {
            Ok(v) => v
                .get("descriptor")
                .and_then(|d| d.as_str())
                .ok_or_else(|| invalid("descriptor", "expected {\"descriptor\": \"...\"}"))?
                .to_string(),
            Err(_) => raw.trim().to_string(),
        }
    } else {
        spec.to_string()
    };
    DistanceDescriptor::builtin(&text).map_err(|e| invalid("descriptor", e))
}

const COVER_BUDGET_CAP: u64 = 1_000_000;

fn cover(spec: &str, budget: u64) -> Out {
    let d = descriptor(spec)?;
    if budget > COVER_BUDGET_CAP {
        return Err(Failure::Budget(format!("cover budget {budget} above {COVER_BUDGET_CAP}; try --budget {COVER_BUDGET_CAP}")));
    }
    let a = lm_approx::Sigma2Descriptor::alphabet(&d).clone();
    let words = polygonal_cover(Arc::new(d), budget);
    Ok(words.iter().map(|w| a.format_word(w) + "\n").collect())
}

fn pushforward(rule: u8, measure: &MeasureArgs, word: &str, t: usize, budget: u64) -> Out {
    let src = measure.source()?;
    let a = src.alphabet();
    if a.size() != 2 {
        return Err(invalid("measure", "elementary rules need a binary measure"));
    }
    let u: Vec<u32> = a.parse_word(word).map_err(|e| invalid("word", e))?.into_iter().map(u32::from).collect();
    let p = exact_pushforward_with_budget(&RuleTable::elementary(rule), &src, &u, t, budget)
        .map_err(|e| engine_failure("word", e))?;
    Ok(fmt_q(&p) + "\n")
}

fn initial(path: &Option<PathBuf>) -> Result<InitialMeasure, Failure> {
    match path {
        None => Ok(InitialMeasure::default()),
        Some(p) => serde_json::from_str(&read(p, "initial")?).map_err(|e| invalid("initial", e)),
    }
}

#[allow(clippy::too_many_arguments)]
fn simulate_cmd(
    automaton: &Path,
    l: usize,
    steps: u64,
    seed: u64,
    init: &Option<PathBuf>,
    trace: &Option<PathBuf>,
    pixel_cap: usize,
    budget: u64,
) -> Out {
    let cfg = AutomatonConfig::from_json(&read(automaton, "automaton")?).map_err(|e| invalid("automaton", e))?;
    let a = Arc::new(cfg.build().map_err(|e| invalid("automaton", e))?);
    let m = initial(init)?;
    let (wall, init_w) = m.weights().map_err(harness_failure)?;
    if l < 2 * lm_construction::rule::RADIUS + 1 {
        return Err(invalid("L", "ring shorter than the neighbourhood"));
    }
    if l as u128 * steps as u128 > budget as u128 {
        let t = (budget / l as u64).max(1);
        return Err(Failure::Budget(format!("L·T = {} above {budget}; try --T {t}", l as u128 * steps as u128)));
    }
    let cells = sample_cells(&a, wall, init_w, m.composite, l, seed, 0);
    let cap = if trace.is_some() { pixel_cap.max(l) } else { l };
    let (run, tr) = simulate(a.clone(), cells, steps, cap);
    let r = segment_scan(&a, run.cells(), run.time(), None);
    let mut lengths: Vec<usize> = r.segments.iter().map(|s| s.length).collect();
    lengths.sort_unstable();
    let mut out = String::new();
    writeln!(out, "t\t{}", run.time()).unwrap();
    writeln!(out, "phase\t{}", a.schedule().phase(run.time()).map_or("-".into(), |n| n.to_string())).unwrap();
    writeln!(out, "walls\t{}", r.walls.len()).unwrap();
    writeln!(out, "initialized\t{}", r.walls.iter().filter(|w| w.initialized).count()).unwrap();
    if let (Some(lo), Some(hi)) = (lengths.first(), lengths.last()) {
        writeln!(out, "length min/median/max\t{lo}/{}/{hi}", lengths[lengths.len() / 2]).unwrap();
    }
    writeln!(out, "swept\t{:.6}", r.swept_fraction()).unwrap();
    writeln!(out, "aux density\t{:.6}", r.aux_density).unwrap();
    if let Some(p) = trace {
        let img = render_spacetime(&tr, render_palette(a.codec()), pixel_cap);
        std::fs::write(p, &img.bytes).map_err(|e| invalid("trace", format!("{}: {e}", p.display())))?;
        if let Some(w) = img.warning {
            eprintln!("warning: {w}");
        }
        writeln!(out, "trace\t{} (row stride {})", p.display(), tr.stride * img.stride as u64).unwrap();
    }
    Ok(out)
}

fn experiment(config: &Path, csv: &Path, seed: u64) -> Out {
    let mut cfg = ExperimentConfig::from_json(&read(config, "config")?).map_err(harness_failure)?;
    cfg.seed = seed;
    let plan = cfg.validate().map_err(harness_failure)?;
    let rows = run_experiment(&cfg).map_err(harness_failure)?;
    let layout = CsvLayout { alphabet: plan.ext.clone(), depth: plan.depth };
    write_csv(&rows, &layout, csv).map_err(|e| invalid("csv", e))?;
    let mut out = String::from("t\tphase\tdist_upper\taux\tcesaro_upper\n");
    for r in &rows {
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}\t{:.6}",
            r.t,
            r.phase.map_or("-".into(), |n| n.to_string()),
            to_f64(&r.distance.1),
            to_f64(&r.aux_density),
            r.cesaro.as_ref().map_or(f64::NAN, |c| to_f64(&c.1))
        )
        .unwrap();
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn render(rule: u8, measure: &MeasureArgs, l: usize, steps: u64, seed: u64, out: &Path, pixel_cap: usize) -> Out {
    let src = measure.source()?;
    if src.alphabet().size() != 2 {
        return Err(invalid("measure", "elementary rules need a binary measure"));
    }
    let w = sample_ring(&src, l, seed).map_err(|e| invalid("measure", e))?;
    let cfg = RingConfig::from_word(2, &w).map_err(|e| invalid("L", e))?;
    let (_, tr) = iterate_capped(&RuleTable::elementary(rule), &cfg, steps, true, pixel_cap.max(l))
        .map_err(|e| engine_failure("L", e))?;
    let tr = tr.expect("trace requested");
    let mut bytes = Vec::new();
    let mut warning = None;
    if out.extension().is_some_and(|e| e == "pgm") {
        write_pgm(&tr, &mut bytes).expect("writing to memory");
    } else {
        let img = render_spacetime(&tr, |c| if c == 0 { [255; 3] } else { [0; 3] }, pixel_cap);
        bytes = img.bytes;
        warning = img.warning;
    }
    std::fs::write(out, bytes).map_err(|e| invalid("out", format!("{}: {e}", out.display())))?;
    if let Some(w) = warning {
        eprintln!("warning: {w}");
    }
    Ok(format!("{} ({} rows, stride {})\n", out.display(), tr.rows.len(), tr.stride))
}

fn words_json(field: &str, s: &Option<String>) -> Result<Vec<String>, Failure> {
    let s = s.as_ref().ok_or_else(|| invalid(field, "required for this kind"))?;
    Ok(s.split(',').map(|w| w.trim().to_string()).collect())
}

#[allow(clippy::too_many_arguments)]
fn sequence(
    program: &Option<PathBuf>,
    kind: &Option<String>,
    words: &Option<String>,
    desc: &Option<String>,
    tm: &Option<PathBuf>,
    halt: &Option<String>,
    looping: &Option<String>,
    pad: bool,
    from: u64,
    to: u64,
) -> Out {
    if from > to {
        return Err(invalid("from", "from > to"));
    }
    let seq = match (program, kind.as_deref()) {
        (Some(p), None) => program_from_json(&read(p, "program")?).map_err(|e| invalid("program", e))?,
        (None, Some(k)) => {
            let j = match k {
                "explicit" => ProgramJson::Explicit { words: words_json("words", words)?, cycle_from: 0, alphabet: None },
                "alternating" => ProgramJson::Alternating { words: words_json("words", words)?, alphabet: None },
                "cover" => ProgramJson::Cover {
                    descriptor: desc.clone().ok_or_else(|| invalid("descriptor", "required for cover"))?,
                },
                "rice" => {
                    let p = tm.as_ref().ok_or_else(|| invalid("tm", "required for rice"))?;
                    let machine = lm_approx::TuringMachineSpec::from_json(&read(p, "tm")?).map_err(|e| invalid("tm", e))?;
                    let cyc = |w| ProgramJson::Explicit { words: w, cycle_from: 0, alphabet: None };
                    ProgramJson::Rice {
                        machine: lm_approx::MachineRef::Inline(machine),
                        halt_seq: Box::new(cyc(words_json("halt", halt)?)),
                        loop_seq: Box::new(cyc(words_json("loop", looping)?)),
                    }
                }
                other => return Err(invalid("kind", format!("unknown kind {other:?}"))),
            };
            j.build().map_err(|e| invalid("kind", e))?
        }
        _ => return Err(invalid("program", "give --program or --kind")),
    };
    let seq = if pad { pad_for_space(seq) } else { seq };
    let a = seq.alphabet().clone();
    Ok((from..=to).map(|n| format!("{n}\t{}\n", a.format_word(&seq.word(n)))).collect())
}

fn dispatch(cmd: &Cmd) -> Out {
    match cmd {
        Cmd::Approx { measure, n } => approx(measure, *n),
        Cmd::Cover { descriptor, budget } => cover(descriptor, *budget),
        Cmd::Pushforward { rule, measure, word, t, budget } => pushforward(*rule, measure, word, *t, *budget),
        Cmd::Simulate { automaton, l, t, seed, initial, trace, pixel_cap, budget } => {
            simulate_cmd(automaton, *l, *t, *seed, initial, trace, *pixel_cap, *budget)
        }
        Cmd::Experiment { config, csv, seed } => experiment(config, csv, *seed),
        Cmd::Render { rule, measure, l, t, seed, out, pixel_cap } => render(*rule, measure, *l, *t, *seed, out, *pixel_cap),
        Cmd::Sequence { program, kind, words, descriptor, tm, halt, looping, pad, from, to } => {
            sequence(program, kind, words, descriptor, tm, halt, looping, *pad, *from, *to)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(j) = cli.jobs {
        if j == 0 {
            eprintln!("error: field `jobs`: must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new().num_threads(j).build_global().expect("global pool set once");
    }
    match dispatch(&cli.cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("refused: {m}");
            ExitCode::from(2)
        }
    }
}

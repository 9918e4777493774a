#![allow(dead_code)]

use std::sync::Arc;

use lm_construction::{segment_scan, AutomatonConfig, ConstructionAutomaton, ConstructionRun, SegmentReport, INIT, WALL};
use lm_engine::Cell;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn automaton(sequence: &str) -> Arc<ConstructionAutomaton> {
    let json = format!(r#"{{"B":["0","1"],"q":5,"binding":{{"mode":"host","sequence":{sequence}}}}}"#);
    Arc::new(AutomatonConfig::from_json(&json).unwrap().build().unwrap())
}

pub fn constant_01() -> Arc<ConstructionAutomaton> {
    Arc::new(AutomatonConfig::constant("01").build().unwrap())
}

/// `I` and `W` with weight 1/16 each, otherwise a blank composite with a uniform letter.
pub fn default_ring(a: &ConstructionAutomaton, l: usize, seed: u64) -> Vec<Cell> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..l)
        .map(|_| match r.gen_range(0..16) {
            0 => WALL,
            1 => INIT,
            _ => a.letter(Some(r.gen_range(0..a.alphabet().size() as u8))),
        })
        .collect()
}

/// Uniform over every state of the layered alphabet.
pub fn uniform_ring(a: &ConstructionAutomaton, l: usize, seed: u64) -> Vec<Cell> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    (0..l).map(|_| r.gen_range(0..a.states())).collect()
}

/// Uniform composite states, no `W` or `I`.
pub fn junk(a: &ConstructionAutomaton, r: &mut ChaCha8Rng) -> Cell {
    r.gen_range(2..a.states())
}

/// A ring with `I` at 0 and `k + 1` and blank letters elsewhere: after bootstrap, one segment of
/// length `k` starting at wall 0 and one long segment closing the ring.
pub fn planted(a: &ConstructionAutomaton, k: usize, tail: usize, seed: u64) -> Vec<Cell> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<Cell> = (0..k + 1 + tail).map(|_| a.letter(Some(r.gen_range(0..2)))).collect();
    cells[0] = INIT;
    cells[k + 1] = INIT;
    cells
}

pub fn scan(run: &ConstructionRun) -> SegmentReport {
    segment_scan(run.automaton(), run.cells(), run.time(), None)
}

/// Step at which the time counter of a length-`k` segment no longer fits.
pub fn overflow_time(k: usize) -> u64 {
    (1u64 << k.min(62)) + k as u64 + 1
}

use std::sync::Arc;

use lm_construction::{render_palette, AutomatonConfig, INIT};
use lm_engine::SpaceTimeTrace;
use lm_harness::{render_spacetime, simulate, CesaroTracker};
use lm_measures::{Alphabet, CylinderTable, MeasureSource, PeriodicOrbitMeasure, Q};
use proptest::prelude::*;

fn trace(width: usize, rows: Vec<Vec<u32>>) -> SpaceTimeTrace {
    SpaceTimeTrace { states: 4, width, stride: 1, times: (0..rows.len() as u64).collect(), rows }
}

fn grey(c: u32) -> [u8; 3] {
    [c as u8 * 60; 3]
}

#[test]
fn one_cell_one_pixel() {
    let r = render_spacetime(&trace(1, vec![vec![2]]), grey, 100);
    assert_eq!(r.bytes, b"P6\n1 1\n255\n\x78\x78\x78");
    assert_eq!(r.stride, 1);
    assert!(r.warning.is_none());
}

#[test]
fn a_wall_is_a_black_column() {
    let a = Arc::new(AutomatonConfig::constant("01").build().unwrap());
    let mut cells = vec![a.letter(Some(0)); 12];
    cells[5] = INIT;
    let (run, tr) = simulate(a.clone(), cells, 30, 1 << 20);
    assert_eq!(run.time(), 30);
    assert_eq!(tr.rows.len(), 31);
    let r = render_spacetime(&tr, render_palette(a.codec()), 1 << 20);
    let header = b"P6\n12 31\n255\n".len();
    for y in 1..31 {
        let p = header + 3 * (y * 12 + 5);
        assert_eq!(&r.bytes[p..p + 3], [0, 0, 0], "row {y}");
    }
}

#[test]
fn large_traces_are_strided_with_a_warning() {
    let rows = (0..100).map(|t| (0..100).map(|x| ((t + x) % 4) as u32).collect()).collect();
    let r = render_spacetime(&trace(100, rows), grey, 2500);
    assert_eq!(r.stride, 2);
    assert!(r.bytes.starts_with(b"P6\n50 50\n255\n"));
    assert!(r.warning.unwrap().contains("every 2th"));
}

#[test]
fn simulate_caps_the_trace() {
    let a = Arc::new(AutomatonConfig::constant("01").build().unwrap());
    let (run, tr) = simulate(a.clone(), vec![a.letter(Some(1)); 10], 99, 200);
    assert_eq!(run.time(), 99);
    assert_eq!(tr.stride, 5);
    assert_eq!(tr.times.last(), Some(&95));
}

fn table(w: Vec<u8>) -> CylinderTable {
    MeasureSource::Periodic(PeriodicOrbitMeasure::new(Alphabet::binary(), w).unwrap()).table(3).unwrap()
}

proptest! {
    #[test]
    fn tracker_is_the_arithmetic_mean(words in prop::collection::vec(prop::collection::vec(0u8..2, 1..7), 1..6)) {
        let tables: Vec<CylinderTable> = words.into_iter().map(table).collect();
        let mut t = CesaroTracker::new(&Alphabet::binary(), 3);
        for x in &tables {
            t.push(x).unwrap();
        }
        let m = t.mean().unwrap();
        let n = Q::from_integer((tables.len() as i64).into());
        for (w, p) in m.entries() {
            let sum = tables.iter().fold(Q::from_integer(0.into()), |acc, x| acc + x.get(&w).unwrap());
            prop_assert_eq!(p.clone(), sum / &n);
        }
    }
}

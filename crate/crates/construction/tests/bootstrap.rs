mod common;

use common::*;
use lm_construction::{
    build_automaton, render_palette, segment_scan, AutomatonConfig, ConstructionError, ConstructionRun, LayeredCell,
    SequenceProgramBinding, INIT, WALL,
};
use lm_measures::Alphabet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn close_inits_leave_one_wall() {
    let a = constant_01();
    let mut cells = vec![a.letter(Some(0)); 40];
    cells[10] = INIT;
    cells[12] = INIT;
    let mut run = ConstructionRun::new(a.clone(), cells);
    run.step();
    let r = scan(&run);
    assert_eq!(r.walls.len(), 1);
    assert_eq!(r.walls[0].pos, 10);
    assert_eq!(r.init_cells, 0);
}

#[test]
fn length_three_segment_loses_its_right_wall() {
    let a = constant_01();
    let mut cells = vec![a.letter(Some(1)); 40];
    cells[10] = INIT;
    cells[14] = INIT;
    let mut run = ConstructionRun::new(a.clone(), cells);
    run.step();
    assert_eq!(scan(&run).walls.len(), 2);
    run.step();
    let r = scan(&run);
    assert_eq!(r.walls.len(), 1);
    assert_eq!(r.walls[0].pos, 10);
}

#[test]
fn length_four_segment_survives_bootstrap() {
    let a = constant_01();
    let mut cells = vec![a.letter(Some(1)); 40];
    cells[10] = INIT;
    cells[15] = INIT;
    let mut run = ConstructionRun::new(a.clone(), cells);
    run.run_until(12);
    let r = scan(&run);
    assert_eq!(r.walls.len(), 2);
    assert!(r.walls.iter().all(|w| w.initialized));
    assert_eq!(r.min_length(), Some(4));
}

#[test]
fn one_init_in_junk() {
    let a = constant_01();
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cells: Vec<_> = (0..64).map(|_| junk(&a, &mut rng)).collect();
        cells[30] = INIT;
        let mut run = ConstructionRun::new(a.clone(), cells);
        run.run_until(2);
        let r = scan(&run);
        assert_eq!(r.walls.len(), 1, "seed {seed}");
        assert_eq!(r.segments.len(), 1);
        assert_eq!(r.segments[0].left, 30);
        assert_eq!(r.segments[0].length, 63);
        assert!(r.walls[0].initialized);
    }
}

#[test]
fn output_only_ring_stays_wall_free() {
    let a = constant_01();
    let cells: Vec<_> = (0..100).map(|i| a.letter(Some((i % 3 == 0) as u8))).collect();
    let mut run = ConstructionRun::new(a.clone(), cells.clone());
    for _ in 0..50 {
        run.step();
        let r = scan(&run);
        assert!(r.walls.is_empty());
        assert_eq!(r.aux_density, 0.0);
    }
    assert_eq!(run.cells(), &cells[..]);
}

#[test]
fn walls_start_initialized() {
    let a = constant_01();
    let mut run = ConstructionRun::new(a.clone(), default_ring(&a, 512, 3));
    run.step();
    run.step();
    let r = scan(&run);
    assert!(!r.walls.is_empty());
    assert!(r.walls.iter().all(|w| w.initialized && w.value == Some(1)));
    assert!(r.min_length().unwrap() >= 4);
}

#[test]
fn palette() {
    let a = constant_01();
    let p = render_palette(a.codec());
    assert_eq!(p(WALL), [0, 0, 0]);
    assert_eq!(p(INIT), [220, 30, 30]);
    let zero = p(a.letter(Some(0)));
    let one = p(a.letter(Some(1)));
    assert_ne!(zero, one);
    assert_eq!(zero, p(a.letter(Some(0))));
    for c in 0..a.states() {
        let _ = p(c);
    }
}

#[test]
fn codes_decode() {
    let a = constant_01();
    assert_eq!(a.decode(WALL).unwrap(), LayeredCell::Wall);
    assert_eq!(a.decode(INIT).unwrap(), LayeredCell::Init);
    assert!(matches!(a.decode(a.states()), Err(ConstructionError::BadCell(_))));
    let table = a.codec().code_table();
    assert!(table.lines().count() > 6);
}

#[test]
fn config_round_trip_and_errors() {
    let c = AutomatonConfig::constant("0110");
    let back = AutomatonConfig::from_json(&c.to_json()).unwrap();
    assert_eq!(back.b, c.b);
    back.build().unwrap();

    let bad_q = r#"{"B":["0","1"],"q":4,"binding":{"mode":"host","sequence":{"kind":"explicit","words":["01"]}}}"#;
    assert!(AutomatonConfig::from_json(bad_q).unwrap().build().is_err());

    let other = r#"{"B":["a","b","c"],"binding":{"mode":"host","sequence":{"kind":"explicit","words":["01"]}}}"#;
    assert!(matches!(AutomatonConfig::from_json(other).unwrap().build(), Err(ConstructionError::Invalid(_))));

    let faithful = r#"{"B":["0","1"],"binding":{"mode":"faithful","machines":[]}}"#;
    assert!(AutomatonConfig::from_json(faithful).unwrap().build().is_err());

    let program = c.build().unwrap().program().clone();
    let b = Alphabet::binary();
    let ok = build_automaton(&b, SequenceProgramBinding::HostOracle(program), 5).unwrap();
    assert_eq!(ok.rule().radius(), 3);
}

#[test]
fn scan_on_planted_ring() {
    let a = constant_01();
    let mut run = ConstructionRun::new(a.clone(), planted(&a, 20, 30, 1));
    run.run_until(3);
    let r = segment_scan(&a, run.cells(), run.time(), Some(&[0, 1]));
    assert_eq!(r.walls.len(), 2);
    let total: usize = r.segments.iter().map(|s| s.length + 1).sum();
    assert_eq!(total, run.cells().len());
    let s = r.segments.iter().find(|s| s.left == 0).unwrap();
    assert_eq!(s.length, 20);
    assert!(!s.swept);
    assert_eq!(s.counter, Some(2));
}

use lm_approx::*;
use lm_measures::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn alpha_examples() {
    assert_eq!(alpha_k(2, 1 << 13), Alpha::Finite(q(1, 2)));
    assert_eq!(alpha_k(2, 2), Alpha::Infinite);
    assert_eq!(alpha_k(2, 15), Alpha::Infinite);
    assert_eq!(alpha_k(2, 16), Alpha::Finite(qi(1)));
    assert_eq!(alpha_k(3, 81), Alpha::Finite(q(2, 3)));
}

#[test]
fn alpha_matches_float_formula() {
    for size in [2u64, 3, 4] {
        for e in 0..40u32 {
            for k in [size.pow(e.min(39 / size.ilog2().max(1))), 5u64.saturating_pow(e).min(1 << 40)] {
                let m = (((k as f64).ln() / (size as f64).ln() + 1e-9 - 1.0) / 3.0).floor() as i64;
                match alpha_k(size, k) {
                    Alpha::Infinite => assert!(m <= 0),
                    Alpha::Finite(a) => {
                        let f = (size as f64).powf(-(m as f64) + (2.0 * m as f64).ln() / (size as f64).ln());
                        assert!((to_f64(&a) - f).abs() < 1e-12, "k={k}");
                    }
                }
            }
        }
    }
}

#[test]
fn alpha_monotone_under_six_letters() {
    for size in [2u64, 3] {
        let mut k = size.pow(4);
        while k < 1 << 34 {
            for j in [k, k + 1, 3 * k / 2] {
                assert!(alpha_k(size, size.pow(6) * j) <= alpha_k(size, j), "size {size} k {j}");
            }
            k *= size;
        }
    }
}

fn cyclic_freq(w: &[u8], u: &[u8]) -> Q {
    let l = w.len();
    let c = (0..l).filter(|&i| u.iter().enumerate().all(|(j, &a)| w[(i + j) % l] == a)).count();
    q(c as i64, l as i64)
}

fn check_build(target: &MeasureSource, n: usize) {
    let b = debruijn_build(target, n).unwrap();
    let a = target.alphabet();
    let size = a.size() as u64;
    assert!(b.word.len() as u64 <= debruijn_length_bound(size, n));
    assert_eq!(b.total(), size.pow(3 * n as u32));
    let bound = debruijn_error_bound(size, n);
    for w in a.words(n) {
        let p = cylinder_prob(target, &w).unwrap();
        let f = cyclic_freq(&b.word, &w);
        assert!(abs_diff(&f, &p) <= bound, "{:?}: {} vs {}", w, fmt_q(&f), fmt_q(&p));
        // rounding moved each count by less than one
        let scaled = &p * qi(size.pow(3 * n as u32) as i64);
        assert!(abs_diff(&scaled, &qi(b.counts[a.rank(&w)] as i64)) < qi(1));
        // the word realises the repaired multigraph edge for edge
        assert_eq!(f, q(b.repaired[a.rank(&w)] as i64, b.word.len() as i64));
    }
    // repaired graph is balanced
    let k = a.size();
    for u in 0..a.count(n - 1) {
        let out: u64 = (0..k).map(|x| b.repaired[u * k + x]).sum();
        let inn: u64 = (0..k).map(|x| b.repaired[x * a.count(n - 1) + u]).sum();
        assert_eq!(out, inn);
    }
    assert_eq!(b.word.len() as u64, b.repaired.iter().sum::<u64>());
}

#[test]
fn uniform_depth_two() {
    let b = debruijn_build(&MeasureSource::uniform(&Alphabet::binary()), 2).unwrap();
    assert_eq!(b.word.len(), 64);
    assert_eq!(b.added_edges(), 0);
    for w in Alphabet::binary().words(2) {
        assert_eq!(cyclic_freq(&b.word, &w), q(1, 4));
    }
}

#[test]
fn constant_orbit() {
    let w = debruijn_periodic_approx(&MeasureSource::periodic(&Alphabet::binary(), "0").unwrap(), 2).unwrap();
    assert_eq!(w, vec![0; 64]);
}

#[test]
fn biased_bernoulli() {
    let src = MeasureSource::Bernoulli(BernoulliSpec::new(Alphabet::binary(), vec![q(3, 4), q(1, 4)]).unwrap());
    check_build(&src, 2);
    assert_eq!(debruijn_error_bound(2, 2), q(1, 4));
}

#[test]
fn disconnected_support_is_joined() {
    let a = Alphabet::binary();
    let mix = CylinderTable::mix(
        &MeasureSource::periodic(&a, "0").unwrap().table(3).unwrap(),
        &MeasureSource::periodic(&a, "1").unwrap().table(3).unwrap(),
        &q(1, 2),
    )
    .unwrap();
    let src = MeasureSource::Table(mix);
    for n in 1..=3 {
        check_build(&src, n);
    }
}

#[test]
fn depth_one_uses_a_single_node() {
    let src = MeasureSource::Bernoulli(BernoulliSpec::new(Alphabet::of_size(3), vec![q(1, 2), q(1, 3), q(1, 6)]).unwrap());
    check_build(&src, 1);
}

fn random_markov(rng: &mut ChaCha8Rng, k: usize) -> MeasureSource {
    let p = (0..k)
        .map(|_| {
            let raw: Vec<i64> = (0..k).map(|_| rng.gen_range(0..6)).collect();
            let raw = if raw.iter().all(|&x| x == 0) { vec![1; k] } else { raw };
            let s: i64 = raw.iter().sum();
            raw.into_iter().map(|x| q(x, s)).collect()
        })
        .collect();
    match MarkovSpec::with_stationary(Alphabet::of_size(k), p) {
        Ok(m) => MeasureSource::Markov(m),
        Err(_) => MeasureSource::uniform(&Alphabet::of_size(k)),
    }
}

#[test]
fn random_invariant_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let a = Alphabet::binary();
    for i in 0..20 {
        let src = match i % 3 {
            0 => random_markov(&mut rng, 2),
            1 => {
                let p = rng.gen_range(1..12);
                MeasureSource::Bernoulli(BernoulliSpec::new(a.clone(), vec![q(p, 12), q(12 - p, 12)]).unwrap())
            }
            _ => {
                let w1: Vec<u8> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..2)).collect();
                let w2: Vec<u8> = (0..rng.gen_range(1..6)).map(|_| rng.gen_range(0..2)).collect();
                let t1 = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), w1).unwrap()).table(3).unwrap();
                let t2 = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), w2).unwrap()).table(3).unwrap();
                MeasureSource::Table(CylinderTable::mix(&t1, &t2, &q(rng.gen_range(0..8), 7)).unwrap_or(t1))
            }
        };
        for n in [2, 3] {
            check_build(&src, n);
        }
    }
}

#[test]
fn three_letter_markov() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let src = random_markov(&mut rng, 3);
        check_build(&src, 2);
    }
}

#[test]
fn rejects_non_invariant_and_shallow_tables() {
    let shallow = MeasureSource::Table(MeasureSource::uniform(&Alphabet::binary()).table(1).unwrap());
    assert!(debruijn_build(&shallow, 2).is_err());
    assert!(debruijn_build(&MeasureSource::uniform(&Alphabet::binary()), 0).is_err());
}

#[test]
fn computable_approximation_of_an_orbit() {
    let a = Alphabet::binary();
    let target = MeasureSource::periodic(&a, "01").unwrap();
    let w = approximate_computable_measure(&target, 3).unwrap();
    let got = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), w.clone()).unwrap());
    let (lo, _) = distance_truncated(&got, &target, 10).unwrap();
    assert!(lo <= q(1, 8));
    // feeding the output back stays within twice the precision
    let again = approximate_computable_measure(&got, 3).unwrap();
    let again = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a, again).unwrap());
    let (lo, _) = distance_truncated(&again, &got, 10).unwrap();
    assert!(lo <= q(1, 4));
}

#[test]
fn computable_approximation_of_uniform() {
    let a = Alphabet::binary();
    let target = MeasureSource::uniform(&a);
    let w = approximate_computable_measure(&target, 1).unwrap();
    let got = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a, w).unwrap());
    let (lo, _) = distance_truncated(&got, &target, 10).unwrap();
    assert!(lo <= q(1, 2));
}

//! Sampled rings against the exact pushforward, 4σ per cylinder.

use lm_engine::*;
use lm_measures::{q, sample_ring, to_f64, Alphabet, BernoulliSpec, MeasureSource};

fn check(rule: u8, src: &MeasureSource, t: u64) {
    let r = RuleTable::elementary(rule);
    let (rings, len) = (10_000usize, 2048usize);
    let exact = pushforward_table(&r, src, 3, t as usize).unwrap();
    let words: Vec<Vec<u8>> = (1..=3).flat_map(|n| Alphabet::binary().words(n)).collect();
    let mut sum = vec![0f64; words.len()];
    let mut sq = vec![0f64; words.len()];
    for s in 0..rings {
        let c = RingConfig::from_word(2, &sample_ring(src, len, 1000 + s as u64).unwrap()).unwrap();
        let (out, _) = iterate(&r, &c, t, false).unwrap();
        for (j, w) in words.iter().enumerate() {
            let hits = (0..len).filter(|&i| w.iter().enumerate().all(|(k, &a)| out.cells[(i + k) % len] == a as u32)).count();
            let f = hits as f64 / len as f64;
            sum[j] += f;
            sq[j] += f * f;
        }
    }
    for (j, w) in words.iter().enumerate() {
        let mean = sum[j] / rings as f64;
        let var = (sq[j] / rings as f64 - mean * mean).max(0.0);
        let se = (var / rings as f64).sqrt();
        let p = to_f64(exact.get(w).unwrap());
        assert!((mean - p).abs() <= 4.0 * se + 1e-12, "rule {rule} t {t} {w:?}: {mean} vs {p} (se {se})");
    }
}

#[test]
fn rule_110_uniform() {
    check(110, &MeasureSource::uniform(&Alphabet::binary()), 3);
}

#[test]
fn rule_184_biased() {
    let b = MeasureSource::Bernoulli(BernoulliSpec::new(Alphabet::binary(), vec![q(1, 4), q(3, 4)]).unwrap());
    check(184, &b, 2);
}

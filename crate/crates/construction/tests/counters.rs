use std::cmp::Ordering;

use lm_construction::{
    compare_exact, compare_sign, dec_digits, inc_digits, inc_from_zero, merge_lifetime, merge_start_value, schedule_k,
    schedule_t, CounterDigits, MergeDigits, Schedule, SCHEDULE_LIMIT,
};
use proptest::prelude::*;

fn bits(t: u64) -> usize {
    (64 - t.leading_zeros()) as usize
}

#[test]
fn inc_matches_integers_up_to_2_16() {
    let mut u = CounterDigits::parse("0").unwrap();
    for t in 1..=1u64 << 16 {
        let next = inc_digits(&u);
        assert!(next.len() <= u.len() + 1);
        assert!(next.0.iter().all(|&d| d <= 2));
        u = next;
        assert_eq!(u.val(), t as u128, "after {t} increments");
        assert!(u.len() <= bits(t) + 1, "length {} at {t}", u.len());
    }
}

#[test]
fn thousand_increments() {
    let u = inc_from_zero(1000);
    assert_eq!(u.val(), 1000);
    assert!(u.len() <= 11);
}

#[test]
fn inc_examples() {
    let inc = |s: &str| inc_digits(&CounterDigits::parse(s).unwrap()).to_string();
    assert_eq!(inc("0"), "1");
    assert_eq!(inc("12"), "21");
    assert_eq!(inc(""), "1");
}

#[test]
fn compare_examples() {
    let p = |s: &str| CounterDigits::parse(s).unwrap();
    assert_eq!(compare_sign(&p("1"), &p("1")), Ordering::Equal);
    assert_eq!(compare_sign(&p("2"), &p("1")), Ordering::Greater);
    assert_eq!(compare_sign(&inc_from_zero(37), &inc_from_zero(36)), Ordering::Greater);
}

#[test]
fn compare_exhaustive_up_to_2_12() {
    let n = 1usize << 12;
    let mut all = Vec::with_capacity(n + 1);
    let mut u = CounterDigits::zero();
    all.push(u.clone());
    for _ in 0..n {
        u = inc_digits(&u);
        all.push(u.clone());
    }
    for (i, u) in all.iter().enumerate() {
        for (j, v) in all.iter().enumerate() {
            assert_eq!(compare_sign(u, v), i.cmp(&j), "{u} vs {v}");
        }
    }
}

fn digits() -> impl Strategy<Value = CounterDigits> {
    prop::collection::vec(0u8..=2, 0..24).prop_map(CounterDigits)
}

proptest! {
    #[test]
    fn exact_comparator_on_arbitrary_strings(u in digits(), v in digits()) {
        prop_assert_eq!(compare_exact(&u, &v), u.val().cmp(&v.val()));
    }

    #[test]
    fn inc_on_arbitrary_strings(u in digits()) {
        let w = inc_digits(&u);
        prop_assert_eq!(w.val(), u.val() + 1);
        prop_assert!(w.len() <= u.len().max(1) + 1);
    }

    #[test]
    fn dec_steps_down(v in 1u64..5000) {
        let u = MergeDigits::of(v);
        let w = dec_digits(&u).unwrap();
        prop_assert_eq!(w.val(), v as i64 - 1);
        prop_assert!(w.0.iter().all(|d| (-1..=1).contains(d)));
    }
}

#[test]
fn merge_lifetime_is_monotone() {
    let mut last = 0;
    for v in 2..2000 {
        let l = merge_lifetime(v);
        assert!(l >= last, "lifetime drops at {v}");
        assert!(l > v, "counter {v} gone after {l} steps");
        last = l;
    }
}

#[test]
fn merge_start_values() {
    assert_eq!(merge_start_value(1), None);
    for n in 2..40 {
        let v = merge_start_value(n).unwrap();
        let l = merge_lifetime(v);
        assert!((2 * n..=2 * n + 1).contains(&l), "n {n}: V {v} lives {l}");
        assert_eq!(v, 2 * n - 1, "n {n}");
    }
}

#[test]
fn schedule_examples() {
    let s = Schedule::default();
    let t: Vec<u64> = (1..=10).map(|n| schedule_t(&s, n).unwrap()).collect();
    assert_eq!(t, [7, 12, 17, 42, 67, 92, 117, 142, 267, 392]);
    assert_eq!(schedule_k(&s, 4).unwrap(), 5);
    assert_eq!(schedule_k(&s, 9).unwrap(), 12);
    assert_eq!(s.phase(1), None);
    assert_eq!(s.phase(2), Some(0));
    assert_eq!(s.phase(41), Some(3));
    assert_eq!(s.phase(42), Some(4));
}

#[test]
fn schedule_increases_until_the_guard() {
    let s = Schedule::default();
    let mut last = s.t(0).unwrap();
    let mut n = 1;
    loop {
        match s.t(n) {
            Ok(t) => {
                assert!(t > last);
                assert!(t <= SCHEDULE_LIMIT);
                last = t;
            }
            Err(_) => break,
        }
        n += 1;
    }
    // the sum passes 2^62 while Δ_n is still 5^24 or 5^25
    assert!((576..676).contains(&n), "guard at {n}");
    assert!(s.t(10_000).is_err());
    assert!(Schedule::new(4).is_err());
}

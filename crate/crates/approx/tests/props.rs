use lm_approx::*;
use lm_measures::*;
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..2, 1..9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn orbit_distance_is_a_pseudometric(u in word(), v in word(), w in word()) {
        let d = |a: &[u8], b: &[u8]| orbit_distance(2, a, b, 10).0;
        prop_assert_eq!(d(&u, &u), qi(0));
        prop_assert_eq!(d(&u, &v), d(&v, &u));
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w));
    }

    #[test]
    fn orbit_distance_is_rotation_invariant(u in word(), v in word(), r in 0usize..9) {
        prop_assert_eq!(orbit_distance(2, &u, &v, 8), orbit_distance(2, &rotate(&u, r), &v, 8));
    }

    #[test]
    fn periodic_debruijn_stays_close(u in word(), n in 1usize..4) {
        let a = Alphabet::binary();
        let src = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a.clone(), u.clone()).unwrap());
        let w = debruijn_periodic_approx(&src, n).unwrap();
        prop_assert!(w.len() as u64 <= debruijn_length_bound(2, n));
        let got = MeasureSource::Periodic(PeriodicOrbitMeasure::new(a, w).unwrap());
        for x in Alphabet::binary().words(n) {
            let diff = abs_diff(&cylinder_prob(&got, &x).unwrap(), &cylinder_prob(&src, &x).unwrap());
            prop_assert!(diff <= debruijn_error_bound(2, n));
        }
    }

    #[test]
    fn alpha_never_increases(k in 16u64..1 << 40) {
        prop_assert!(alpha_k(2, k + 1) <= alpha_k(2, k));
        prop_assert!(alpha_k(2, 64 * k) <= alpha_k(2, k));
    }
}

use maxstar::tnorm::{Summand, TNormSpec};
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    (0u32..=64).prop_map(|k| f64::from(k) / 64.0)
}

fn ordered() -> impl Strategy<Value = (f64, f64)> {
    (0u32..=64).prop_flat_map(|t| (Just(t), 0..=t)).prop_map(|(t, v)| (f64::from(t) / 64.0, f64::from(v) / 64.0))
}

fn tnorm() -> impl Strategy<Value = TNormSpec> {
    let nested = TNormSpec::ordinal_sum(vec![
        Summand { a: 0.0, b: 0.25, inner: TNormSpec::Product },
        Summand { a: 0.5, b: 0.75, inner: TNormSpec::Lukasiewicz },
        Summand { a: 0.75, b: 1.0, inner: TNormSpec::Product },
    ])
    .unwrap();
    prop_oneof![
        Just(TNormSpec::Min),
        Just(TNormSpec::Product),
        Just(TNormSpec::Lukasiewicz),
        Just(TNormSpec::SectionT),
        Just(nested),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn commutative_and_associative(tn in tnorm(), s in unit(), p in unit(), l in unit()) {
        prop_assert!((tn.apply(s, p) - tn.apply(p, s)).abs() <= 1e-9);
        let left = tn.apply(tn.apply(s, p), l);
        let right = tn.apply(s, tn.apply(p, l));
        prop_assert!((left - right).abs() <= 1e-9);
    }

    #[test]
    fn unit_and_zero_are_exact(tn in tnorm(), s in unit()) {
        prop_assert_eq!(tn.apply(s, 1.0), s);
        prop_assert_eq!(tn.apply(s, 0.0), 0.0);
    }

    #[test]
    fn monotone(tn in tnorm(), s in unit(), p in unit(), q in unit()) {
        let (lo, hi) = if p <= q { (p, q) } else { (q, p) };
        prop_assert!(tn.apply(s, lo) <= tn.apply(s, hi) + 1e-15);
    }

    #[test]
    fn adjunction(tn in tnorm(), a in unit(), b in unit(), l in unit()) {
        let r = tn.residual(a, b).unwrap();
        prop_assert_eq!(tn.apply(a, l) <= b + 1e-12, l <= r + 1e-9);
    }

    #[test]
    fn pseudo_inverse_solves(tn in tnorm(), (t, v) in ordered()) {
        let k = tn.pseudo_inverse(t, v).unwrap();
        prop_assert!((tn.apply(t, k) - v).abs() <= 1e-9);
        let (lo, hi) = tn.level_set(t, v).unwrap();
        prop_assert!(lo <= hi);
        prop_assert!((tn.apply(t, lo) - v).abs() <= 1e-9);
    }

    #[test]
    fn closed_form_matches_bisection(tn in tnorm(), (t, v) in ordered()) {
        let closed = tn.pseudo_inverse(t, v).unwrap();
        let searched = tn.pseudo_inverse_bisection(t, v);
        prop_assert!((closed - searched).abs() <= 1e-10, "{} vs {}", closed, searched);
    }
}

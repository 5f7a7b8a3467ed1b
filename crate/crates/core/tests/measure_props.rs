use maxstar::convexity::{combine_points, n_ary_combine, ConvexBody, CubePoint};
use maxstar::measures::{FunctionOnSpace, IdempotentMeasure, SpaceMap, WeightPair};
use maxstar::tnorm::TNormSpec;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    (0u32..=64).prop_map(|k| f64::from(k) / 64.0)
}

fn tnorm() -> impl Strategy<Value = TNormSpec> {
    prop::sample::select(TNormSpec::builtins().to_vec())
}

fn density(n: usize) -> impl Strategy<Value = Vec<f64>> {
    (prop::collection::vec(unit(), n), 0..n).prop_map(|(mut d, top)| {
        d[top] = 1.0;
        d
    })
}

fn weights() -> impl Strategy<Value = WeightPair> {
    (unit(), any::<bool>()).prop_map(|(v, left)| {
        if left {
            WeightPair::new(v, 1.0).unwrap()
        } else {
            WeightPair::new(1.0, v).unwrap()
        }
    })
}

fn map(n: usize, m: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..m, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn functional_axioms(
        tn in tnorm(),
        d in density(5),
        phi in prop::collection::vec(unit(), 5),
        psi in prop::collection::vec(unit(), 5),
        c in unit(),
    ) {
        let mu = IdempotentMeasure::from_density(d, tn.clone()).unwrap();
        let gap = mu
            .functional_axiom_gap(&FunctionOnSpace::new(phi).unwrap(), &FunctionOnSpace::new(psi).unwrap(), c)
            .unwrap();
        let limit = if matches!(tn, TNormSpec::Min | TNormSpec::Lukasiewicz) { 1e-12 } else { 1e-9 };
        prop_assert!(gap <= limit);
    }

    #[test]
    fn pushforward_is_functorial(
        tn in tnorm(),
        d in density(6),
        f in map(6, 4),
        g in map(4, 3),
    ) {
        let mu = IdempotentMeasure::from_density(d, tn).unwrap();
        let f = SpaceMap::from_image(f, 4).unwrap();
        let g = SpaceMap::from_image(g, 3).unwrap();
        let once = mu.pushforward(&f.then(&g).unwrap()).unwrap();
        let twice = mu.pushforward(&f).unwrap().pushforward(&g).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn pushforward_commutes_with_combination(
        tn in tnorm(),
        a in density(5),
        b in density(5),
        w in weights(),
        f in map(5, 3),
    ) {
        let mu = IdempotentMeasure::from_density(a, tn.clone()).unwrap();
        let nu = IdempotentMeasure::from_density(b, tn).unwrap();
        let f = SpaceMap::from_image(f, 3).unwrap();
        let down = mu.combine(&nu, w).unwrap().pushforward(&f).unwrap();
        let across = mu.pushforward(&f).unwrap().combine(&nu.pushforward(&f).unwrap(), w).unwrap();
        prop_assert!(down.distance(&across).unwrap() <= 1e-12);
        prop_assert!(down.density().contains(&1.0));
    }

    #[test]
    fn combine_points_is_monotone(
        tn in tnorm(),
        x in unit(), y in unit(), t in unit(), bump in unit(), which in 0..3usize,
    ) {
        let w = WeightPair::new(t, 1.0).unwrap();
        let pt = |v: f64| CubePoint::scalar(v).unwrap();
        let base = combine_points(&pt(x), &pt(y), w, &tn).unwrap().coords()[0];
        let up = |v: f64| (v + bump).min(1.0);
        let moved = match which {
            0 => combine_points(&pt(up(x)), &pt(y), w, &tn),
            1 => combine_points(&pt(x), &pt(up(y)), w, &tn),
            _ => combine_points(&pt(x), &pt(y), WeightPair::new(up(t), 1.0).unwrap(), &tn),
        }
        .unwrap()
        .coords()[0];
        prop_assert!(base <= moved + 1e-15);
    }

    #[test]
    fn combine_points_is_symmetric(
        tn in tnorm(),
        x in prop::collection::vec(unit(), 3),
        y in prop::collection::vec(unit(), 3),
        w in weights(),
    ) {
        let x = CubePoint::new(x).unwrap();
        let y = CubePoint::new(y).unwrap();
        prop_assert_eq!(
            combine_points(&x, &y, w, &tn).unwrap(),
            combine_points(&y, &x, w.swapped(), &tn).unwrap()
        );
    }

    #[test]
    fn hull_contains_its_combinations(
        tn in tnorm(),
        gens in prop::collection::vec(prop::collection::vec(unit(), 2), 1..5),
        seed in density(4),
    ) {
        let k = gens.len();
        let mut rho = seed[..k].to_vec();
        if !rho.contains(&1.0) {
            rho[0] = 1.0;
        }
        let gens: Vec<CubePoint> = gens.into_iter().map(|g| CubePoint::new(g).unwrap()).collect();
        let z = n_ary_combine(&gens, &rho, &tn).unwrap();
        let body = ConvexBody::new(gens, tn).unwrap();
        prop_assert!(body.membership(&z).unwrap().member);
    }
}

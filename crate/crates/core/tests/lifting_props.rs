use maxstar::barycenter::{barycenter, cover_approximation, Cover, EmbeddedMeasure};
use maxstar::convexity::CubePoint;
use maxstar::lifting::{
    deviation_lower_bound, lift_barycenter, lift_measure_combination, lift_point_min,
    GridSearchOracle, MinIntervalOracle,
};
use maxstar::measures::{IdempotentMeasure, WeightPair};
use maxstar::tnorm::TNormSpec;
use maxstar::Error;
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
    (unit(), 0..3u8).prop_map(|(v, side)| match side {
        0 => WeightPair::new(1.0, 1.0).unwrap(),
        1 => WeightPair::new(v, 1.0).unwrap(),
        _ => WeightPair::new(1.0, v).unwrap(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// Any target: either the lift is exact and above the lower bound, or the
    /// target is declared out of reach.
    #[test]
    fn measure_lifts_are_exact_or_too_far(
        tn in tnorm(),
        l in density(4),
        b in density(4),
        a in density(4),
        w in weights(),
    ) {
        let m = |d: Vec<f64>| IdempotentMeasure::from_density(d, tn.clone()).unwrap();
        let (l, b, a) = (m(l), m(b), m(a));
        match lift_measure_combination(&l, &b, w, &a) {
            Ok(lift) => {
                let back = lift.lifted_left.combine(&lift.lifted_right, lift.lifted_weights).unwrap();
                prop_assert!(back.distance(&a).unwrap() <= 1e-9);
                let floor = deviation_lower_bound(&l, &b, w, &a).unwrap();
                prop_assert!(floor <= lift.deviation + 1e-9, "{} > {}", floor, lift.deviation);
            }
            Err(Error::TooFar(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn identity_lifts_do_not_move(tn in tnorm(), l in density(4), b in density(4), w in weights()) {
        let m = |d: Vec<f64>| IdempotentMeasure::from_density(d, tn.clone()).unwrap();
        let (l, b) = (m(l), m(b));
        let here = l.combine(&b, w).unwrap();
        let lift = lift_measure_combination(&l, &b, w, &here).unwrap();
        prop_assert_eq!(lift.deviation, 0.0);
    }

    #[test]
    fn min_point_lift_is_exact(x in unit(), y in unit(), w in weights(), z in unit()) {
        let r = lift_point_min(x, y, w, z).unwrap();
        let got = r.lifted_weights.t().min(r.lifted_left).max(r.lifted_weights.p().min(r.lifted_right));
        prop_assert_eq!(got, z);
        let now = w.t().min(x).max(w.p().min(y));
        prop_assert!((r.deviation - (z - now).abs()).abs() <= 1e-12);
    }

    #[test]
    fn min_barycenter_lift(
        k in 1usize..=5,
        coords in prop::collection::vec(unit(), 5),
        d in density(5),
        shift in -4i32..=4,
    ) {
        let mut dens = d[..k].to_vec();
        if !dens.contains(&1.0) {
            dens[k - 1] = 1.0;
        }
        let em = EmbeddedMeasure::from_parts(
            coords[..k].iter().map(|&c| vec![c]).collect(),
            dens,
            TNormSpec::Min,
        )
        .unwrap();
        let b = barycenter(&em).unwrap().coords()[0];
        let z = (b + f64::from(shift) / 64.0).clamp(0.0, 1.0);
        let r = lift_barycenter(&em, &MinIntervalOracle, &CubePoint::scalar(z).unwrap()).unwrap();
        prop_assert_eq!(r.lifted.len(), k);
        prop_assert_eq!(barycenter(&r.lifted).unwrap().coords()[0], z);
        prop_assert!(r.lifted.density().contains(&1.0));
    }

    #[test]
    fn grid_barycenter_lift_is_exact_when_it_succeeds(
        tn in tnorm(),
        coords in prop::collection::vec(prop::collection::vec(unit(), 2), 3),
        d in density(3),
        shift in prop::collection::vec(-2i32..=2, 2),
    ) {
        let em = EmbeddedMeasure::from_parts(coords, d, tn).unwrap();
        let b = barycenter(&em).unwrap();
        let z: Vec<f64> = b.coords().iter().zip(&shift).map(|(c, s)| (c + f64::from(*s) / 64.0).clamp(0.0, 1.0)).collect();
        let target = CubePoint::new(z).unwrap();
        match lift_barycenter(&em, &GridSearchOracle::default(), &target) {
            Ok(r) => prop_assert!(barycenter(&r.lifted).unwrap().distance(&target) <= 1e-9),
            Err(Error::TooFar(_)) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn cover_keeps_barycenter(
        tn in tnorm(),
        coords in prop::collection::vec(prop::collection::vec(unit(), 2), 4),
        d in density(4),
        assign in prop::collection::vec(0usize..3, 4),
    ) {
        let em = EmbeddedMeasure::from_parts(coords, d, tn).unwrap();
        let mut blocks = vec![Vec::new(); 3];
        for (i, &b) in assign.iter().enumerate() {
            blocks[b].push(i);
        }
        blocks.retain(|b| !b.is_empty());
        let approx = cover_approximation(&em, &Cover::new(blocks)).unwrap();
        prop_assert!(barycenter(&approx).unwrap().distance(&barycenter(&em).unwrap()) <= 1e-9);
    }
}

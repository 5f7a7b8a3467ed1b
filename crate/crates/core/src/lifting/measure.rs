use serde::{Deserialize, Serialize};

use super::LiftResult;
use crate::error::{Error, Result};
use crate::measures::{sup_distance, IdempotentMeasure, SpaceMap, WeightPair};
use crate::tnorm::{TNormSpec, NORM_TOL, TOL};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    /// The left term strictly loses: `t * l < b`.
    A,
    /// The left term strictly wins.
    B,
    /// Tie.
    C,
}

fn classify(tn: &TNormSpec, t: f64, l: &[f64], b: &[f64]) -> Vec<Side> {
    l.iter()
        .zip(b)
        .map(|(&li, &bi)| {
            let left = tn.apply(t, li);
            if left < bi {
                Side::A
            } else if left > bi {
                Side::B
            } else {
                Side::C
            }
        })
        .collect()
}

/// Lifted densities before they are wrapped into measures.
struct Raw {
    left: Vec<f64>,
    right: Vec<f64>,
    t: f64,
    p: f64,
    case: &'static str,
}

/// Lifts the combination `t ⊙ lambda ⊕ p ⊙ beta` to a nearby target `alpha`.
///
/// Returns `(lambda', beta', w')` with `t' ⊙ lambda' ⊕ p' ⊙ beta' = alpha`.
/// Fails with [`Error::TooFar`] when `alpha` leaves the region where the
/// construction applies: a coordinate where one side strictly dominates must
/// keep that side able to reach `alpha`, and some atom of weight 1 in
/// `alpha` must sit where the construction can anchor the right measure.
pub fn lift_measure_combination(
    lambda: &IdempotentMeasure,
    beta: &IdempotentMeasure,
    w: WeightPair,
    alpha: &IdempotentMeasure,
) -> Result<LiftResult<IdempotentMeasure>> {
    for m in [beta, alpha] {
        if m.len() != lambda.len() {
            return Err(Error::SpaceMismatch {
                left: lambda.len(),
                right: m.len(),
            });
        }
        if m.tnorm() != lambda.tnorm() {
            return Err(Error::TNormMismatch);
        }
    }
    let tn = lambda.tnorm();
    // Normalize to p = 1; the case t = 1 > p is the mirror image.
    let swapped = w.p() < 1.0;
    let (l, b, t) = if swapped {
        (beta.density(), lambda.density(), w.p())
    } else {
        (lambda.density(), beta.density(), w.t())
    };
    let a = alpha.density();

    let raw = if t >= 1.0 {
        lift_equal_weights(tn, l, b, a)?
    } else if t <= 0.0 {
        Raw {
            left: l.to_vec(),
            right: a.to_vec(),
            t: 0.0,
            p: 1.0,
            case: "t=0",
        }
    } else {
        lift_partial_weight(tn, t, l, b, a)?
    };

    let (left, right, weights) = if swapped {
        (raw.right, raw.left, WeightPair::new(raw.p, raw.t)?)
    } else {
        (raw.left, raw.right, WeightPair::new(raw.t, raw.p)?)
    };
    let case = if swapped {
        format!("mirrored/{}", raw.case)
    } else {
        raw.case.to_string()
    };
    let wrap = |d: Vec<f64>| {
        IdempotentMeasure::new(lambda.space().clone(), d, tn.clone()).map_err(|e| {
            Error::ConstructionFailed(format!("{case}: lifted density is invalid ({e})"))
        })
    };
    let left = wrap(left)?;
    let right = wrap(right)?;
    let recombined = left.combine(&right, weights)?;
    let gap = sup_distance(recombined.density(), a);
    if gap > TOL {
        return Err(Error::ConstructionFailed(format!(
            "{case}: recombination misses the target by {gap} under {tn}"
        )));
    }
    let deviation = (weights.t() - w.t())
        .abs()
        .max((weights.p() - w.p()).abs())
        .max(sup_distance(left.density(), lambda.density()))
        .max(sup_distance(right.density(), beta.density()));
    Ok(LiftResult {
        lifted_left: left,
        lifted_right: right,
        lifted_weights: weights,
        deviation,
        case,
    })
}

fn first_full(a: &[f64], pred: impl Fn(usize) -> bool) -> Option<usize> {
    (0..a.len()).find(|&i| a[i] >= 1.0 - NORM_TOL && pred(i))
}

fn lift_equal_weights(tn: &TNormSpec, l: &[f64], b: &[f64], a: &[f64]) -> Result<Raw> {
    let sides = classify(tn, 1.0, l, b);
    let i0 = first_full(a, |_| true)
        .ok_or_else(|| Error::TooFar("target has no atom of weight 1".into()))?;
    match sides[i0] {
        Side::C => {
            check_region(tn, 1.0, l, b, a, &sides)?;
            let left = (0..a.len())
                .map(|i| if sides[i] == Side::A { l[i] } else { a[i] })
                .collect();
            let right = (0..a.len())
                .map(|i| if sides[i] == Side::B { b[i] } else { a[i] })
                .collect();
            Ok(Raw {
                left,
                right,
                t: 1.0,
                p: 1.0,
                case: "t=p=1/i0∈C",
            })
        }
        Side::A => {
            let mut raw = anchored_lift(tn, l, b, a, &sides)?;
            raw.case = "t=p=1/i0∈A";
            Ok(raw)
        }
        Side::B => {
            // Mirror: exchange the roles of the two measures.
            let mirrored = classify(tn, 1.0, b, l);
            let raw = anchored_lift(tn, b, l, a, &mirrored)?;
            Ok(Raw {
                left: raw.right,
                right: raw.left,
                t: raw.p,
                p: raw.t,
                case: "t=p=1/i0∈B",
            })
        }
    }
}

/// Lift with new weight `c = max_{i∉A} a_i` on the left measure, anchoring
/// its normalization at the argmax.
fn anchored_lift(tn: &TNormSpec, l: &[f64], b: &[f64], a: &[f64], sides: &[Side]) -> Result<Raw> {
    let j = argmax_outside_a(l, a, sides).ok_or_else(|| {
        Error::TooFar("every coordinate favours the right measure".into())
    })?;
    let c = a[j];
    check_region(tn, c, l, b, a, sides)?;
    let left = fill_left(tn, c, l, a, sides, Some(j))?;
    let right = fill_right(b, a, sides);
    Ok(Raw {
        left,
        right,
        t: c,
        p: 1.0,
        case: "anchored",
    })
}

/// Highest target value outside `A`; ties prefer the largest base weight,
/// then the lowest index.
fn argmax_outside_a(l: &[f64], a: &[f64], sides: &[Side]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in (0..a.len()).filter(|&i| sides[i] != Side::A) {
        best = match best {
            None => Some(i),
            Some(k) if a[i] > a[k] || (a[i] == a[k] && l[i] > l[k]) => Some(i),
            keep => keep,
        };
    }
    best
}

/// Checks that the target keeps every strict dominance of the base.
fn check_region(
    tn: &TNormSpec,
    t_new: f64,
    l: &[f64],
    b: &[f64],
    a: &[f64],
    sides: &[Side],
) -> Result<()> {
    for i in 0..a.len() {
        match sides[i] {
            Side::A if tn.apply(t_new, l[i]) > a[i] + TOL => {
                return Err(Error::TooFar(format!(
                    "coordinate {i}: target {} is below the retained left term {}",
                    a[i],
                    tn.apply(t_new, l[i])
                )))
            }
            Side::B if a[i] < b[i] - TOL => {
                return Err(Error::TooFar(format!(
                    "coordinate {i}: target {} is below the retained right term {}",
                    a[i], b[i]
                )))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Left density of a lift with new weight `t_new`.
///
/// On `A` the base weight is kept. On `B` the weight must solve
/// `t_new * l' = a` and the solution closest to the base weight is taken; on
/// `C` the right measure already carries `a`, so `t_new * l' <= a` suffices.
fn fill_left(
    tn: &TNormSpec,
    t_new: f64,
    l: &[f64],
    a: &[f64],
    sides: &[Side],
    anchor: Option<usize>,
) -> Result<Vec<f64>> {
    (0..a.len())
        .map(|i| {
            if sides[i] == Side::A {
                return Ok(l[i]);
            }
            if anchor == Some(i) {
                return Ok(1.0);
            }
            let now = tn.apply(t_new, l[i]);
            match sides[i] {
                Side::B if now == a[i] => Ok(l[i]),
                Side::B => {
                    let (lo, hi) = tn.level_set(t_new, a[i])?;
                    Ok(l[i].clamp(lo, hi))
                }
                _ if now <= a[i] => Ok(l[i]),
                _ => Ok(l[i].min(tn.residual(t_new, a[i])?)),
            }
        })
        .collect()
}

fn fill_right(b: &[f64], a: &[f64], sides: &[Side]) -> Vec<f64> {
    (0..a.len())
        .map(|i| if sides[i] == Side::B { b[i] } else { a[i] })
        .collect()
}

fn lift_partial_weight(tn: &TNormSpec, t: f64, l: &[f64], b: &[f64], a: &[f64]) -> Result<Raw> {
    let sides = classify(tn, t, l, b);
    first_full(a, |i| sides[i] == Side::A && b[i] >= 1.0 - NORM_TOL).ok_or_else(|| {
        Error::TooFar("no atom of weight 1 in the target where the right measure is 1".into())
    })?;
    let outside_max = (0..a.len())
        .filter(|&i| sides[i] != Side::A)
        .map(|i| a[i])
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
    let left_full_in_a = (0..a.len()).any(|i| sides[i] == Side::A && l[i] >= 1.0 - NORM_TOL);

    if left_full_in_a {
        // The left measure keeps its atom of weight 1 on A, so any weight
        // that passes the region check works; the closest one is kept.
        let first = outside_max.map_or(t, |m| m.max(t));
        let mut candidates = vec![first];
        candidates.extend(outside_max);
        for i in (0..a.len()).filter(|&i| sides[i] == Side::B) {
            if let Ok((lo, hi)) = tn.level_set(l[i], a[i]) {
                candidates.push(t.clamp(lo, hi));
            }
        }
        let mut best: Option<(f64, f64, Vec<f64>)> = None;
        for t_new in candidates {
            if check_region(tn, t_new, l, b, a, &sides).is_err() {
                continue;
            }
            let Ok(left) = fill_left(tn, t_new, l, a, &sides, None) else {
                continue;
            };
            let dev = (t_new - t).abs().max(sup_distance(&left, l));
            if best.as_ref().is_none_or(|(d, ..)| dev < *d) {
                best = Some((dev, t_new, left));
            }
        }
        let Some((_, t_new, left)) = best else {
            check_region(tn, first, l, b, a, &sides)?;
            fill_left(tn, first, l, a, &sides, None)?;
            return Err(Error::ConstructionFailed("no admissible weight".into()));
        };
        Ok(Raw {
            left,
            right: fill_right(b, a, &sides),
            t: t_new,
            p: 1.0,
            case: "0<t<1/λ normalized on A",
        })
    } else {
        let mut raw = anchored_lift(tn, l, b, a, &sides)?;
        raw.case = "0<t<1/λ anchored at argmax";
        Ok(raw)
    }
}

/// Lower bound on the deviation of every lift of `(lambda, beta, w)` to
/// `alpha`, with or without normalization.
///
/// Fix a radius `d`. For each coordinate and each value `s` of the free
/// weight, the combination sweeps the interval between its values at the
/// lower and upper corners of the box around the other inputs, by
/// monotonicity and continuity. The admissible `s` for one coordinate then
/// form an interval, and a lift within `d` needs all these intervals to
/// meet. The other weight is left free per coordinate, which only weakens
/// the bound. Bisection on `d` gives the smallest feasible radius.
pub fn deviation_lower_bound(
    lambda: &IdempotentMeasure,
    beta: &IdempotentMeasure,
    w: WeightPair,
    alpha: &IdempotentMeasure,
) -> Result<f64> {
    lambda.distance(beta)?;
    lambda.distance(alpha)?;
    let tn = lambda.tnorm();
    let (l, b, t, p) = if w.p() < 1.0 {
        (beta.density(), lambda.density(), w.p(), w.t())
    } else {
        (lambda.density(), beta.density(), w.t(), w.p())
    };
    let z = alpha.density();
    let feasible = |d: f64| {
        let dn = |v: f64| (v - d).max(0.0);
        let up = |v: f64| (v + d).min(1.0);
        let (s_lo, s_hi) = (dn(t), up(t));
        let (mut lower, mut upper) = (s_lo, s_hi);
        for i in 0..z.len() {
            let bottom = |s: f64| tn.apply(s, dn(l[i])).max(tn.apply(dn(p), dn(b[i])));
            let top = |s: f64| tn.apply(s, up(l[i])).max(tn.apply(up(p), up(b[i])));
            if bottom(s_lo) > z[i] || top(s_hi) < z[i] {
                return false;
            }
            // Largest s with bottom(s) <= z and smallest s with top(s) >= z.
            let mut hi = s_hi;
            if bottom(s_hi) > z[i] {
                let mut a = s_lo;
                for _ in 0..50 {
                    let mid = 0.5 * (a + hi);
                    if bottom(mid) <= z[i] {
                        a = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            let mut lo = s_lo;
            if top(s_lo) < z[i] {
                let mut c = s_hi;
                for _ in 0..50 {
                    let mid = 0.5 * (lo + c);
                    if top(mid) >= z[i] {
                        c = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
            lower = lower.max(lo);
            upper = upper.min(hi);
        }
        lower <= upper + 1e-12
    };
    if feasible(0.0) {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}

/// Lift of a commuting square along a map that merges points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BicommutativeLift {
    /// Lift of the first measure (`mu`).
    pub lambda: IdempotentMeasure,
    /// Lift of the second measure (`a`).
    pub eta: IdempotentMeasure,
    pub weights: WeightPair,
    /// `|s(lambda, eta, w) - nu|`.
    pub combination_gap: f64,
    /// `|f_* lambda - mu|`.
    pub first_gap: f64,
    /// `|f_* eta - a|`.
    pub second_gap: f64,
}

/// Given `nu` on the source of `f` with `f_* nu = t ⊙ mu ⊕ p ⊙ a`, returns
/// `lambda`, `eta` on the source with `f_* lambda = mu`, `f_* eta = a` and
/// `t ⊙ lambda ⊕ p ⊙ eta = nu`.
///
/// Points alone in their fiber copy the base weights. In a merged fiber over
/// `j` each point `x` gets `lambda_x = min(mu_j, sup{l : t * l = nu_x})` when
/// `nu_x <= t` (else `mu_j`) and `eta_x = min(a_j, nu_x)`. Fibers of any size
/// are handled the same way.
pub fn bicommutative_lift(
    nu: &IdempotentMeasure,
    f: &SpaceMap,
    mu: &IdempotentMeasure,
    a: &IdempotentMeasure,
    w: WeightPair,
) -> Result<BicommutativeLift> {
    if nu.len() != f.source().n {
        return Err(Error::SpaceMismatch {
            left: nu.len(),
            right: f.source().n,
        });
    }
    for m in [mu, a] {
        if m.len() != f.target().n {
            return Err(Error::SpaceMismatch {
                left: m.len(),
                right: f.target().n,
            });
        }
        if m.tnorm() != nu.tnorm() {
            return Err(Error::TNormMismatch);
        }
    }
    if !f.is_onto() {
        return Err(Error::Precondition("the collapsing map must be onto".into()));
    }
    let square_gap = nu.pushforward(f)?.distance(&mu.combine(a, w)?)?;
    if square_gap > TOL {
        return Err(Error::Precondition(format!(
            "the square does not commute (gap {square_gap})"
        )));
    }

    let tn = nu.tnorm();
    let swapped = w.p() < 1.0;
    let (first, second, t) = if swapped {
        (a.density(), mu.density(), w.p())
    } else {
        (mu.density(), a.density(), w.t())
    };
    let fibers = f.fibers();
    let n = nu.len();
    let mut lifted_first = vec![0.0; n];
    let mut lifted_second = vec![0.0; n];
    for (j, fiber) in fibers.iter().enumerate() {
        for &x in fiber {
            if fiber.len() == 1 {
                lifted_first[x] = first[j];
                lifted_second[x] = second[j];
                continue;
            }
            let v = nu.density()[x];
            lifted_first[x] = if v <= t {
                first[j].min(tn.pseudo_inverse(t, v)?)
            } else {
                first[j]
            };
            lifted_second[x] = second[j].min(v);
        }
    }
    if swapped {
        std::mem::swap(&mut lifted_first, &mut lifted_second);
    }
    let wrap = |d: Vec<f64>| {
        IdempotentMeasure::new(nu.space().clone(), d, tn.clone())
            .map_err(|e| Error::ConstructionFailed(format!("lifted density is invalid ({e})")))
    };
    let lambda = wrap(lifted_first)?;
    let eta = wrap(lifted_second)?;
    let combination_gap = lambda.combine(&eta, w)?.distance(nu)?;
    let first_gap = lambda.pushforward(f)?.distance(mu)?;
    let second_gap = eta.pushforward(f)?.distance(a)?;
    let worst = combination_gap.max(first_gap).max(second_gap);
    if worst > TOL {
        return Err(Error::ConstructionFailed(format!(
            "bicommutative lift is off by {worst} under {tn}"
        )));
    }
    Ok(BicommutativeLift {
        lambda,
        eta,
        weights: w,
        combination_gap,
        first_gap,
        second_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: &[f64], t: &TNormSpec) -> IdempotentMeasure {
        IdempotentMeasure::from_density(d.to_vec(), t.clone()).unwrap()
    }

    fn w(t: f64, p: f64) -> WeightPair {
        WeightPair::new(t, p).unwrap()
    }

    #[test]
    fn equal_weights_tie_anchor() {
        for tn in TNormSpec::builtins() {
            let lift = lift_measure_combination(
                &m(&[1.0, 0.3], &tn),
                &m(&[1.0, 0.6], &tn),
                w(1.0, 1.0),
                &m(&[1.0, 0.58], &tn),
            )
            .unwrap();
            assert_eq!(lift.lifted_left.density(), &[1.0, 0.3]);
            assert_eq!(lift.lifted_right.density(), &[1.0, 0.58]);
            assert_eq!(lift.lifted_weights, w(1.0, 1.0));
            assert_eq!(lift.case, "t=p=1/i0∈C");
        }
    }

    #[test]
    fn identity_lift_has_zero_deviation() {
        type Case<'a> = (&'a [f64], &'a [f64], (f64, f64));
        let cases: [Case; 5] = [
            (&[1.0, 0.3, 0.8], &[0.2, 1.0, 0.5], (1.0, 1.0)),
            (&[1.0, 0.3, 0.8], &[0.2, 1.0, 0.5], (0.5, 1.0)),
            (&[0.4, 1.0, 0.9], &[1.0, 0.1, 0.3], (0.625, 1.0)),
            (&[0.4, 1.0, 0.9], &[1.0, 0.1, 0.3], (1.0, 0.25)),
            (&[0.4, 1.0, 0.9], &[1.0, 0.1, 0.3], (0.0, 1.0)),
        ];
        for tn in TNormSpec::builtins() {
            for (l, b, (t, p)) in cases {
                let (l, b) = (m(l, &tn), m(b, &tn));
                let target = l.combine(&b, w(t, p)).unwrap();
                let lift = lift_measure_combination(&l, &b, w(t, p), &target)
                    .unwrap_or_else(|e| panic!("{tn} {t} {p}: {e}"));
                assert_eq!(lift.deviation, 0.0, "{tn} ({t},{p}) case {}", lift.case);
            }
        }
    }

    #[test]
    fn zero_weight_replaces_right_measure() {
        let tn = TNormSpec::Product;
        let l = m(&[1.0, 0.3], &tn);
        let target = m(&[0.2, 1.0], &tn);
        let lift = lift_measure_combination(&l, &m(&[0.5, 1.0], &tn), w(0.0, 1.0), &target).unwrap();
        assert_eq!(lift.lifted_left, l);
        assert_eq!(lift.lifted_right, target);
        assert_eq!(lift.case, "t=0");
    }

    #[test]
    fn anchored_lifts_recombine() {
        // i0 ∈ A with t = p = 1: the left measure gets weight c < 1
        for tn in TNormSpec::builtins() {
            let l = m(&[0.25, 1.0], &tn);
            let b = m(&[1.0, 0.5], &tn);
            let target = m(&[1.0, 0.96875], &tn);
            let lift = lift_measure_combination(&l, &b, w(1.0, 1.0), &target).unwrap();
            assert_eq!(lift.case, "t=p=1/i0∈A");
            assert_eq!(lift.lifted_weights.t(), 0.96875);
            assert!(lift.deviation <= 4.0 * 0.03125 + 1e-12, "{tn}: {}", lift.deviation);
            // mirrored
            let lift = lift_measure_combination(&b, &l, w(1.0, 1.0), &target).unwrap();
            assert_eq!(lift.case, "t=p=1/i0∈B");
            assert_eq!(lift.lifted_weights.p(), 0.96875);
        }
    }

    #[test]
    fn too_far_targets_are_rejected() {
        let tn = TNormSpec::Min;
        let l = m(&[1.0, 0.3], &tn);
        let b = m(&[1.0, 0.6], &tn);
        // coordinate 1 favours b strictly; dropping below λ_1 = 0.3 is out of reach
        let err = lift_measure_combination(&l, &b, w(1.0, 1.0), &m(&[1.0, 0.1], &tn)).unwrap_err();
        assert!(matches!(err, Error::TooFar(_)));
        // 0<t<1 with the target's only full atom where b < 1
        let err = lift_measure_combination(
            &m(&[1.0, 0.3], &tn),
            &m(&[0.2, 1.0], &tn),
            w(0.5, 1.0),
            &m(&[1.0, 0.9], &tn),
        )
        .unwrap_err();
        assert!(matches!(err, Error::TooFar(_)));
    }

    #[test]
    fn lower_bound_is_below_constructed_deviation() {
        let tn = TNormSpec::Min;
        let l = m(&[0.9375, 0.59375, 1.0, 0.984375], &tn);
        let b = m(&[1.0, 0.59375, 0.5, 0.046875], &tn);
        let target = m(&[1.0, 0.59375, 0.8125 - 1.0 / 1024.0, 0.8125 + 1.0 / 1024.0], &tn);
        let lift = lift_measure_combination(&l, &b, w(0.8125, 1.0), &target).unwrap();
        let bound = deviation_lower_bound(&l, &b, w(0.8125, 1.0), &target).unwrap();
        assert!(bound <= lift.deviation + 1e-12);
        // the weight is pulled down by coordinate 2 and up by coordinate 3
        assert!(bound > 0.1, "{bound}");
        let here = l.combine(&b, w(0.8125, 1.0)).unwrap();
        assert_eq!(deviation_lower_bound(&l, &b, w(0.8125, 1.0), &here).unwrap(), 0.0);
    }

    #[test]
    fn bicommutative_product_example() {
        let tn = TNormSpec::Product;
        let f = SpaceMap::from_image(vec![0, 1, 1], 2).unwrap();
        let lift = bicommutative_lift(
            &m(&[0.4, 1.0, 0.7], &tn),
            &f,
            &m(&[0.8, 1.0], &tn),
            &m(&[0.4, 1.0], &tn),
            w(0.5, 1.0),
        )
        .unwrap();
        assert_eq!(lift.lambda.density(), &[0.8, 1.0, 1.0]);
        assert_eq!(lift.eta.density(), &[0.4, 1.0, 0.7]);
        assert_eq!(lift.combination_gap, 0.0);
        assert_eq!(lift.first_gap, 0.0);
        assert_eq!(lift.second_gap, 0.0);
    }

    #[test]
    fn bicommutative_degenerate_and_symmetric() {
        let tn = TNormSpec::Min;
        let mu = m(&[1.0, 0.5, 0.25], &tn);
        let a = m(&[0.75, 1.0, 0.0], &tn);
        let id = SpaceMap::identity(mu.space().clone());
        let nu = mu.combine(&a, w(1.0, 1.0)).unwrap();
        let lift = bicommutative_lift(&nu, &id, &mu, &a, w(1.0, 1.0)).unwrap();
        assert_eq!(lift.lambda, mu);
        assert_eq!(lift.eta, a);

        // t = 1, p < 1 goes through the mirrored branch
        let f = SpaceMap::from_image(vec![0, 0, 1], 2).unwrap();
        let nu = m(&[0.5, 1.0, 0.25], &tn);
        let mu = m(&[1.0, 0.25], &tn);
        let a = m(&[1.0, 0.125], &tn);
        let lift = bicommutative_lift(&nu, &f, &mu, &a, w(1.0, 0.5)).unwrap();
        assert!(lift.combination_gap <= 1e-12);
    }

    #[test]
    fn bicommutative_rejects_non_commuting_square() {
        let tn = TNormSpec::Product;
        let f = SpaceMap::from_image(vec![0, 1, 1], 2).unwrap();
        let err = bicommutative_lift(
            &m(&[0.4, 1.0, 0.7], &tn),
            &f,
            &m(&[0.9, 1.0], &tn),
            &m(&[0.4, 1.0], &tn),
            w(0.5, 1.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}

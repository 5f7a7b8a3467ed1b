use super::LiftResult;
use crate::convexity::{combine_points, CubePoint};
use crate::error::{Error, Result};
use crate::measures::WeightPair;
use crate::tnorm::{TNormSpec, TOL};

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is outside [0,1]")))
    }
}

/// Lifts `t ⊙ x ⊕ p ⊙ y = min(t,x) ∨ min(p,y)` on `[0,1]` to a new value.
///
/// Inside the region covered by the explicit case analysis the lift follows
/// it branch by branch. Elsewhere a monotone rule moves the smallest set of
/// inputs needed to reach the target; either way the deviation equals
/// `|target - current|`.
pub fn lift_point_min(x: f64, y: f64, w: WeightPair, target: f64) -> Result<LiftResult<f64>> {
    check_unit("x", x)?;
    check_unit("y", y)?;
    check_unit("target", target)?;
    let swapped = w.p() < 1.0;
    let (x0, y0, alpha) = if swapped { (y, x, w.p()) } else { (x, y, w.t()) };
    let (x1, y1, a1, case) = lift_unit_right(x0, y0, alpha, target);

    let (left, right, weights) = if swapped {
        (y1, x1, WeightPair::new(1.0, a1)?)
    } else {
        (x1, y1, WeightPair::new(a1, 1.0)?)
    };
    let got = weights.t().min(left).max(weights.p().min(right));
    if (got - target).abs() > TOL {
        return Err(Error::ConstructionFailed(format!(
            "{case}: min lift reached {got} instead of {target}"
        )));
    }
    let deviation = (left - x)
        .abs()
        .max((right - y).abs())
        .max((weights.t() - w.t()).abs())
        .max((weights.p() - w.p()).abs());
    let case = if swapped {
        format!("mirrored/{case}")
    } else {
        case.to_string()
    };
    Ok(LiftResult {
        lifted_left: left,
        lifted_right: right,
        lifted_weights: weights,
        deviation,
        case,
    })
}

/// Lift of `min(a,x) ∨ y` to `z`; returns `(x', y', a', case)`.
fn lift_unit_right(x: f64, y: f64, a: f64, z: f64) -> (f64, f64, f64, &'static str) {
    let m = a.min(x);
    if y > m {
        if z > m {
            return (x, z, a, "t=y>α∧x");
        }
    } else if y == m {
        if a == x {
            return (z, z, z, "t=y=α=x");
        }
        if a < x && z < x {
            return (x, z, z, "t=y=α<x");
        }
        if x < a && z < a {
            return (z, z, a, "t=y=x<α");
        }
    } else if z > y {
        if a == x {
            return (z, y, z, "t=α=x>y");
        }
        if a < x && z < x {
            return (x, y, z, "t=α<x,t>y");
        }
        if x < a && z < a {
            return (z, y, a, "t=x<α,t>y");
        }
    }
    extended(x, y, a, z)
}

/// Monotone lift for targets outside the case region.
fn extended(x: f64, y: f64, a: f64, z: f64) -> (f64, f64, f64, &'static str) {
    let m = a.min(x);
    let t = m.max(y);
    if z >= t {
        if y >= m {
            (x, z, a, "extended/raise y")
        } else {
            (x.max(z), y, a.max(z), "extended/raise α∧x")
        }
    } else if a <= x {
        (x, y.min(z), a.min(z), "extended/lower α")
    } else {
        (x.min(z), y.min(z), a, "extended/lower x")
    }
}

/// Solves the point-lift problem for the barycenter-lift induction.
pub trait PointLiftOracle {
    /// Returns `(x', y', w')` with `t' ⊙ x' ⊕ p' ⊙ y' = target`.
    fn lift(
        &self,
        x: &CubePoint,
        y: &CubePoint,
        w: WeightPair,
        target: &CubePoint,
        tnorm: &TNormSpec,
    ) -> Result<LiftResult<CubePoint>>;
}

/// Exact oracle for the minimum t-norm on `[0,1]`.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinIntervalOracle;

impl PointLiftOracle for MinIntervalOracle {
    fn lift(
        &self,
        x: &CubePoint,
        y: &CubePoint,
        w: WeightPair,
        target: &CubePoint,
        tnorm: &TNormSpec,
    ) -> Result<LiftResult<CubePoint>> {
        if *tnorm != TNormSpec::Min {
            return Err(Error::Precondition(format!(
                "the interval oracle needs the minimum t-norm, got {tnorm}"
            )));
        }
        if x.dim() != 1 || y.dim() != 1 || target.dim() != 1 {
            return Err(Error::Precondition("the interval oracle works in dimension 1".into()));
        }
        let r = lift_point_min(x.coords()[0], y.coords()[0], w, target.coords()[0])?;
        Ok(LiftResult {
            lifted_left: CubePoint::scalar(r.lifted_left)?,
            lifted_right: CubePoint::scalar(r.lifted_right)?,
            lifted_weights: r.lifted_weights,
            deviation: r.deviation,
            case: r.case,
        })
    }
}

/// Searches weights on a grid around the base and solves each coordinate
/// exactly, keeping the candidate with the smallest deviation.
#[derive(Clone, Copy, Debug)]
pub struct GridSearchOracle {
    pub step: f64,
    pub radius: f64,
}

impl Default for GridSearchOracle {
    fn default() -> Self {
        Self {
            step: 1.0 / 64.0,
            radius: 0.25,
        }
    }
}

impl GridSearchOracle {
    /// Grid shifts of the free weight plus, per coordinate, the weight that
    /// solves that coordinate exactly with the point unchanged.
    fn weight_candidates(
        &self,
        tn: &TNormSpec,
        w: WeightPair,
        x: &CubePoint,
        y: &CubePoint,
        target: &CubePoint,
    ) -> Vec<(f64, f64)> {
        let k = (self.radius / self.step).ceil() as i64;
        let shifts = (-k..=k).map(|i| i as f64 * self.step);
        let solve = |base: f64, v: f64, z: f64| tn.level_set(v, z).ok().map(|(lo, hi)| base.clamp(lo, hi));
        let mut out = vec![(w.t(), w.p())];
        if w.p() >= 1.0 {
            out.extend(shifts.clone().map(|d| ((w.t() + d).clamp(0.0, 1.0), 1.0)));
            for (&v, &z) in x.coords().iter().zip(target.coords()) {
                out.extend(solve(w.t(), v, z).map(|t| (t, 1.0)));
            }
        }
        if w.t() >= 1.0 {
            out.extend(shifts.map(|d| (1.0, (w.p() + d).clamp(0.0, 1.0))));
            for (&v, &z) in y.coords().iter().zip(target.coords()) {
                out.extend(solve(w.p(), v, z).map(|p| (1.0, p)));
            }
        }
        out
    }

    /// Best `(cost, x', y')` for one coordinate under fixed weights.
    fn coordinate(
        &self,
        tn: &TNormSpec,
        (t, p): (f64, f64),
        x: f64,
        y: f64,
        z: f64,
    ) -> Option<(f64, f64, f64)> {
        let k = (self.radius / self.step).ceil() as i64;
        let mut xs: Vec<f64> = vec![x];
        xs.extend((-k..=k)
            .map(|i| (x + i as f64 * self.step).clamp(0.0, 1.0)));
        xs.push(x.min(tn.residual(t, z).ok()?));
        if let Ok((lo, hi)) = tn.level_set(t, z) {
            xs.push(x.clamp(lo, hi));
        }
        let mut best: Option<(f64, f64, f64)> = None;
        for xc in xs {
            let left = tn.apply(t, xc);
            if left > z + 1e-12 {
                continue;
            }
            let right = tn.apply(p, y);
            let yc = if left >= z - 1e-12 {
                if right <= z {
                    y
                } else {
                    y.min(tn.residual(p, z).ok()?)
                }
            } else if right == z {
                y
            } else {
                match tn.level_set(p, z) {
                    Ok((lo, hi)) => y.clamp(lo, hi),
                    Err(_) => continue,
                }
            };
            let cost = (xc - x).abs().max((yc - y).abs());
            if best.is_none_or(|(c, _, _)| cost < c) {
                best = Some((cost, xc, yc));
            }
        }
        best
    }
}

impl PointLiftOracle for GridSearchOracle {
    fn lift(
        &self,
        x: &CubePoint,
        y: &CubePoint,
        w: WeightPair,
        target: &CubePoint,
        tnorm: &TNormSpec,
    ) -> Result<LiftResult<CubePoint>> {
        if x.dim() != y.dim() || x.dim() != target.dim() {
            return Err(Error::DimensionMismatch {
                left: x.dim(),
                right: if x.dim() != y.dim() { y.dim() } else { target.dim() },
            });
        }
        if !(self.step > 0.0 && self.radius >= 0.0) {
            return Err(Error::InvalidGridStep(self.step));
        }
        // (cost, weights, left coords, right coords)
        type Candidate = (f64, (f64, f64), Vec<f64>, Vec<f64>);
        let mut best: Option<Candidate> = None;
        'weights: for (t, p) in self.weight_candidates(tnorm, w, x, y, target) {
            let mut cost = (t - w.t()).abs().max((p - w.p()).abs());
            let mut xs = Vec::with_capacity(x.dim());
            let mut ys = Vec::with_capacity(x.dim());
            for c in 0..x.dim() {
                let z = target.coords()[c];
                match self.coordinate(tnorm, (t, p), x.coords()[c], y.coords()[c], z) {
                    Some((cc, xc, yc)) => {
                        cost = cost.max(cc);
                        xs.push(xc);
                        ys.push(yc);
                    }
                    None => continue 'weights,
                }
            }
            if best.as_ref().is_none_or(|(c, ..)| cost < *c) {
                best = Some((cost, (t, p), xs, ys));
            }
        }
        let (deviation, (t, p), xs, ys) = best.ok_or_else(|| {
            Error::TooFar(format!(
                "no weight within {} of the base reaches the target",
                self.radius
            ))
        })?;
        let weights = WeightPair::new(t, p)?;
        let left = CubePoint::new(xs)?;
        let right = CubePoint::new(ys)?;
        let gap = combine_points(&left, &right, weights, tnorm)?.distance(target);
        if gap > TOL {
            return Err(Error::ConstructionFailed(format!(
                "grid lift misses the target by {gap} under {tnorm}"
            )));
        }
        Ok(LiftResult {
            lifted_left: left,
            lifted_right: right,
            lifted_weights: weights,
            deviation,
            case: "grid".into(),
        })
    }
}

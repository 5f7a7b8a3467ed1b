use serde::{Deserialize, Serialize};

use super::PointLiftOracle;
use crate::barycenter::{barycenter, EmbeddedMeasure};
use crate::convexity::{n_ary_combine, CubePoint};
use crate::error::{Error, Result};
use crate::measures::{IdempotentMeasure, WeightPair};
use crate::tnorm::{TNormSpec, NORM_TOL, TOL};

/// A lifted finite-support measure and how far it moved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BarycenterLift {
    pub lifted: EmbeddedMeasure,
    /// Sup-distance over support coordinates and density.
    pub deviation: f64,
    /// Oracle case label at each split, outermost first.
    pub steps: Vec<String>,
}

/// Moves `em` to a measure on the same number of points whose barycenter is
/// `target`.
///
/// The last atom is split off as `(1, lambda_k)` against the barycenter `y`
/// of the remaining atoms, the oracle lifts that pair to `target`, and the
/// remaining atoms are lifted recursively to the new `y'`.
pub fn lift_barycenter(
    em: &EmbeddedMeasure,
    oracle: &dyn PointLiftOracle,
    target: &CubePoint,
) -> Result<BarycenterLift> {
    if target.dim() != em.dim() {
        return Err(Error::DimensionMismatch {
            left: em.dim(),
            right: target.dim(),
        });
    }
    let tn = em.tnorm();
    let mut steps = Vec::new();
    let (support, density) = lift_rec(em.support(), em.density(), tn, oracle, target, &mut steps)?;
    let measure = IdempotentMeasure::new(em.measure().space().clone(), density, tn.clone())
        .map_err(|e| Error::ConstructionFailed(format!("lifted density is invalid ({e})")))?;
    let lifted = EmbeddedMeasure::new(measure, support)?;
    let gap = barycenter(&lifted)?.distance(target);
    if gap > TOL {
        return Err(Error::ConstructionFailed(format!(
            "lifted barycenter misses the target by {gap} under {tn}"
        )));
    }
    let deviation = lifted
        .distance(em)
        .ok_or_else(|| Error::ConstructionFailed("lift changed the support shape".into()))?;
    Ok(BarycenterLift {
        lifted,
        deviation,
        steps,
    })
}

fn lift_rec(
    support: &[CubePoint],
    density: &[f64],
    tn: &TNormSpec,
    oracle: &dyn PointLiftOracle,
    target: &CubePoint,
    steps: &mut Vec<String>,
) -> Result<(Vec<CubePoint>, Vec<f64>)> {
    let k = support.len();
    if k == 1 {
        return Ok((vec![target.clone()], vec![1.0]));
    }
    // The head must stay normalized, so a lone full atom is moved to the front.
    let mut order: Vec<usize> = (0..k).collect();
    if !density[..k - 1].iter().any(|&d| d >= 1.0 - NORM_TOL) {
        order.swap(0, k - 1);
    }
    let pts: Vec<CubePoint> = order.iter().map(|&i| support[i].clone()).collect();
    let dens: Vec<f64> = order.iter().map(|&i| density[i]).collect();

    let head_bary = n_ary_combine(&pts[..k - 1], &dens[..k - 1], tn)?;
    let w = WeightPair::new(1.0, dens[k - 1])?;
    let step = oracle.lift(&head_bary, &pts[k - 1], w, target, tn)?;
    steps.push(step.case.clone());
    let (head_pts, head_dens) = lift_rec(&pts[..k - 1], &dens[..k - 1], tn, oracle, &step.lifted_left, steps)?;

    let t = step.lifted_weights.t();
    let mut new_pts = head_pts;
    new_pts.push(step.lifted_right);
    let mut new_dens: Vec<f64> = head_dens.iter().map(|&d| tn.apply(t, d)).collect();
    new_dens.push(step.lifted_weights.p());

    let mut out_pts = vec![target.clone(); k];
    let mut out_dens = vec![0.0; k];
    for (pos, &i) in order.iter().enumerate() {
        out_pts[i] = new_pts[pos].clone();
        out_dens[i] = new_dens[pos];
    }
    Ok((out_pts, out_dens))
}

//! Max-`*` convex combinations in finite-dimensional cubes `[0,1]^d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{check_normalized, check_unit_vector, sup_distance, WeightPair};
use crate::tnorm::{TNormSpec, TOL};

/// A point of `[0,1]^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CubePoint {
    coords: Vec<f64>,
}

impl TryFrom<Vec<f64>> for CubePoint {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        CubePoint::new(coords)
    }
}

impl From<CubePoint> for Vec<f64> {
    fn from(p: CubePoint) -> Self {
        p.coords
    }
}

impl CubePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Domain("a cube point needs at least one coordinate".into()));
        }
        check_unit_vector("coordinate", &coords)?;
        Ok(Self { coords })
    }

    pub fn scalar(x: f64) -> Result<Self> {
        Self::new(vec![x])
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn distance(&self, other: &CubePoint) -> f64 {
        sup_distance(&self.coords, &other.coords)
    }
}

fn check_dim(a: &CubePoint, b: &CubePoint) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        })
    }
}

/// `t ⊙ x ⊕ p ⊙ y`, coordinatewise.
pub fn combine_points(
    x: &CubePoint,
    y: &CubePoint,
    w: WeightPair,
    tnorm: &TNormSpec,
) -> Result<CubePoint> {
    check_dim(x, y)?;
    let coords = x
        .coords
        .iter()
        .zip(&y.coords)
        .map(|(&a, &b)| tnorm.apply(w.t(), a).max(tnorm.apply(w.p(), b)))
        .collect();
    Ok(CubePoint { coords })
}

fn combination(points: &[CubePoint], weights: &[f64], tnorm: &TNormSpec) -> Vec<f64> {
    let mut out = vec![0.0_f64; points[0].dim()];
    for (g, &w) in points.iter().zip(weights) {
        for (o, &c) in out.iter_mut().zip(&g.coords) {
            *o = o.max(tnorm.apply(w, c));
        }
    }
    out
}

fn check_family(points: &[CubePoint], weights: &[f64]) -> Result<()> {
    let first = points
        .first()
        .ok_or_else(|| Error::InvalidInstance("empty point family".into()))?;
    if points.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            left: points.len(),
            right: weights.len(),
        });
    }
    for g in points {
        check_dim(first, g)?;
    }
    Ok(())
}

/// `⊕_i rho_i ⊙ g_i` for normalized weights.
pub fn n_ary_combine(points: &[CubePoint], weights: &[f64], tnorm: &TNormSpec) -> Result<CubePoint> {
    check_family(points, weights)?;
    check_unit_vector("weight", weights)?;
    check_normalized(weights)?;
    Ok(CubePoint {
        coords: combination(points, weights, tnorm),
    })
}

/// Finitely generated normalized max-`*` hull.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBody")]
pub struct ConvexBody {
    tnorm: TNormSpec,
    generators: Vec<CubePoint>,
}

#[derive(Deserialize)]
struct RawBody {
    tnorm: TNormSpec,
    generators: Vec<CubePoint>,
}

impl TryFrom<RawBody> for ConvexBody {
    type Error = Error;

    fn try_from(raw: RawBody) -> Result<Self> {
        ConvexBody::new(raw.generators, raw.tnorm)
    }
}

/// Outcome of a hull membership query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Membership {
    pub member: bool,
    /// Largest admissible weights; a witness when `member` holds.
    pub weights: Vec<f64>,
    /// Sup-distance between the combination under `weights` and the query.
    pub reconstruction_gap: f64,
}

impl ConvexBody {
    pub fn new(generators: Vec<CubePoint>, tnorm: TNormSpec) -> Result<Self> {
        let ones = vec![1.0; generators.len()];
        check_family(&generators, &ones)?;
        Ok(Self { tnorm, generators })
    }

    pub fn generators(&self) -> &[CubePoint] {
        &self.generators
    }

    pub fn tnorm(&self) -> &TNormSpec {
        &self.tnorm
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    /// Decides whether `z` lies in the hull.
    ///
    /// Every admissible weight satisfies `rho_i * g_ic <= z_c`, so it is
    /// bounded by `lambda_i = min_c residual(g_ic, z_c)`. The point is a
    /// member iff `lambda` itself reproduces `z` and reaches 1.
    pub fn membership(&self, z: &CubePoint) -> Result<Membership> {
        check_dim(&self.generators[0], z)?;
        let weights: Vec<f64> = self
            .generators
            .iter()
            .map(|g| {
                g.coords
                    .iter()
                    .zip(&z.coords)
                    .map(|(&a, &b)| self.tnorm.residual(a, b))
                    .try_fold(1.0_f64, |acc, r| r.map(|r| acc.min(r)))
            })
            .collect::<Result<_>>()?;
        let combo = combination(&self.generators, &weights, &self.tnorm);
        let gap = sup_distance(&combo, &z.coords);
        let top = weights.iter().copied().fold(0.0, f64::max);
        Ok(Membership {
            member: gap <= TOL && top >= 1.0 - TOL,
            weights,
            reconstruction_gap: gap,
        })
    }
}

//! Idempotent `*`-barycenters of measures carried by finite point sets in a
//! cube, and the cover construction that replaces a measure by a
//! finite-support one with the same barycenter.

use serde::{Deserialize, Serialize};

use crate::convexity::{n_ary_combine, ConvexBody, CubePoint};
use crate::error::{Error, Result};
use crate::measures::IdempotentMeasure;
use crate::tnorm::{TNormSpec, TOL};

/// A measure on `{0..n}` together with the position of each point in `[0,1]^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEmbedded")]
pub struct EmbeddedMeasure {
    measure: IdempotentMeasure,
    support: Vec<CubePoint>,
}

#[derive(Deserialize)]
struct RawEmbedded {
    measure: IdempotentMeasure,
    support: Vec<CubePoint>,
}

impl TryFrom<RawEmbedded> for EmbeddedMeasure {
    type Error = Error;

    fn try_from(raw: RawEmbedded) -> Result<Self> {
        EmbeddedMeasure::new(raw.measure, raw.support)
    }
}

impl EmbeddedMeasure {
    pub fn new(measure: IdempotentMeasure, support: Vec<CubePoint>) -> Result<Self> {
        if support.len() != measure.len() {
            return Err(Error::SpaceMismatch {
                left: measure.len(),
                right: support.len(),
            });
        }
        let dim = support[0].dim();
        if let Some(p) = support.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: p.dim(),
            });
        }
        Ok(Self { measure, support })
    }

    /// Convenience constructor from raw coordinates and density.
    pub fn from_parts(support: Vec<Vec<f64>>, density: Vec<f64>, tnorm: TNormSpec) -> Result<Self> {
        let support = support.into_iter().map(CubePoint::new).collect::<Result<_>>()?;
        Self::new(IdempotentMeasure::from_density(density, tnorm)?, support)
    }

    pub fn measure(&self) -> &IdempotentMeasure {
        &self.measure
    }

    pub fn support(&self) -> &[CubePoint] {
        &self.support
    }

    pub fn tnorm(&self) -> &TNormSpec {
        self.measure.tnorm()
    }

    pub fn density(&self) -> &[f64] {
        self.measure.density()
    }

    pub fn dim(&self) -> usize {
        self.support[0].dim()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Same support, different density.
    pub fn with_density(&self, density: Vec<f64>) -> Result<Self> {
        let measure = IdempotentMeasure::new(
            self.measure.space().clone(),
            density,
            self.tnorm().clone(),
        )?;
        Ok(Self {
            measure,
            support: self.support.clone(),
        })
    }

    /// Sup-distance over support coordinates and density, or `None` when the
    /// supports have different shapes.
    pub fn distance(&self, other: &EmbeddedMeasure) -> Option<f64> {
        if self.len() != other.len() || self.dim() != other.dim() {
            return None;
        }
        let coords = self
            .support
            .iter()
            .zip(&other.support)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max);
        Some(coords.max(self.measure.distance(&other.measure).ok()?))
    }
}

/// Coordinate `c` of the barycenter is `max_i lambda_i * x_{i,c}`, the
/// measure evaluated on the `c`-th coordinate function.
///
/// The result is checked for membership in the hull of the support.
pub fn barycenter(em: &EmbeddedMeasure) -> Result<CubePoint> {
    let point = n_ary_combine(&em.support, em.density(), em.tnorm())?;
    let hull = ConvexBody::new(em.support.clone(), em.tnorm().clone())?;
    let m = hull.membership(&point)?;
    if !m.member {
        return Err(Error::ConstructionFailed(format!(
            "barycenter {:?} left the hull (gap {})",
            point.coords(),
            m.reconstruction_gap
        )));
    }
    Ok(point)
}

/// Blocks of support indices whose union is the whole support.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cover {
    blocks: Vec<Vec<usize>>,
}

impl Cover {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::InvalidCover("no blocks".into()));
        }
        let mut seen = vec![false; n];
        for (k, block) in self.blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidCover(format!("block {k} is empty")));
            }
            for &i in block {
                if i >= n {
                    return Err(Error::InvalidCover(format!(
                        "block {k} names point {i} of a {n}-point support"
                    )));
                }
                seen[i] = true;
            }
        }
        match seen.iter().position(|s| !s) {
            Some(i) => Err(Error::InvalidCover(format!("point {i} is not covered"))),
            None => Ok(()),
        }
    }
}

/// Replaces `em` by `⊕_k s_k ⊙ δ_{x_k}`, one atom per cover block.
///
/// For block `U_k`, `s_k` is the largest density on `U_k`, the block density
/// `d_k` solves `s_k * d_k(x) = d(x)` (largest solution) on `U_k`, and `x_k`
/// is the barycenter of `d_k`. The barycenter of the result is checked
/// against the barycenter of `em`.
pub fn cover_approximation(em: &EmbeddedMeasure, cover: &Cover) -> Result<EmbeddedMeasure> {
    cover.validate(em.len())?;
    let tnorm = em.tnorm();
    let d = em.density();
    let mut weights = Vec::with_capacity(cover.blocks.len());
    let mut points = Vec::with_capacity(cover.blocks.len());
    for block in &cover.blocks {
        let s = block.iter().map(|&i| d[i]).fold(0.0, f64::max);
        let mut block_density = vec![0.0; em.len()];
        for &i in block {
            block_density[i] = tnorm.pseudo_inverse(s, d[i])?;
        }
        points.push(barycenter(&em.with_density(block_density)?)?);
        weights.push(s);
    }
    let approx = EmbeddedMeasure::new(IdempotentMeasure::from_density(weights, tnorm.clone())?, points)?;
    let target = barycenter(em)?;
    let got = barycenter(&approx)?;
    let gap = got.distance(&target);
    if gap > TOL {
        return Err(Error::ConstructionFailed(format!(
            "cover approximation moved the barycenter by {gap} under {tnorm}"
        )));
    }
    Ok(approx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn barycenter_examples() {
        let em = EmbeddedMeasure::from_parts(
            vec![vec![1.0, 0.2], vec![0.1, 0.9]],
            vec![1.0, 0.6],
            TNormSpec::Min,
        )
        .unwrap();
        assert_eq!(barycenter(&em).unwrap().coords(), &[1.0, 0.6]);

        let em = EmbeddedMeasure::from_parts(vec![vec![0.2], vec![0.7]], vec![0.5, 1.0], TNormSpec::Min)
            .unwrap();
        assert_eq!(barycenter(&em).unwrap().coords(), &[0.7]);

        for t in TNormSpec::builtins() {
            let em = EmbeddedMeasure::from_parts(
                vec![vec![0.3, 0.1], vec![0.8, 0.6], vec![0.2, 0.9]],
                vec![0.0, 1.0, 0.0],
                t,
            )
            .unwrap();
            assert_eq!(barycenter(&em).unwrap().coords(), &[0.8, 0.6]);
        }
    }

    #[test]
    fn cover_examples() {
        let em = EmbeddedMeasure::from_parts(
            vec![vec![0.0], vec![0.5], vec![1.0]],
            vec![0.3, 1.0, 0.7],
            TNormSpec::Min,
        )
        .unwrap();
        let approx = cover_approximation(&em, &Cover::new(vec![vec![0, 1], vec![1, 2]])).unwrap();
        assert_eq!(approx.density(), &[1.0, 1.0]);
        assert_eq!(approx.support()[0].coords(), &[0.5]);
        assert_eq!(approx.support()[1].coords(), &[0.7]);
        assert_eq!(barycenter(&approx).unwrap().coords(), &[0.7]);

        let whole = cover_approximation(&em, &Cover::new(vec![vec![0, 1, 2]])).unwrap();
        assert_eq!(whole.density(), &[1.0]);
        assert_eq!(whole.support()[0], barycenter(&em).unwrap());

        let dirac = em.with_density(vec![0.0, 0.0, 1.0]).unwrap();
        let approx = cover_approximation(&dirac, &Cover::new(vec![vec![0], vec![1, 2]])).unwrap();
        assert_eq!(barycenter(&approx).unwrap().coords(), &[1.0]);
    }

    #[test]
    fn invalid_covers() {
        let em = EmbeddedMeasure::from_parts(vec![vec![0.0], vec![1.0]], vec![1.0, 0.5], TNormSpec::Min)
            .unwrap();
        for blocks in [vec![], vec![vec![0]], vec![vec![0], vec![]], vec![vec![0, 1, 2]]] {
            assert!(matches!(
                cover_approximation(&em, &Cover::new(blocks)),
                Err(Error::InvalidCover(_))
            ));
        }
    }

    #[test]
    fn mismatched_support() {
        let m = IdempotentMeasure::from_density(vec![1.0, 0.5], TNormSpec::Min).unwrap();
        let pts = vec![CubePoint::scalar(0.1).unwrap()];
        assert!(EmbeddedMeasure::new(m.clone(), pts).is_err());
        let pts = vec![CubePoint::scalar(0.1).unwrap(), CubePoint::new(vec![0.1, 0.2]).unwrap()];
        assert!(matches!(
            EmbeddedMeasure::new(m, pts),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}

//! Finite spaces and idempotent `*`-measures of finite support.
//!
//! On a finite space `{0, .., n-1}` every idempotent `*`-measure is
//! `mu(phi) = max_i lambda_i * phi_i` for a density `lambda` with
//! `max_i lambda_i = 1`. Measures are stored by that density.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tnorm::{TNormSpec, NORM_TOL};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct FiniteSpace {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Deserialize)]
struct RawSpace {
    n: usize,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawSpace> for FiniteSpace {
    type Error = Error;

    fn try_from(raw: RawSpace) -> Result<Self> {
        let space = FiniteSpace::new(raw.n)?;
        match raw.labels {
            Some(labels) => space.with_labels(labels),
            None => Ok(space),
        }
    }
}

impl FiniteSpace {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a finite space needs at least one point".into()));
        }
        Ok(Self { n, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n {
            return Err(Error::SpaceMismatch {
                left: self.n,
                right: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Spaces are compared by size; labels are cosmetic.
    pub fn same_as(&self, other: &FiniteSpace) -> bool {
        self.n == other.n
    }
}

fn check_space(left: &FiniteSpace, right: &FiniteSpace) -> Result<()> {
    if left.same_as(right) {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            left: left.n,
            right: right.n,
        })
    }
}

/// A map between finite spaces, given by the image of each source point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceMap {
    source: FiniteSpace,
    target: FiniteSpace,
    image: Vec<usize>,
}

impl SpaceMap {
    pub fn new(source: FiniteSpace, target: FiniteSpace, image: Vec<usize>) -> Result<Self> {
        if image.len() != source.n {
            return Err(Error::SpaceMismatch {
                left: source.n,
                right: image.len(),
            });
        }
        if let Some(&bad) = image.iter().find(|&&j| j >= target.n) {
            return Err(Error::Index {
                index: bad,
                len: target.n,
            });
        }
        Ok(Self {
            source,
            target,
            image,
        })
    }

    /// Map `{0..image.len()} -> {0..target_n}`.
    pub fn from_image(image: Vec<usize>, target_n: usize) -> Result<Self> {
        Self::new(FiniteSpace::new(image.len())?, FiniteSpace::new(target_n)?, image)
    }

    pub fn identity(space: FiniteSpace) -> Self {
        let image = (0..space.n).collect();
        Self {
            source: space.clone(),
            target: space,
            image,
        }
    }

    pub fn source(&self) -> &FiniteSpace {
        &self.source
    }

    pub fn target(&self) -> &FiniteSpace {
        &self.target
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SpaceMap) -> Result<SpaceMap> {
        check_space(&self.target, &other.source)?;
        let image = self.image.iter().map(|&j| other.image[j]).collect();
        Ok(SpaceMap {
            source: self.source.clone(),
            target: other.target.clone(),
            image,
        })
    }

    /// Source indices grouped by their image point.
    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.target.n];
        for (i, &j) in self.image.iter().enumerate() {
            fibers[j].push(i);
        }
        fibers
    }

    pub fn is_onto(&self) -> bool {
        self.fibers().iter().all(|f| !f.is_empty())
    }
}

/// A function `X -> [0,1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction")]
pub struct FunctionOnSpace {
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawFunction {
    values: Vec<f64>,
}

impl TryFrom<RawFunction> for FunctionOnSpace {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        FunctionOnSpace::new(raw.values)
    }
}

impl FunctionOnSpace {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a function needs at least one value".into()));
        }
        check_unit_vector("function value", &values)?;
        Ok(Self { values })
    }

    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn indicator(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Index { index: i, len: n });
        }
        let mut values = vec![0.0; n];
        values[i] = 1.0;
        Self::new(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `psi ∘ f` for `f: X -> Y` and `psi` on `Y`.
    pub fn compose(&self, f: &SpaceMap) -> Result<FunctionOnSpace> {
        if self.len() != f.target.n {
            return Err(Error::SpaceMismatch {
                left: self.len(),
                right: f.target.n,
            });
        }
        Ok(Self {
            values: f.image.iter().map(|&j| self.values[j]).collect(),
        })
    }

    /// Pointwise `c * phi`.
    pub fn scale(&self, c: f64, tnorm: &TNormSpec) -> Result<FunctionOnSpace> {
        let values = self
            .values
            .iter()
            .map(|&v| tnorm.evaluate(c, v))
            .collect::<Result<_>>()?;
        Ok(Self { values })
    }

    /// Pointwise maximum.
    pub fn join(&self, other: &FunctionOnSpace) -> Result<FunctionOnSpace> {
        if self.len() != other.len() {
            return Err(Error::SpaceMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.max(*b))
            .collect();
        Ok(Self { values })
    }
}

pub(crate) fn check_unit_vector(what: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(0.0..=1.0).contains(v)) {
        Some(i) => Err(Error::Domain(format!(
            "{what} {i} is {} which is outside [0, 1]",
            values[i]
        ))),
        None => Ok(()),
    }
}

pub(crate) fn check_normalized(values: &[f64]) -> Result<()> {
    let max = values.iter().copied().fold(0.0, f64::max);
    if (max - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization { max });
    }
    Ok(())
}

/// Normalized pair `(t, p)` with `max(t, p) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct WeightPair {
    t: f64,
    p: f64,
}

impl TryFrom<[f64; 2]> for WeightPair {
    type Error = Error;

    fn try_from([t, p]: [f64; 2]) -> Result<Self> {
        WeightPair::new(t, p)
    }
}

impl From<WeightPair> for [f64; 2] {
    fn from(w: WeightPair) -> Self {
        [w.t, w.p]
    }
}

impl WeightPair {
    pub fn new(t: f64, p: f64) -> Result<Self> {
        check_unit_vector("weight", &[t, p])?;
        check_normalized(&[t, p])?;
        Ok(Self { t, p })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `(p, t)`.
    pub fn swapped(&self) -> Self {
        Self {
            t: self.p,
            p: self.t,
        }
    }
}

/// A finite-support idempotent `*`-measure, stored by its density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct IdempotentMeasure {
    space: FiniteSpace,
    tnorm: TNormSpec,
    density: Vec<f64>,
}

#[derive(Deserialize)]
struct RawMeasure {
    space: FiniteSpace,
    tnorm: TNormSpec,
    density: Vec<f64>,
}

impl TryFrom<RawMeasure> for IdempotentMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        IdempotentMeasure::new(raw.space, raw.density, raw.tnorm)
    }
}

impl IdempotentMeasure {
    /// Builds a measure from a density. Unnormalized input is rejected,
    /// never rescaled.
    pub fn new(space: FiniteSpace, density: Vec<f64>, tnorm: TNormSpec) -> Result<Self> {
        if density.len() != space.n {
            return Err(Error::SpaceMismatch {
                left: space.n,
                right: density.len(),
            });
        }
        check_unit_vector("density entry", &density)?;
        check_normalized(&density)?;
        Ok(Self {
            space,
            tnorm,
            density,
        })
    }

    /// Shorthand for a measure on `{0..density.len()}`.
    pub fn from_density(density: Vec<f64>, tnorm: TNormSpec) -> Result<Self> {
        Self::new(FiniteSpace::new(density.len())?, density, tnorm)
    }

    pub fn dirac(space: FiniteSpace, i: usize, tnorm: TNormSpec) -> Result<Self> {
        if i >= space.n {
            return Err(Error::Index {
                index: i,
                len: space.n,
            });
        }
        let mut density = vec![0.0; space.n];
        density[i] = 1.0;
        Ok(Self {
            space,
            tnorm,
            density,
        })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn tnorm(&self) -> &TNormSpec {
        &self.tnorm
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn len(&self) -> usize {
        self.density.len()
    }

    pub fn is_empty(&self) -> bool {
        self.density.is_empty()
    }

    /// `mu(phi) = max_i lambda_i * phi_i`.
    pub fn eval(&self, phi: &FunctionOnSpace) -> Result<f64> {
        if phi.len() != self.space.n {
            return Err(Error::SpaceMismatch {
                left: self.space.n,
                right: phi.len(),
            });
        }
        Ok(self
            .density
            .iter()
            .zip(phi.values())
            .map(|(&l, &v)| self.tnorm.apply(l, v))
            .fold(0.0, f64::max))
    }

    /// Image measure `A*f(mu)`: fiberwise maximum of the density.
    pub fn pushforward(&self, f: &SpaceMap) -> Result<IdempotentMeasure> {
        check_space(&self.space, &f.source)?;
        let mut density = vec![0.0_f64; f.target.n];
        for (i, &j) in f.image.iter().enumerate() {
            density[j] = density[j].max(self.density[i]);
        }
        Ok(Self {
            space: f.target.clone(),
            tnorm: self.tnorm.clone(),
            density,
        })
    }

    /// `t ⊙ self ⊕ p ⊙ other`.
    pub fn combine(&self, other: &IdempotentMeasure, w: WeightPair) -> Result<IdempotentMeasure> {
        check_space(&self.space, &other.space)?;
        if self.tnorm != other.tnorm {
            return Err(Error::TNormMismatch);
        }
        let density = self
            .density
            .iter()
            .zip(&other.density)
            .map(|(&a, &b)| self.tnorm.apply(w.t, a).max(self.tnorm.apply(w.p, b)))
            .collect();
        Ok(Self {
            space: self.space.clone(),
            tnorm: self.tnorm.clone(),
            density,
        })
    }

    /// `⊕_k w_k ⊙ mu_k` for normalized weights `w`.
    pub fn combine_many(measures: &[IdempotentMeasure], weights: &[f64]) -> Result<IdempotentMeasure> {
        let first = measures
            .first()
            .ok_or_else(|| Error::InvalidInstance("no measures to combine".into()))?;
        if measures.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                left: measures.len(),
                right: weights.len(),
            });
        }
        check_unit_vector("weight", weights)?;
        check_normalized(weights)?;
        let mut density = vec![0.0_f64; first.len()];
        for (m, &w) in measures.iter().zip(weights) {
            check_space(&first.space, &m.space)?;
            if m.tnorm != first.tnorm {
                return Err(Error::TNormMismatch);
            }
            for (d, &l) in density.iter_mut().zip(&m.density) {
                *d = d.max(first.tnorm.apply(w, l));
            }
        }
        IdempotentMeasure::new(first.space.clone(), density, first.tnorm.clone())
    }

    /// Density recovered as `d(x) = inf { mu(phi) : phi(x) = 1 }`.
    ///
    /// The infimum is attained at the indicator of `x`, so this evaluates
    /// the measure on indicators and checks the result against the stored
    /// density.
    pub fn density_of(&self) -> Result<FunctionOnSpace> {
        let n = self.space.n;
        let values = (0..n)
            .map(|x| self.eval(&FunctionOnSpace::indicator(n, x)?))
            .collect::<Result<Vec<_>>>()?;
        if let Some(x) = (0..n).find(|&x| values[x] != self.density[x]) {
            return Err(Error::ConstructionFailed(format!(
                "density at {x} evaluates to {} but is stored as {}",
                values[x], self.density[x]
            )));
        }
        FunctionOnSpace::new(values)
    }

    /// Largest gap in the three defining identities on one instance:
    /// `mu(1) = 1`, `mu(c ⊙ phi) = c * mu(phi)`,
    /// `mu(phi ⊕ psi) = mu(phi) ⊕ mu(psi)`.
    pub fn functional_axiom_gap(
        &self,
        phi: &FunctionOnSpace,
        psi: &FunctionOnSpace,
        c: f64,
    ) -> Result<f64> {
        let one = self.eval(&FunctionOnSpace::constant(self.len(), 1.0)?)?;
        let scaled = self.eval(&phi.scale(c, &self.tnorm)?)?;
        let expected_scaled = self.tnorm.evaluate(c, self.eval(phi)?)?;
        let joined = self.eval(&phi.join(psi)?)?;
        let expected_joined = self.eval(phi)?.max(self.eval(psi)?);
        Ok((one - 1.0)
            .abs()
            .max((scaled - expected_scaled).abs())
            .max((joined - expected_joined).abs()))
    }

    /// Sup-distance between densities on a common space.
    pub fn distance(&self, other: &IdempotentMeasure) -> Result<f64> {
        check_space(&self.space, &other.space)?;
        Ok(sup_distance(&self.density, &other.density))
    }
}

pub(crate) fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(d: &[f64], t: TNormSpec) -> IdempotentMeasure {
        IdempotentMeasure::from_density(d.to_vec(), t).unwrap()
    }

    fn f(v: &[f64]) -> FunctionOnSpace {
        FunctionOnSpace::new(v.to_vec()).unwrap()
    }

    #[test]
    fn make_measure() {
        assert!(IdempotentMeasure::from_density(vec![1.0, 0.4], TNormSpec::Min).is_ok());
        assert!(matches!(
            IdempotentMeasure::from_density(vec![0.9, 0.4], TNormSpec::Min),
            Err(Error::Normalization { .. })
        ));
        assert!(IdempotentMeasure::from_density(vec![0.2, 1.0, 0.5], TNormSpec::Product).is_ok());
        assert!(matches!(
            IdempotentMeasure::from_density(vec![1.2, 0.3], TNormSpec::Min),
            Err(Error::Domain(_))
        ));
        let sp = FiniteSpace::new(3).unwrap();
        assert!(matches!(
            IdempotentMeasure::new(sp, vec![1.0], TNormSpec::Min),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn dirac_measures() {
        let sp = FiniteSpace::new(2).unwrap();
        assert_eq!(
            IdempotentMeasure::dirac(sp.clone(), 0, TNormSpec::Min).unwrap().density(),
            &[1.0, 0.0]
        );
        let sp3 = FiniteSpace::new(3).unwrap();
        let d = IdempotentMeasure::dirac(sp3, 2, TNormSpec::Product).unwrap();
        assert_eq!(d.density(), &[0.0, 0.0, 1.0]);
        assert_eq!(d.eval(&f(&[0.3, 0.6, 0.45])).unwrap(), 0.45);
        assert!(matches!(
            IdempotentMeasure::dirac(sp, 2, TNormSpec::Min),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn eval_examples() {
        let mu = m(&[1.0, 0.5], TNormSpec::Product);
        assert_eq!(mu.eval(&f(&[0.4, 0.8])).unwrap(), 0.4);
        assert_eq!(mu.eval(&f(&[1.0, 1.0])).unwrap(), 1.0);
        for t in TNormSpec::builtins() {
            let nu = m(&[0.375, 1.0], t);
            assert_eq!(nu.eval(&f(&[0.0, 1.0])).unwrap(), 1.0);
        }
        assert!(matches!(
            mu.eval(&f(&[0.1, 0.2, 0.3])),
            Err(Error::SpaceMismatch { .. })
        ));
    }

    #[test]
    fn pushforward_examples() {
        let map = SpaceMap::from_image(vec![0, 1, 1], 2).unwrap();
        let mu = m(&[0.2, 1.0, 0.5], TNormSpec::Product);
        assert_eq!(mu.pushforward(&map).unwrap().density(), &[0.2, 1.0]);
        let id = SpaceMap::identity(mu.space().clone());
        assert_eq!(mu.pushforward(&id).unwrap(), mu);
        let d = IdempotentMeasure::dirac(FiniteSpace::new(3).unwrap(), 2, TNormSpec::Min).unwrap();
        assert_eq!(d.pushforward(&map).unwrap().density(), &[0.0, 1.0]);
        // not onto: zeros off the image, still normalized
        let into = SpaceMap::from_image(vec![0, 0, 2], 3).unwrap();
        assert_eq!(mu.pushforward(&into).unwrap().density(), &[1.0, 0.0, 0.5]);
    }

    #[test]
    fn combine_examples() {
        let mu = m(&[1.0, 0.4], TNormSpec::Min);
        let nu = m(&[0.3, 1.0], TNormSpec::Min);
        let w = WeightPair::new(0.5, 1.0).unwrap();
        assert_eq!(mu.combine(&nu, w).unwrap().density(), &[0.5, 1.0]);
        let w = WeightPair::new(0.0, 1.0).unwrap();
        assert_eq!(mu.combine(&nu, w).unwrap(), nu);
        let w = WeightPair::new(1.0, 1.0).unwrap();
        assert_eq!(mu.combine(&mu, w).unwrap(), mu);
        let other = m(&[1.0, 0.4], TNormSpec::Product);
        assert!(matches!(mu.combine(&other, w), Err(Error::TNormMismatch)));
    }

    #[test]
    fn weight_pairs() {
        assert!(WeightPair::new(0.3, 1.0).is_ok());
        assert!(WeightPair::new(0.3, 0.9).is_err());
        assert!(WeightPair::new(1.1, 1.0).is_err());
        let w: WeightPair = serde_json::from_str("[1.0, 0.25]").unwrap();
        assert_eq!(w.swapped(), WeightPair::new(0.25, 1.0).unwrap());
    }

    #[test]
    fn density_of_examples() {
        for t in TNormSpec::builtins() {
            let mu = m(&[1.0, 0.4], t.clone());
            assert_eq!(mu.density_of().unwrap().values(), &[1.0, 0.4]);
            let d = IdempotentMeasure::dirac(FiniteSpace::new(3).unwrap(), 1, t).unwrap();
            assert_eq!(d.density_of().unwrap().values(), &[0.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn json_roundtrip_rejects_bad_density() {
        let ok: IdempotentMeasure = serde_json::from_str(
            r#"{"space":{"n":3},"tnorm":{"kind":"product"},"density":[0.2,1,0.5]}"#,
        )
        .unwrap();
        assert_eq!(ok.density(), &[0.2, 1.0, 0.5]);
        let back: IdempotentMeasure =
            serde_json::from_str(&serde_json::to_string(&ok).unwrap()).unwrap();
        assert_eq!(back, ok);
        assert!(serde_json::from_str::<IdempotentMeasure>(
            r#"{"space":{"n":2},"tnorm":{"kind":"min"},"density":[0.9,0.4]}"#
        )
        .is_err());
        assert!(serde_json::from_str::<FiniteSpace>(r#"{"n":0}"#).is_err());
    }
}

//! Seeded random instances on dyadic grids.
//!
//! Every instance of a randomized suite draws from its own ChaCha stream
//! (`seed`, `index`), so results do not depend on evaluation order.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::barycenter::EmbeddedMeasure;
use crate::convexity::CubePoint;
use crate::error::Result;
use crate::measures::{FiniteSpace, FunctionOnSpace, IdempotentMeasure, SpaceMap, WeightPair};
use crate::tnorm::TNormSpec;

/// Default grid for random values.
pub const DENOM: u32 = 64;

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on `{0, 1/denom, ..., 1}`.
pub fn dyadic<R: Rng>(rng: &mut R, denom: u32) -> f64 {
    f64::from(rng.gen_range(0..=denom)) / f64::from(denom)
}

pub fn values<R: Rng>(rng: &mut R, n: usize, denom: u32) -> Vec<f64> {
    (0..n).map(|_| dyadic(rng, denom)).collect()
}

/// Random normalized density: one random point gets weight 1.
pub fn density<R: Rng>(rng: &mut R, n: usize, denom: u32) -> Vec<f64> {
    let mut d = values(rng, n, denom);
    let top = rng.gen_range(0..n);
    d[top] = 1.0;
    d
}

pub fn measure<R: Rng>(rng: &mut R, n: usize, tnorm: &TNormSpec) -> Result<IdempotentMeasure> {
    IdempotentMeasure::from_density(density(rng, n, DENOM), tnorm.clone())
}

pub fn function<R: Rng>(rng: &mut R, n: usize) -> Result<FunctionOnSpace> {
    FunctionOnSpace::new(values(rng, n, DENOM))
}

/// A point of `J`: `(1,1)` a quarter of the time, otherwise one side is 1.
pub fn weight_pair<R: Rng>(rng: &mut R, denom: u32) -> WeightPair {
    let other = dyadic(rng, denom);
    let pair = match rng.gen_range(0..4) {
        0 => WeightPair::new(1.0, 1.0),
        1 => WeightPair::new(1.0, other),
        _ => WeightPair::new(other, 1.0),
    };
    pair.expect("grid values lie in J")
}

/// Onto map from `n_source` points to `n_target <= n_source` points.
pub fn onto_map<R: Rng>(rng: &mut R, n_source: usize, n_target: usize) -> Result<SpaceMap> {
    let mut image: Vec<usize> = (0..n_target).collect();
    image.extend((n_target..n_source).map(|_| rng.gen_range(0..n_target)));
    image.shuffle(rng);
    SpaceMap::from_image(image, n_target)
}

pub fn point<R: Rng>(rng: &mut R, dim: usize, denom: u32) -> Result<CubePoint> {
    CubePoint::new(values(rng, dim, denom))
}

pub fn embedded<R: Rng>(rng: &mut R, k: usize, dim: usize, tnorm: &TNormSpec) -> Result<EmbeddedMeasure> {
    let support = (0..k).map(|_| values(rng, dim, DENOM)).collect();
    EmbeddedMeasure::from_parts(support, density(rng, k, DENOM), tnorm.clone())
}

/// Base point `(lambda, beta, w)` of a measure-combination lift whose strict
/// dominances all have margin at least `margin`.
#[derive(Clone, Debug)]
pub struct LiftBase {
    pub lambda: IdempotentMeasure,
    pub beta: IdempotentMeasure,
    pub weights: WeightPair,
}

impl LiftBase {
    pub fn value(&self) -> Result<IdempotentMeasure> {
        self.lambda.combine(&self.beta, self.weights)
    }

    /// True when `t * lambda_i` and `p * beta_i` are equal or at least
    /// `margin` apart at every point.
    pub fn has_margin(&self, margin: f64) -> bool {
        let tn = self.lambda.tnorm();
        let (t, p) = (self.weights.t(), self.weights.p());
        self.lambda
            .density()
            .iter()
            .zip(self.beta.density())
            .all(|(&l, &b)| {
                let gap = (tn.apply(t, l) - tn.apply(p, b)).abs();
                gap == 0.0 || gap >= margin
            })
    }
}

/// Draws bases until one has the requested margin.
pub fn lift_base<R: Rng>(rng: &mut R, n: usize, tnorm: &TNormSpec, margin: f64) -> Result<LiftBase> {
    loop {
        let base = LiftBase {
            lambda: measure(rng, n, tnorm)?,
            beta: measure(rng, n, tnorm)?,
            weights: weight_pair(rng, 16),
        };
        if base.has_margin(margin) {
            return Ok(base);
        }
    }
}

/// Moves every coordinate of `mu` that is below 1 by `scale * u` with `u`
/// drawn from `{-1, -1/2, 0, 1/2, 1}`; coordinates equal to 1 stay fixed so
/// the target keeps the atoms of weight 1.
pub fn perturb<R: Rng>(rng: &mut R, mu: &IdempotentMeasure, scale: f64) -> Result<IdempotentMeasure> {
    let d = mu
        .density()
        .iter()
        .map(|&v| {
            if v >= 1.0 {
                v
            } else {
                let u = f64::from(rng.gen_range(-2..=2)) / 2.0;
                (v + scale * u).clamp(0.0, 1.0)
            }
        })
        .collect();
    IdempotentMeasure::new(mu.space().clone(), d, mu.tnorm().clone())
}

/// Random direction for approach sequences; zero on atoms of weight 1.
pub fn direction<R: Rng>(rng: &mut R, mu: &IdempotentMeasure) -> Vec<f64> {
    mu.density()
        .iter()
        .map(|&v| if v >= 1.0 { 0.0 } else { f64::from(rng.gen_range(-2..=2)) / 2.0 })
        .collect()
}

/// `mu + h * dir`, clamped to `[0,1]`.
pub fn shifted(mu: &IdempotentMeasure, dir: &[f64], h: f64) -> Result<IdempotentMeasure> {
    let d = mu
        .density()
        .iter()
        .zip(dir)
        .map(|(&v, &u)| (v + h * u).clamp(0.0, 1.0))
        .collect();
    IdempotentMeasure::new(mu.space().clone(), d, mu.tnorm().clone())
}

pub fn space(n: usize) -> FiniteSpace {
    FiniteSpace::new(n).expect("n >= 1")
}

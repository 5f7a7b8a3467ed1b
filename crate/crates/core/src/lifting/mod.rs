//! Constructive openness lifts.
//!
//! Each lift takes a base point of a combination map together with a nearby
//! target value and produces new inputs that recombine to the target exactly,
//! reporting how far the inputs had to move.

mod barycenter;
mod measure;
mod point;

use serde::{Deserialize, Serialize};

use crate::measures::WeightPair;

pub use barycenter::{lift_barycenter, BarycenterLift};
pub use measure::{
    bicommutative_lift, deviation_lower_bound, lift_measure_combination, BicommutativeLift,
};
pub use point::{lift_point_min, GridSearchOracle, MinIntervalOracle, PointLiftOracle};

/// Lifted inputs `(left, right, weights)` of a binary combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LiftResult<T> {
    pub lifted_left: T,
    pub lifted_right: T,
    pub lifted_weights: WeightPair,
    /// Sup-distance of the lifted inputs from the base inputs.
    pub deviation: f64,
    /// Branch of the construction that produced the lift.
    pub case: String,
}

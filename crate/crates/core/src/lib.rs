//! Idempotent (max-`*`) measures over finite spaces for continuous t-norms:
//! residuated t-norm algebra, measures and their pushforwards, max-`*`
//! convexity in cubes, barycenters, constructive openness lifts, and
//! certification of openness failures.

pub mod barycenter;
pub mod certify;
pub mod convexity;
pub mod error;
pub mod lifting;
pub mod measures;
pub mod par;
pub mod sample;
pub mod tnorm;

pub use barycenter::{barycenter, cover_approximation, Cover, EmbeddedMeasure};
pub use convexity::{combine_points, n_ary_combine, ConvexBody, CubePoint, Membership};
pub use error::{Error, Result};
pub use measures::{FiniteSpace, FunctionOnSpace, IdempotentMeasure, SpaceMap, WeightPair};
pub use par::Exec;
pub use tnorm::{AxiomReport, Summand, TNormSpec};

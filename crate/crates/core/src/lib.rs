//! Exact arithmetic on truncated multilinear function series over a unital
//! base algebra, together with the group laws, actions and Lie structures
//! built from their multiplication and composition.

pub mod algebra;
pub mod error;
pub mod freeprob;
pub mod grouplaws;
pub mod json;
pub mod liealg;
pub mod ops;
pub mod rational;
pub mod series;
pub mod suites;
mod tensor;

pub use algebra::{AlgebraElement, AlgebraKind, BaseAlgebra, LinearMapOnB};
pub use error::{Error, Result};
pub use rational::Rational;
pub use series::{Constant, Difference, MultSeries, SeriesClass, Side};

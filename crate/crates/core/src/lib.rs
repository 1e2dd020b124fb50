//! Numerical laboratory for conformal geometry at a point.
//!
//! Metrics are given as closed-form component expressions; every derivative is
//! carried exactly (to a chosen order) by truncated Taylor jets, so curvature,
//! heat invariants, conformal invariants, GJMS operators and Green-function
//! logarithmic singularities are evaluated without finite-difference noise.

pub mod error;
pub mod jet;
pub mod dsl;
pub mod metric;
pub mod tensor;
pub mod curvature;
pub mod invariants;
pub mod conformal;
pub mod fg_rule;
pub mod catalog;
pub mod green;
pub mod gjms;
pub mod ambient;
pub mod spectral;
pub mod verify;
pub mod report;
pub mod cli;

pub use error::{Error, Result};

//! Rough-path norms of partial sums of orthogonal series.
//!
//! Partial sums `x_k = sum_{j<=k} c_j u_j(ω)` are treated as piecewise-linear paths.
//! The crate computes their exact 2-variation and the 1-variation of their Lévy
//! area, provides the dyadic decompositions used to bound them, and packages the
//! resulting inequalities as reproducible numerical experiments.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dyadic;
pub mod error;
pub mod experiments;
pub mod lattice_path;
pub mod levy_area;
pub mod lognorm;
pub mod rng;
pub mod series;
pub mod variation;

pub use error::{Error, Result};
pub use lattice_path::{IntervalZ, LatticePath};
pub use variation::VariationResult;

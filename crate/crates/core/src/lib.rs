//! Numerical toolkit for weighted interpolation inequalities on `ℝ^N` and on
//! the cylinder `ℝ × S^{N-1}`: parameter bookkeeping, closed-form constants,
//! a one-dimensional Schrödinger solver, zonal calculus on the sphere and a
//! discretised variational problem on the cylinder.

// `!(x > 0.0)` guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod error;
pub mod param_space;
pub mod quadrature;
pub mod report;
pub mod schrodinger_1d;
pub mod special;
pub mod sphere_ops;
pub mod cylinder_variational;

pub use error::{Error, Result};
pub use param_space::{CylinderPoint, ParamPoint, Region};

//! Numerical toolkit for operator-valued Hardy spaces of the unit circle and
//! the unit disk.
//!
//! Operators are finite complex matrices, circle functions are sampled,
//! trigonometric-polynomial or closed-form rules, and disk functions are
//! Taylor polynomials or strong Poisson extensions of circle functions.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod cli;
pub mod error;
pub mod function;
pub mod gallery;
pub mod grid;
pub mod matrix;
pub mod norms;
pub mod transforms;
pub mod verify;

pub use error::{HardyError, Result};
pub use function::{eval_circle, eval_disk, sample, CircleFunction, DiskFunction, KernelGrid, Rule};
pub use grid::{make_grid, CircleGrid, RadiusLadder};
pub use matrix::{MatrixValue, C64};
pub use norms::Exponent;

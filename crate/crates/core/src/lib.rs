//! Riesz summation of general Dirichlet series `Σ aₙ e^{−λₙ s}`.
//!
//! The crate evaluates Riesz means and summatory functions of arbitrary order, estimates
//! abscissas of convergence through Bohr–Cahen type formulas, implements the Laplace and
//! Perron transform pair that links a summatory function with the limit function, and
//! provides growth and norm diagnostics for the spaces `H∞,ℓ` of functions with
//! `sup |f(s)|/(1+|s|)^ℓ < ∞` on the right half-plane.

// `!(x > 0.0)` style checks are intentional: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abscissa;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod frequency;
pub mod grid;
pub mod quadrature;
pub mod series;
pub mod spaces;
pub mod special;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use frequency::{Frequency, Generator, IndexRange};
pub use num_complex::Complex64;
pub use series::{Coefficients, DirichletSeries, LimitEstimator, RieszKind, RieszSpec};

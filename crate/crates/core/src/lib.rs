//! Explicit solution formulas for the Benjamin–Ono equation on the torus and
//! on the line, with a pseudo-spectral reference solver for comparison.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dense;
pub mod error;
pub mod io;
pub mod line;
pub mod presets;
pub mod solver;
pub mod spectral;
pub mod torus;
pub mod validation;

pub use error::{Error, Result};

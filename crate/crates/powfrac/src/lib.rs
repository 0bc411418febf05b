//! Certified orbits of fractional parts of xi * alpha^n for algebraic
//! alpha > 1, with PV / Salem classification and the supporting exact
//! polynomial and field arithmetic.

pub mod analyze;
pub mod cli;
pub mod dyadic;
pub mod field;
pub mod orbit;
pub mod error;
pub mod poly_algebra;
pub mod salem;
pub mod transcend;

pub use error::{Error, Result};

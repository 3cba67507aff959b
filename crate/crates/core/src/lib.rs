// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod operator2d;
pub mod sparse;
pub mod transverse1d;

pub use error::{Error, Result};

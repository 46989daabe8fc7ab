//! Composition of points on cubic curves and surfaces over small finite
//! fields.
//!
//! The crate builds the collinearity relation of a cubic hypersurface, turns
//! it into an [`AbstractCubic`](cubic::AbstractCubic), and runs the
//! reflection-group word calculus, universal equivalence saturation,
//! generation closures and split-surface experiments on top of it.

pub mod corpus;
pub mod cubic;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod generation;
pub mod geometry;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod split;
pub mod words;

pub use error::{Error, Result};

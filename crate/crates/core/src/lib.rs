//! Numerics for weighted mixed-norm and tent spaces of analytic functions on the unit disc.
//!
//! The crate is organised bottom-up: [`quadrature`] provides deterministic integration
//! rules, [`weights`] models radial weights and their tails, [`geometry`] the cones and
//! squares, [`functions`] the analytic families, and [`norms`] / [`projection`] the
//! operators built on top of them.

pub mod error;
pub mod functions;
pub mod geometry;
pub mod norms;
pub mod projection;
pub mod quadrature;
pub mod weights;

pub use error::{Error, Result};
pub use num_complex::Complex64;

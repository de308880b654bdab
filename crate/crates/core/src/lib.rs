//! Stock-factor regression analysis.
//!
//! Ordinary least squares with full coefficient inference, the usual
//! linear-model diagnostics (VIF, studentized residuals, Q-Q, ACF,
//! component-plus-residual data), a random forest regressor, and a
//! cross-validated comparison harness that ties them together.

#![allow(clippy::needless_range_loop, clippy::excessive_precision)]

pub mod dataset;
pub mod diagnostics;
pub mod error;
pub mod evalharness;
pub mod forest;
pub mod linmodel;
pub mod numkernel;
pub mod rng;

pub use error::{Error, ErrorCategory, Result};

/// Version tag carried by every JSON document this crate writes.
pub const SPEC_VERSION: &str = "1.0";

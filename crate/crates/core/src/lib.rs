//! Hermite expansions on R^n in mixed radial-angular norms: kernels, component
//! operators, g-functions and numerical verification suites.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod grid;
pub mod harmonics;
pub mod kernels;
pub mod operators;
pub mod quadrature;
pub mod report;
pub mod specfun;
pub mod suites;

pub use error::{Error, Result};
pub use report::{Check, Report};
pub use suites::{run_suite, RunConfig, Suite};

//! Shared numerical kernels: adaptive quadrature, bracketed root finding,
//! finite differences, box-constrained minimization, and reproducible RNG
//! streams.

mod diff;
mod optim;
mod quadrature;
mod rng;
mod root;

pub use diff::{numeric_gradient, numeric_hessian};
pub use optim::{minimize_bounded, minimize_scalar_bounded, OptimResult, ScalarOptimResult};
pub use quadrature::{integrate, QuadratureResult};
pub use rng::RngStream;
pub use root::find_root;

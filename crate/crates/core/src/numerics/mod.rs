//! Numerical building blocks: quadrature, root finding, 1-D search, ODE stepping.

pub mod golden;
pub mod quadrature;
pub mod roots;
pub mod stepper;

pub use quadrature::{integrate, Integrator, QuadResult};

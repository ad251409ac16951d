//! Numerical workbench for BPS solitons of SDiff-symmetric Dirac-Born-Infeld
//! field theories in the baby (2+1) and Skyrme (3+1) sectors.
//!
//! The crate reduces the static field equations to a first-order law
//! `B₀ = W(field)`, builds radial profiles from it, evaluates energies and
//! topological charges, and certifies topological energy bounds for the
//! DBI Skyrme model from a Taylor truncation plus weighted AM-GM.

// NaN-rejecting `!(x > 0.0)` checks and full-precision quadrature nodes are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod bps;
pub mod config;
pub mod error;
pub mod format;
pub mod model;
pub mod numerics;
pub mod observables;
pub mod profile;

pub use error::{Error, Result};
pub use model::{
    make_potential, parse_potential, validate_params, KineticLaw, ModelParams, PotentialSpec, PotentialTag, Sector,
    TargetMeasure,
};

//! Particle-field (PF) model of the double-slit experiment.
//!
//! The crate evaluates the PF angular scattering density, samples scattering
//! events from it, propagates them to a screen and compares the resulting
//! hit histogram with the analytic expectation.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod chi2_table;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod pf;
pub mod quadrature;
pub mod rng;
pub mod sampler;
pub mod trajectory;
pub mod wavefield;

pub use error::{Error, Result};

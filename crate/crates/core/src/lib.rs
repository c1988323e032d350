//! One-dimensional online linear optimization on [-1, 1] driven by solutions
//! of the Gaussian Stein equation.
//!
//! The [`olo`] learner plays x_t = E_Z[f(s + ρ_t Z)] where f solves the Stein
//! equation for a user-chosen target h. [`baselines`] holds the classical
//! comparators (OGD, MWU, Cover's Boolean strategy), and [`harness`] runs
//! games, computes regret and checks it against the analytic bounds.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod cli;
pub mod error;
pub mod harness;
pub mod olo;
pub mod specfn;
pub mod stein;
pub mod targets;

pub use error::{Error, Result};
pub use stein::SteinSolution;
pub use targets::{CustomTarget, TargetFunction};

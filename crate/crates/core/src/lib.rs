//! Output-only modal identification workbench for single-span beams.
//!
//! The pipeline mirrors a numerical noise-robustness study:
//!
//! 1. [`beam_fem`] builds a planar Euler-Bernoulli model, solves the reference
//!    modal problem and simulates acceleration responses to band-limited
//!    random forces.
//! 2. [`noise_model`] corrupts each channel with RMS-scaled Gaussian noise.
//! 3. [`oma_freq`] (peak picking, frequency domain decomposition) and
//!    [`oma_ssi`] (data-driven stochastic subspace identification) estimate
//!    natural frequencies and mode shapes from the outputs alone.
//! 4. [`modal_metrics`] pairs the estimates with the reference modes.
//! 5. [`bench`] runs the Monte Carlo campaign and writes result tables.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod beam_fem;
pub mod bench;
pub mod cli;
pub mod dsp;
mod error;
mod linalg;
pub mod modal_metrics;
pub mod noise_model;
pub mod oma_freq;
pub mod oma_ssi;

pub use error::{OmaError, Result};

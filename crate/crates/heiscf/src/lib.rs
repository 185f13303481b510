//! Continued fractions on the Heisenberg group.
//!
//! This crate implements a complete exact-arithmetic pipeline for
//! Heisenberg continued fractions:
//!
//! * [`heis`] — the geometric model ℂ×ℝ with the twisted group law, gauge
//!   quasi-metric, and Korányi inversion, generic over exact rationals and
//!   floats;
//! * [`gaussian`] — Gaussian integers ℤ\[i\] and Gaussian rationals with a
//!   canonical common-denominator representation;
//! * [`siegel`] — the Siegel upper-half-space model, 3×3 matrices over
//!   ℂ preserving the Hermitian form J, and the matrix transcription of
//!   group operations and inversion;
//! * [`lattice`] — the integer lattice, nearest-lattice-point digit maps,
//!   and the two fundamental domains (cube and Dirichlet) they induce;
//! * [`cf`] — the continued-fraction engine: digit expansion, convergent
//!   matrices Q_n, reconstruction, rational termination, and the exact
//!   identities tying convergents to the orbit;
//! * [`dynamics`] — the Gauss shift as a dynamical system: orbit
//!   statistics, histograms, cylinder counts, transfer-operator test
//!   quantities, and Monte-Carlo volume/Jacobian estimators;
//! * [`bigcomplex`] — arbitrary-precision seeds (π, e, √2 based) realised
//!   as exact dyadic rationals so the exact pipeline can certify digit
//!   prefixes of irrational points.
//!
//! The exact path never takes fourth roots: the gauge is always handled
//! through its fourth power, which is rational on rational inputs.

pub mod bigcomplex;
pub mod cf;
pub mod dynamics;
pub mod error;
pub mod gaussian;
pub mod heis;
pub mod lattice;
pub mod siegel;

pub use error::{Error, Result};

/// Crate version string.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Periodized Gaussian functions of one and two discrete variables on odd
//! centered grids, the unitary centered DFT, discrete Wigner functions, and
//! a verification harness for the exact identities relating them.
//!
//! A grid of odd size d = 2j+1 carries indices −j..=j. Summing a continuous
//! Gaussian over all translates by multiples of d at grid scale √(2π/d)
//! yields a d-periodic bell that behaves under the centered DFT exactly like
//! its continuous parent under the Fourier transform: widths invert and a
//! 1/√κ (or 1/√det σ in two variables) prefactor appears. The same
//! periodization applied to the continuous Wigner function, at half-period
//! spacing and with a (−1)^{αβ} parity sign, reproduces the discrete Wigner
//! function.
//!
//! Everything here is a pure function of its arguments; all types are
//! immutable after construction and safe to share across threads.
//!
//! Organization:
//!
//! - [`grid`] — dimensions, centered indexing, parameters, grid storage
//! - [`lattice_sum`] — the shell-summed series engine with certified tails
//! - [`gaussians`] — continuous and discrete Gaussians, the theta series
//!   and its dual evaluation path
//! - [`transforms`] — centered DFT (1D/2D) and continuous Fourier closed
//!   forms
//! - [`wigner`] — discrete Wigner transforms, closed-form expansions, and
//!   half-period correspondence sums
//! - [`identities`] — named residual checks and the sweep runner

pub mod error;
pub mod gaussians;
pub mod grid;
pub mod identities;
pub mod lattice_sum;
pub mod transforms;
pub mod wigner;

pub use error::{Error, Result};
pub use grid::{
    canonical_index, Dimension, GridFunction, HalfShift, Kappa, Rank, SigmaMatrix, TruncationPolicy,
};
pub use identities::{all_passed, run_suite, IdentityCheck, SweepSpec};
pub use lattice_sum::{KahanSum, LatticeSumResult, SignPattern};
pub use wigner::WignerGrid;

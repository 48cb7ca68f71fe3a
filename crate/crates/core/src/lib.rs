//! Spectral simulation of a Gaussian wave packet in the infinite square well.
//!
//! The packet is expanded in the box eigenbasis and evolved exactly, so every
//! quantity here (autocorrelation, position and momentum densities, carpets)
//! is a finite sum over stationary states with closed-form time phases.
//!
//! Module map:
//!
//! * [`spectral`]: well constants, eigenstates, expansion coefficients and
//!   the classical/revival time scales.
//! * [`dynamics`]: autocorrelation, `rho(x, t)`, momentum eigenfunctions and
//!   `gamma(p, t)`.
//! * [`revival`]: peak detection, rational matching of revival times,
//!   sub-packet counting and the mirror-symmetry check.
//! * [`carpet`]: density rasters, PGM rendering and CSV grids.
//! * [`quadrature`]: adaptive Gauss-Kronrod integration used by the
//!   coefficient oracle and the conservation checks.

// NaN-rejecting checks are written as `!(x > 0.0)` throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod carpet;
pub mod dynamics;
pub mod error;
pub mod quadrature;
pub mod revival;
pub mod spectral;

mod fmt;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// `r e^{iθ}` through `f64::sin_cos`. `Complex64::from_polar` makes separate
/// `sin` and `cos` calls that the optimizer may or may not fuse into
/// `sincos`, and libm does not promise the two paths agree to the last bit.
pub(crate) fn polar(r: f64, theta: f64) -> Complex64 {
    let (sin, cos) = theta.sin_cos();
    Complex64::new(r * cos, r * sin)
}

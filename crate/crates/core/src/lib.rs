//! Spectral analysis of real banded block Toeplitz matrices.
//!
//! A matrix is described by its block Laurent symbol `B(z) = sum A_m z^m`.
//! The crate expands `f(z, lambda) = det(B(z) - lambda I)`, finds the root
//! branches in `z` and `lambda`, samples the limiting set of the truncation
//! spectra, and traces the net of points `z` where some branch is real.

pub mod symbolkit;
pub mod rootsolve;
pub mod grid;
pub mod spectra;
pub mod gammacurve;

//! Truncations and their eigenvalues, the limiting set of the truncation
//! spectra, and the contour-integral determinant `C0`.

pub mod c0;
pub mod eigen;
pub mod lambda0;
pub mod truncation;

use thiserror::Error;

use crate::rootsolve::RootError;

pub use c0::{c0, g0_scan, C0Config, C0Value, G0Candidate, G0Scan, RadiusRule};
pub use eigen::{hausdorff, NoConvergence};
pub use lambda0::{
    bracketing_moduli, default_lambda0_box, lambda0_gap, nj_gap, reality_verdict, sample_lambda0, Lambda0Point,
    Lambda0Sample, RealityVerdict, DEFAULT_TAU,
};
pub use truncation::{eigenvalues, eigenvalues_plain, truncation, Spectrum, Truncation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectraError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("lambda is too close to the limiting set (gap {gap:e})")]
    NearLambda0 { gap: f64 },
    #[error("B(z) - lambda I is singular at a quadrature node, also after rotating the nodes")]
    SingularNode,
    #[error("quadrature did not converge with {nodes} nodes")]
    QuadratureNotConverged { nodes: usize },
    #[error("empty limiting-set sample: grid too coarse or box misplaced")]
    EmptySample,
    #[error("QR iteration did not converge ({} eigenvalues found)", .0.found.len())]
    NoConvergence(NoConvergence),
}

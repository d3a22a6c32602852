//! The net `Gamma(B)`: points `z` for which `f(z, lambda) = 0` has a real
//! root `lambda`. Sign-field tracing, the implicit polynomial obtained by
//! elimination, oval census and ray crossings.

pub mod contour;
pub mod field;
pub mod implicit;
pub mod rays;
pub mod verdict;

use thiserror::Error;

use crate::rootsolve::RootError;
use crate::spectra::SpectraError;

pub use contour::{is_pinched, is_simple, oval_census, trace_contours, winding_number, Census, Component, ContourSet};
pub use field::{default_gamma_box, gamma_member, net_value, node_field, p_value, sign_field, GridField, SignField};
pub use implicit::{gamma_implicit, implicit_agreement, trace_implicit, ImplicitCurve};
pub use rays::{default_ray_directions, ray_crossings, RayCrossings};
pub use verdict::{conjecture_verdict, trace_sign_field, verdict_for, ConjectureReport, VerdictConfig};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GammaError {
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error("base point lies on the polyline")]
    BaseOnCurve,
    #[error("winding sum {0} is not close to an integer")]
    WindingResidual(f64),
    #[error("elimination too large: {0}")]
    Guard(String),
    #[error("the resultant vanishes identically")]
    ZeroResultant,
}

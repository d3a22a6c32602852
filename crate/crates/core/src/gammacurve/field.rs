use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::GammaError;
use crate::grid::{centre_coords, node_coords, Rect};
use crate::rootsolve::{branches_lambda, sorted_roots_z};
use crate::spectra::default_lambda0_box;
use crate::symbolkit::CharFunction;

/// Whether some branch `lambda_j(z)` is real to within `tol`.
pub fn gamma_member(f: &CharFunction, z: Complex64, tol: f64) -> Result<bool, GammaError> {
    let b = branches_lambda(f, z)?;
    Ok(b.roots.iter().any(|l| l.im.abs() <= tol))
}

/// `P(z) = prod_j Im lambda_j(z)`; vanishes exactly on the net.
pub fn p_value(f: &CharFunction, z: Complex64) -> Option<f64> {
    let b = branches_lambda(f, z).ok()?;
    let v: f64 = b.roots.iter().map(|l| l.im).product();
    v.is_finite().then_some(v)
}

/// `P(z) / y^(k mod 2)`.
///
/// For odd `k` and a real symbol the whole real axis lies in the net and
/// `P` changes sign across it; dividing by `y` removes that factor so the
/// curves off the axis can be traced without spurious junctions.
pub fn net_value(f: &CharFunction, z: Complex64) -> Option<f64> {
    let p = p_value(f, z)?;
    if f.k() % 2 == 1 {
        if z.im == 0.0 {
            return None;
        }
        Some(p / z.im)
    } else {
        Some(p)
    }
}

/// Values on a rectangular lattice of points; `valid[i]` false marks masked nodes.
#[derive(Clone, Debug, Serialize)]
pub struct GridField {
    pub bbox: Rect,
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    /// Row-major, `values[iy * xs.len() + ix]`.
    pub values: Vec<f64>,
    pub valid: Vec<bool>,
}

impl GridField {
    pub fn nx(&self) -> usize {
        self.xs.len()
    }

    pub fn ny(&self) -> usize {
        self.ys.len()
    }

    /// Larger lattice spacing.
    pub fn spacing(&self) -> f64 {
        let dx = if self.nx() > 1 { self.xs[1] - self.xs[0] } else { self.bbox.width() };
        let dy = if self.ny() > 1 { self.ys[1] - self.ys[0] } else { self.bbox.height() };
        dx.max(dy)
    }

    pub fn at(&self, ix: usize, iy: usize) -> Option<f64> {
        let i = iy * self.nx() + ix;
        self.valid[i].then_some(self.values[i])
    }

    /// Samples `eval` at the given lattice, masking nodes where it fails or
    /// that lie within `mask_radius` of the origin.
    pub fn sample(bbox: Rect, xs: Vec<f64>, ys: Vec<f64>, mask_radius: f64, eval: impl Fn(Complex64) -> Option<f64> + Sync) -> GridField {
        let nx = xs.len();
        let cells: Vec<Option<f64>> = (0..nx * ys.len())
            .into_par_iter()
            .map(|i| {
                let z = Complex64::new(xs[i % nx], ys[i / nx]);
                if z.norm() < mask_radius {
                    None
                } else {
                    eval(z)
                }
            })
            .collect();
        let valid = cells.iter().map(|c| c.is_some()).collect();
        let values = cells.into_iter().map(|c| c.unwrap_or(0.0)).collect();
        GridField { bbox, xs, ys, values, valid }
    }
}

/// The sign field of the net on a cell-centred `res x res` lattice.
#[derive(Clone, Debug, Serialize)]
pub struct SignField {
    pub res: usize,
    pub k: usize,
    /// Raw `P` values.
    pub raw: GridField,
    /// Axis-neutral values used for tracing.
    pub net: GridField,
    /// Radius of the masked disk around the origin.
    pub mask_radius: f64,
    /// Fraction of valid nodes where `|P|` is negligible; large values hint
    /// at two-dimensional pieces of the net.
    pub near_zero_fraction: f64,
}

/// Origin mask radius, in cells.
pub const ORIGIN_MASK_CELLS: f64 = 2.0;

pub fn sign_field(f: &CharFunction, bbox: Rect, res: usize) -> SignField {
    let xs = centre_coords(bbox.x0, bbox.x1, res);
    let ys = centre_coords(bbox.y0, bbox.y1, res);
    let cell = (bbox.width() / res as f64).max(bbox.height() / res as f64);
    let mask_radius = ORIGIN_MASK_CELLS * cell;
    let raw = GridField::sample(bbox, xs.clone(), ys.clone(), mask_radius, |z| p_value(f, z));
    let odd = f.k() % 2 == 1;
    let net_values = raw
        .values
        .iter()
        .enumerate()
        .map(|(i, v)| if odd { v / ys[i / xs.len()] } else { *v })
        .collect();
    let net = GridField { values: net_values, ..raw.clone() };
    let valid: Vec<f64> = raw.values.iter().zip(&raw.valid).filter(|(_, ok)| **ok).map(|(v, _)| v.abs()).collect();
    let scale = valid.iter().copied().fold(0.0, f64::max);
    let near_zero_fraction = if valid.is_empty() || scale == 0.0 {
        1.0
    } else {
        valid.iter().filter(|v| **v <= 1e-12 * scale).count() as f64 / valid.len() as f64
    };
    SignField { res, k: f.k(), raw, net, mask_radius, near_zero_fraction }
}

/// Node-lattice variant (`res + 1` nodes per side, box edges included); used
/// for sampling polynomials where the axis is not special.
pub fn node_field(bbox: Rect, res: usize, mask_radius: f64, eval: impl Fn(Complex64) -> Option<f64> + Sync) -> GridField {
    GridField::sample(bbox, node_coords(bbox.x0, bbox.x1, res), node_coords(bbox.y0, bbox.y1, res), mask_radius, eval)
}

/// Square box of half-width `1.5 max |z_{p+1}(lambda)|` over the probes,
/// clipped to 10. With no probes, real points across the default limiting-set box are used.
pub fn default_gamma_box(f: &CharFunction, probes: &[Complex64]) -> Result<Rect, GammaError> {
    let owned;
    let probes = if probes.is_empty() {
        let b = default_lambda0_box(f)?;
        owned = (0..64).map(|i| Complex64::new(b.x0 + b.width() * (i as f64 + 0.5) / 64.0, 0.0)).collect::<Vec<_>>();
        &owned[..]
    } else {
        probes
    };
    let p = f.p().max(0) as usize;
    let mut reach: f64 = 0.0;
    for lam in probes {
        if let Ok(r) = sorted_roots_z(f, *lam) {
            if let Some(z) = r.roots.get(p) {
                if z.is_finite() {
                    reach = reach.max(z.norm());
                }
            }
        }
    }
    if !(reach > 0.0) {
        return Err(GammaError::Degenerate("no probe produced a usable root".into()));
    }
    Ok(Rect::square((1.5 * reach).min(10.0)))
}

use serde::Serialize;

use super::contour::{oval_census, trace_contours, Census, ContourSet};
use super::field::{default_gamma_box, net_value, sign_field, SignField};
use super::rays::{default_ray_directions, ray_crossings};
use super::GammaError;
use crate::grid::Rect;
use crate::spectra::{default_lambda0_box, reality_verdict, sample_lambda0, RealityVerdict, DEFAULT_TAU};
use crate::symbolkit::{char_function, CharFunction, MatrixSymbol};
use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct VerdictConfig {
    pub lambda0_box: Option<Rect>,
    pub lambda0_res: usize,
    pub tau: f64,
    pub gamma_box: Option<Rect>,
    pub gamma_res: usize,
    pub rays: usize,
    pub ray_radii: (f64, f64),
    pub ray_samples: usize,
    pub ray_tol: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            lambda0_box: None,
            lambda0_res: 1024,
            tau: DEFAULT_TAU,
            gamma_box: None,
            gamma_res: 1024,
            rays: 16,
            ray_radii: (1e-3, 1e3),
            ray_samples: 1024,
            ray_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub k: usize,
    pub lambda0_box: Option<Rect>,
    pub reality: Option<RealityVerdict>,
    pub gamma_box: Option<Rect>,
    pub census: Option<Census>,
    pub ray_counts: Vec<usize>,
    pub min_ray_crossings: Option<usize>,
    /// Whether "real limiting set" and "at least k enclosing ovals" agree.
    /// Evidence only; `None` when either side is missing.
    pub agreement: Option<bool>,
    pub errors: Vec<String>,
}

/// Sign field on a `res x res` cell-centred lattice and its traced zero set.
pub fn trace_sign_field(f: &CharFunction, bbox: Rect, res: usize) -> (SignField, ContourSet) {
    let field = sign_field(f, bbox, res);
    let contours = trace_contours(&field.net, |x, y| net_value(f, Complex64::new(x, y)));
    (field, contours)
}

pub fn conjecture_verdict(symbol: &MatrixSymbol, cfg: &VerdictConfig) -> Result<ConjectureReport, GammaError> {
    let f = char_function(symbol).map_err(|e| GammaError::InvalidInput(e.to_string()))?;
    Ok(verdict_for(&f, cfg))
}

/// Runs every section independently; failures are listed in `errors`.
pub fn verdict_for(f: &CharFunction, cfg: &VerdictConfig) -> ConjectureReport {
    let k = f.k();
    let mut errors = Vec::new();
    let lambda0_box = match cfg.lambda0_box {
        Some(b) => Some(b),
        None => default_lambda0_box(f).map_err(|e| errors.push(format!("limiting-set box: {e}"))).ok(),
    };
    let reality = lambda0_box.and_then(|b| {
        sample_lambda0(f, b, cfg.lambda0_res, cfg.tau)
            .and_then(|s| reality_verdict(&s))
            .map_err(|e| errors.push(format!("limiting set: {e}")))
            .ok()
    });
    let gamma_box = match cfg.gamma_box {
        Some(b) => Some(b),
        None => default_gamma_box(f, &[]).map_err(|e| errors.push(format!("net box: {e}"))).ok(),
    };
    let census = gamma_box.map(|b| {
        let (field, contours) = trace_sign_field(f, b, cfg.gamma_res);
        if field.near_zero_fraction > 0.05 {
            errors.push(format!(
                "net field vanishes on {:.1}% of the grid; the net may contain two-dimensional pieces",
                100.0 * field.near_zero_fraction
            ));
        }
        if contours.interior_endpoints > 0 {
            errors.push(format!("{} traced arcs end inside the box", contours.interior_endpoints));
        }
        oval_census(&contours)
    });
    let mut ray_counts = Vec::new();
    for d in default_ray_directions(cfg.rays) {
        match ray_crossings(f, d, cfg.ray_radii, cfg.ray_samples, cfg.ray_tol) {
            Ok(r) => ray_counts.push(r.count()),
            Err(e) => errors.push(format!("ray {:.4}+{:.4}i: {e}", d.re, d.im)),
        }
    }
    let min_ray_crossings = if ray_counts.len() == cfg.rays { ray_counts.iter().copied().min() } else { None };
    let agreement = match (&reality, &census) {
        (Some(r), Some(c)) => Some(r.real == (c.enclosing >= k)),
        _ => None,
    };
    ConjectureReport { k, lambda0_box, reality, gamma_box, census, ray_counts, min_ray_crossings, agreement, errors }
}

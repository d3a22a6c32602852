use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use super::field::p_value;
use super::GammaError;
use crate::symbolkit::CharFunction;

#[derive(Clone, Debug, Serialize)]
pub struct RayCrossings {
    pub direction: (f64, f64),
    /// Radii of the located crossings, ascending.
    pub radii: Vec<f64>,
    /// Samples where `P` could not be evaluated, even after nudging.
    pub skipped: usize,
}

impl RayCrossings {
    pub fn count(&self) -> usize {
        self.radii.len()
    }
}

/// `count` directions at angles `(j + 1/2) pi / (count / 2)`, avoiding the real axis.
pub fn default_ray_directions(count: usize) -> Vec<Complex64> {
    (0..count).map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / count as f64)).collect()
}

/// Sign changes of `P` along `{t d : r_min <= t <= r_max}`, sampled
/// logarithmically; each crossing is bisected to relative `tol` in `t`.
pub fn ray_crossings(
    f: &CharFunction,
    direction: Complex64,
    radii: (f64, f64),
    samples: usize,
    tol: f64,
) -> Result<RayCrossings, GammaError> {
    let (r0, r1) = radii;
    if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(GammaError::InvalidInput(format!("radii must satisfy 0 < r_min < r_max, got [{r0}, {r1}]")));
    }
    if samples < 256 {
        return Err(GammaError::InvalidInput(format!("at least 256 samples required, got {samples}")));
    }
    if !(tol > 0.0) || direction.norm() == 0.0 {
        return Err(GammaError::InvalidInput("tolerance must be positive and direction nonzero".into()));
    }
    let d = direction / direction.norm();
    let at = |t: f64| p_value(f, d * t);
    let step = (r1 / r0).ln() / (samples - 1) as f64;
    let mut skipped = 0;
    let mut prev: Option<(f64, f64)> = None;
    let mut out = Vec::new();
    for i in 0..samples {
        let t = r0 * (step * i as f64).exp();
        // A failed evaluation is retried at a slightly shifted radius.
        let sample = at(t).map(|v| (t, v)).or_else(|| {
            let t2 = t * (1.0 + 1e-3 * step);
            at(t2).map(|v| (t2, v))
        });
        let Some((t, v)) = sample else {
            skipped += 1;
            continue;
        };
        if v == 0.0 {
            continue;
        }
        if let Some((tp, vp)) = prev {
            if (vp < 0.0) != (v < 0.0) {
                out.push(bisect(&at, (tp, vp), t, tol));
            }
        }
        prev = Some((t, v));
    }
    Ok(RayCrossings { direction: (d.re, d.im), radii: out, skipped })
}

fn bisect(g: &impl Fn(f64) -> Option<f64>, lo: (f64, f64), mut hi: f64, tol: f64) -> f64 {
    let (mut lo, neg_lo) = (lo.0, lo.1 < 0.0);
    while hi - lo > tol * hi {
        let mid = 0.5 * (lo + hi);
        match g(mid) {
            Some(v) if v != 0.0 && (v < 0.0) == neg_lo => lo = mid,
            Some(v) if v != 0.0 => hi = mid,
            _ => return mid,
        }
    }
    0.5 * (lo + hi)
}

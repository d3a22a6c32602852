use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use super::lambda0::{bracketing_moduli, lambda0_gap};
use super::SpectraError;
use crate::grid::{node_coords, Rect};
use crate::symbolkit::{CharFunction, MatrixSymbol};

pub const MIN_NODES: usize = 64;
pub const MAX_NODES: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum RadiusRule {
    /// `sqrt(|z_p| |z_{p+1}|)`.
    GeometricMean,
    Explicit(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C0Config {
    /// Starting node count (power of two, at least 64); doubled until converged.
    pub nodes: usize,
    pub radius: RadiusRule,
    /// Convergence: `|c0(N) - c0(2N)| <= tol * max(1, |c0|)`.
    pub tol: f64,
}

impl Default for C0Config {
    fn default() -> Self {
        C0Config { nodes: MIN_NODES, radius: RadiusRule::GeometricMean, tol: 1e-12 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct C0Value {
    pub value: Complex64,
    /// Node count of the returned value.
    pub nodes: usize,
    pub radius: f64,
    /// `|c0(N/2) - c0(N)|` at the accepted `N`.
    pub last_change: f64,
}

/// `det( (1/2 pi i) \oint z^{mu-nu} (B(z) - lambda I)^{-1} dz/z )_{mu,nu=1..r}`
/// by the trapezoidal rule on a circle separating `z_1..z_p` from the rest.
pub fn c0(symbol: &MatrixSymbol, f: &CharFunction, lambda: Complex64, cfg: &C0Config) -> Result<C0Value, SpectraError> {
    if cfg.nodes < MIN_NODES || !cfg.nodes.is_power_of_two() || cfg.nodes > MAX_NODES {
        return Err(SpectraError::InvalidInput(format!("node count {} must be a power of two in [64, 2^14]", cfg.nodes)));
    }
    let gap = lambda0_gap(f, lambda)?;
    if gap < 1e-6 {
        return Err(SpectraError::NearLambda0 { gap });
    }
    let (inner, outer) = bracketing_moduli(f, lambda)?;
    let radius = match cfg.radius {
        RadiusRule::GeometricMean => (inner * outer).sqrt(),
        RadiusRule::Explicit(r) => {
            if !(r > inner && r < outer) {
                return Err(SpectraError::InvalidInput(format!(
                    "radius {r} outside the admissible annulus ({inner}, {outer})"
                )));
            }
            r
        }
    };
    let blocks = symbol.float_blocks();
    let r = symbol.r() as usize;
    let eval = |n: usize| -> Result<Complex64, SpectraError> {
        match c0_at(&blocks, symbol.k(), r, lambda, radius, n, 0.0) {
            Some(v) => Ok(v),
            None => c0_at(&blocks, symbol.k(), r, lambda, radius, n, 0.5).ok_or(SpectraError::SingularNode),
        }
    };
    let mut n = cfg.nodes;
    let mut prev = eval(n)?;
    while n < MAX_NODES {
        n *= 2;
        let cur = eval(n)?;
        let change = (cur - prev).norm();
        if change <= cfg.tol * cur.norm().max(1.0) {
            return Ok(C0Value { value: cur, nodes: n, radius, last_change: change });
        }
        prev = cur;
    }
    Err(SpectraError::QuadratureNotConverged { nodes: n })
}

/// One trapezoidal evaluation with nodes at angles `2 pi (j + offset) / n`.
fn c0_at(
    blocks: &[(i32, Vec<f64>)],
    k: usize,
    r: usize,
    lambda: Complex64,
    radius: f64,
    n: usize,
    offset: f64,
) -> Option<Complex64> {
    // acc[d + r - 1] = mean of z^d (B(z) - lambda)^{-1}, d = mu - nu in -(r-1)..=(r-1)
    let span = 2 * r - 1;
    let mut acc = vec![DMatrix::<Complex64>::zeros(k, k); span];
    for j in 0..n {
        let z = Complex64::from_polar(radius, TAU * (j as f64 + offset) / n as f64);
        let mut m = DMatrix::<Complex64>::zeros(k, k);
        for (e, data) in blocks {
            let ze = z.powi(*e);
            for a in 0..k {
                for b in 0..k {
                    m[(a, b)] += ze * data[a * k + b];
                }
            }
        }
        for a in 0..k {
            m[(a, a)] -= lambda;
        }
        let inv = m.try_inverse()?;
        if inv.iter().any(|v| !v.is_finite()) {
            return None;
        }
        for (slot, d) in acc.iter_mut().zip(-(r as i32 - 1)..=(r as i32 - 1)) {
            *slot += &inv * z.powi(d);
        }
    }
    let size = r * k;
    let mut big = DMatrix::<Complex64>::zeros(size, size);
    let scale = Complex64::new(1.0 / n as f64, 0.0);
    for mu in 0..r {
        for nu in 0..r {
            let d = mu as i32 - nu as i32;
            let block = &acc[(d + r as i32 - 1) as usize];
            for a in 0..k {
                for b in 0..k {
                    big[(mu * k + a, nu * k + b)] = block[(a, b)] * scale;
                }
            }
        }
    }
    Some(big.determinant())
}

#[derive(Clone, Debug, Serialize)]
pub struct G0Candidate {
    pub re: f64,
    pub im: f64,
    pub abs_c0: f64,
    /// Whether `|c0|` stays below the threshold with doubled quadrature.
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct G0Scan {
    pub candidates: Vec<G0Candidate>,
    pub skipped: usize,
    pub evaluated: usize,
}

pub const G0_THRESHOLD: f64 = 1e-4;

/// Best-effort search for isolated zeros of `C0` off the limiting set.
///
/// Every strict local minimum of `|C0|` on the node grid (points with gap
/// `<= 1e-3` skipped) is refined by coordinate descent and kept when the
/// refined value is below [`G0_THRESHOLD`].
pub fn g0_scan(symbol: &MatrixSymbol, f: &CharFunction, bbox: Rect, res: usize) -> G0Scan {
    let xs = node_coords(bbox.x0, bbox.x1, res);
    let ys = node_coords(bbox.y0, bbox.y1, res);
    let nx = xs.len();
    let cfg = C0Config::default();
    let abs_at = |lam: Complex64| -> Option<f64> {
        match lambda0_gap(f, lam) {
            Ok(g) if g > 1e-3 => c0(symbol, f, lam, &cfg).ok().map(|v| v.value.norm()),
            _ => None,
        }
    };
    let vals: Vec<Option<f64>> =
        (0..nx * nx).into_par_iter().map(|idx| abs_at(Complex64::new(xs[idx % nx], ys[idx / nx]))).collect();
    let skipped = vals.iter().filter(|v| v.is_none()).count();
    let mut starts = Vec::new();
    for iy in 1..nx.saturating_sub(1) {
        'nodes: for ix in 1..nx - 1 {
            let Some(v) = vals[iy * nx + ix] else { continue };
            for (dx, dy) in [(-1i64, -1i64), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)] {
                let j = (iy as i64 + dy) as usize * nx + (ix as i64 + dx) as usize;
                // Minima next to the limiting set are boundary effects.
                match vals[j] {
                    Some(w) if w > v => {}
                    _ => continue 'nodes,
                }
            }
            starts.push(Complex64::new(xs[ix], ys[iy]));
        }
    }
    let h0 = (bbox.width() / res as f64).max(bbox.height() / res as f64);
    let mut candidates: Vec<G0Candidate> = starts
        .into_iter()
        .filter_map(|start| {
            let (lam, v) = coordinate_descent(&abs_at, start, h0)?;
            if v >= G0_THRESHOLD {
                return None;
            }
            let doubled = C0Config { nodes: 2 * cfg.nodes, ..cfg };
            let verified = c0(symbol, f, lam, &doubled).map(|c| c.value.norm() < G0_THRESHOLD).unwrap_or(false);
            Some(G0Candidate { re: lam.re, im: lam.im, abs_c0: v, verified })
        })
        .collect();
    candidates.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    G0Scan { candidates, skipped, evaluated: nx * nx - skipped }
}

fn coordinate_descent(g: &impl Fn(Complex64) -> Option<f64>, start: Complex64, h0: f64) -> Option<(Complex64, f64)> {
    let mut best = start;
    let mut val = g(start)?;
    let mut h = h0 / 2.0;
    let mut steps = 0;
    while h > h0 * 1e-9 && steps < 400 {
        steps += 1;
        let mut moved = false;
        for dir in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(0.0, -1.0)] {
            let cand = best + dir * h;
            if let Some(v) = g(cand) {
                if v < val {
                    best = cand;
                    val = v;
                    moved = true;
                }
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    Some((best, val))
}

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::SpectraError;
use crate::grid::{node_coords, Rect};
use crate::rootsolve::{branches_lambda, sorted_roots_z, RootList};
use crate::symbolkit::CharFunction;

/// Default membership threshold on the gap ratio.
pub const DEFAULT_TAU: f64 = 1e-3;
/// Grid-line local minima below this gap are refined by golden-section search.
pub const REFINE_CAP: f64 = 0.25;

/// Checks that `z^p f(z, lambda)` has all `p + q` roots finite and nonzero.
fn split_roots(f: &CharFunction, lambda: Complex64) -> Result<RootList, SpectraError> {
    if f.p() < 1 || f.q() < 1 {
        return Err(SpectraError::Degenerate(format!(
            "f has z-order {} and z-degree {}; both sides of the origin need roots",
            -f.p(),
            f.q()
        )));
    }
    let roots = sorted_roots_z(f, lambda)?;
    if roots.at_infinity > 0 {
        return Err(SpectraError::Degenerate(format!("leading coefficient f_q vanishes at lambda = {lambda}")));
    }
    if roots.at_origin > 0 {
        return Err(SpectraError::Degenerate(format!("trailing coefficient f_-p vanishes at lambda = {lambda}")));
    }
    Ok(roots)
}

/// `|z_{p+1}(lambda)| / |z_p(lambda)| - 1` for the moduli-sorted roots of `z^p f(z, lambda)`.
pub fn lambda0_gap(f: &CharFunction, lambda: Complex64) -> Result<f64, SpectraError> {
    let roots = split_roots(f, lambda)?;
    let p = f.p() as usize;
    let inner = roots.roots[p - 1].norm();
    let outer = roots.roots[p].norm();
    Ok((outer / inner - 1.0).max(0.0))
}

/// `|z_p(lambda)|` and `|z_{p+1}(lambda)|`.
pub fn bracketing_moduli(f: &CharFunction, lambda: Complex64) -> Result<(f64, f64), SpectraError> {
    let roots = split_roots(f, lambda)?;
    let p = f.p() as usize;
    Ok((roots.roots[p - 1].norm(), roots.roots[p].norm()))
}

/// Gap evaluated at the `j`-th (1-based, moduli order) branch `lambda_j(z)`.
pub fn nj_gap(f: &CharFunction, z: Complex64, j: usize) -> Result<f64, SpectraError> {
    let branches = branches_lambda(f, z)?;
    if j == 0 || j > branches.len() {
        return Err(SpectraError::InvalidInput(format!("branch index {j} outside 1..={}", branches.len())));
    }
    lambda0_gap(f, branches.roots[j - 1])
}

#[derive(Clone, Debug, Serialize)]
pub struct Lambda0Point {
    pub re: f64,
    pub im: f64,
    pub gap: f64,
}

impl Lambda0Point {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Lambda0Sample {
    pub bbox: Rect,
    pub res: usize,
    pub tau: f64,
    pub cell_diagonal: f64,
    /// Points with `gap <= tau`, sorted by (re, im).
    pub points: Vec<Lambda0Point>,
    /// Grid nodes skipped because a coefficient degenerated there.
    pub skipped: usize,
}

/// Grid realization of the limiting set: evaluates the gap on the
/// `(res+1)^2` node grid, refines every grid-line local minimum below
/// [`REFINE_CAP`] by golden-section search, and keeps points with gap `<= tau`.
pub fn sample_lambda0(f: &CharFunction, bbox: Rect, res: usize, tau: f64) -> Result<Lambda0Sample, SpectraError> {
    if res < 16 {
        return Err(SpectraError::InvalidInput(format!("resolution {res} below 16")));
    }
    if !(tau > 0.0) {
        return Err(SpectraError::InvalidInput("threshold must be positive".into()));
    }
    let xs = node_coords(bbox.x0, bbox.x1, res);
    let ys = node_coords(bbox.y0, bbox.y1, res);
    let nx = xs.len();
    let gaps: Vec<Option<f64>> = (0..nx * nx)
        .into_par_iter()
        .map(|idx| lambda0_gap(f, Complex64::new(xs[idx % nx], ys[idx / nx])).ok())
        .collect();
    let skipped = gaps.iter().filter(|g| g.is_none()).count();
    let mut points: Vec<Lambda0Point> = Vec::new();
    for (idx, g) in gaps.iter().enumerate() {
        if let Some(g) = g {
            if *g <= tau {
                points.push(Lambda0Point { re: xs[idx % nx], im: ys[idx / nx], gap: *g });
            }
        }
    }
    // Refinement along rows (varying x) and columns (varying y).
    let mut segments: Vec<(Complex64, Complex64)> = Vec::new();
    let at = |ix: usize, iy: usize| gaps[iy * nx + ix];
    for iy in 0..nx {
        for ix in 1..nx - 1 {
            if let (Some(a), Some(b), Some(c)) = (at(ix - 1, iy), at(ix, iy), at(ix + 1, iy)) {
                if b <= a && b <= c && b < REFINE_CAP && b > 0.0 {
                    segments.push((Complex64::new(xs[ix - 1], ys[iy]), Complex64::new(xs[ix + 1], ys[iy])));
                }
            }
        }
    }
    for ix in 0..nx {
        for iy in 1..nx - 1 {
            if let (Some(a), Some(b), Some(c)) = (at(ix, iy - 1), at(ix, iy), at(ix, iy + 1)) {
                if b <= a && b <= c && b < REFINE_CAP && b > 0.0 {
                    segments.push((Complex64::new(xs[ix], ys[iy - 1]), Complex64::new(xs[ix], ys[iy + 1])));
                }
            }
        }
    }
    let refined: Vec<Option<Lambda0Point>> = segments
        .par_iter()
        .map(|&(a, b)| {
            let (lam, gap) = golden_min(|l| lambda0_gap(f, l).unwrap_or(f64::INFINITY), a, b);
            (gap <= tau).then_some(Lambda0Point { re: lam.re, im: lam.im, gap })
        })
        .collect();
    points.extend(refined.into_iter().flatten());
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let dx = bbox.width() / res as f64;
    let dy = bbox.height() / res as f64;
    Ok(Lambda0Sample { bbox, res, tau, cell_diagonal: dx.hypot(dy), points, skipped })
}

/// Golden-section minimization of `g` on the segment `[a, b]`.
fn golden_min(g: impl Fn(Complex64) -> f64, a: Complex64, b: Complex64) -> (Complex64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let point = |t: f64| a + (b - a) * t;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut t1 = hi - inv_phi * (hi - lo);
    let mut t2 = lo + inv_phi * (hi - lo);
    let mut g1 = g(point(t1));
    let mut g2 = g(point(t2));
    for _ in 0..60 {
        if hi - lo < 1e-12 {
            break;
        }
        if g1 <= g2 {
            hi = t2;
            t2 = t1;
            g2 = g1;
            t1 = hi - inv_phi * (hi - lo);
            g1 = g(point(t1));
        } else {
            lo = t1;
            t1 = t2;
            g1 = g2;
            t2 = lo + inv_phi * (hi - lo);
            g2 = g(point(t2));
        }
    }
    if g1 <= g2 {
        (point(t1), g1)
    } else {
        (point(t2), g2)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealityVerdict {
    pub real: bool,
    /// Sample points with `|Im| >` cell diagonal, by `|Im|` descending.
    pub offenders: Vec<Lambda0Point>,
    pub max_abs_im: f64,
}

pub fn reality_verdict(sample: &Lambda0Sample) -> Result<RealityVerdict, SpectraError> {
    if sample.points.is_empty() {
        return Err(SpectraError::EmptySample);
    }
    let mut offenders: Vec<Lambda0Point> =
        sample.points.iter().filter(|p| p.im.abs() > sample.cell_diagonal).cloned().collect();
    offenders.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()).then(a.re.total_cmp(&b.re)).then(a.im.total_cmp(&b.im)));
    let max_abs_im = sample.points.iter().map(|p| p.im.abs()).fold(0.0, f64::max);
    Ok(RealityVerdict { real: offenders.is_empty(), offenders, max_abs_im })
}

/// A box that contains the limiting set: the intersection over several radii
/// `rho` of the bounding boxes of the curves `lambda_j(rho e^{i theta})`,
/// symmetrized about the real axis and padded by 5%.
pub fn default_lambda0_box(f: &CharFunction) -> Result<Rect, SpectraError> {
    let mut acc: Option<Rect> = None;
    for e in 0..=16 {
        let rho = 10f64.powf(-1.0 + e as f64 / 8.0);
        let mut r = Rect { x0: f64::INFINITY, x1: f64::NEG_INFINITY, y0: f64::INFINITY, y1: f64::NEG_INFINITY };
        for t in 0..512 {
            let z = Complex64::from_polar(rho, std::f64::consts::TAU * (t as f64 + 0.5) / 512.0);
            for lam in branches_lambda(f, z)?.roots {
                r.x0 = r.x0.min(lam.re);
                r.x1 = r.x1.max(lam.re);
                r.y0 = r.y0.min(lam.im);
                r.y1 = r.y1.max(lam.im);
            }
        }
        acc = Some(match acc {
            None => r,
            Some(a) => Rect { x0: a.x0.max(r.x0), x1: a.x1.min(r.x1), y0: a.y0.max(r.y0), y1: a.y1.min(r.y1) },
        });
    }
    let a = acc.unwrap();
    let h = a.y0.abs().max(a.y1.abs());
    let width = (a.x1 - a.x0).max(1e-6);
    let h = h.max(0.05 * width);
    Ok(Rect { x0: a.x0, x1: a.x0 + width, y0: -h, y1: h }.padded(0.05))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolkit::{char_function, MatrixSymbol};

    fn joukowski() -> CharFunction {
        char_function(&MatrixSymbol::from_integer_blocks(1, &[(-1, vec![vec![1]]), (1, vec![vec![1]])]).unwrap()).unwrap()
    }

    #[test]
    fn gap_examples() {
        let f = joukowski();
        assert!(lambda0_gap(&f, Complex64::new(0.0, 0.0)).unwrap() < 1e-14);
        let s5 = 5f64.sqrt();
        let want = (3.0 + s5) / (3.0 - s5) - 1.0;
        assert!((lambda0_gap(&f, Complex64::new(3.0, 0.0)).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn joukowski_sample_is_the_segment() {
        let f = joukowski();
        let s = sample_lambda0(&f, Rect::square(3.0), 128, 1e-3).unwrap();
        assert!(!s.points.is_empty());
        for p in &s.points {
            let dist = if p.re.abs() <= 2.0 { p.im.abs() } else { (p.re.abs() - 2.0).hypot(p.im) };
            assert!(dist <= s.cell_diagonal, "{p:?}");
        }
        assert!(reality_verdict(&s).unwrap().real);
    }

    #[test]
    fn golden_section_finds_v_minimum() {
        let (z, g) = golden_min(|z| (z.re - 0.3).abs(), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        assert!((z.re - 0.3).abs() < 1e-9 && g < 1e-9);
    }

    #[test]
    fn default_box_contains_segment() {
        let b = default_lambda0_box(&joukowski()).unwrap();
        assert!(b.x0 <= -2.0 && b.x1 >= 2.0 && b.y0 < 0.0 && b.y1 > 0.0);
        assert!(b.x1 < 3.0);
    }
}

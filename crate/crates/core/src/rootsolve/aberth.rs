//! Aberth-Ehrlich simultaneous iteration with Newton-polygon starting points.

use num_complex::Complex64;
use std::f64::consts::TAU;

const MAX_ITER: usize = 600;
const EPS: f64 = f64::EPSILON;

/// Value of `p(z) / p'(z)` plus the relative backward error, evaluated in
/// the reversed variable when `|z| > 1` to avoid overflow.
pub(crate) fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, f64) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let mut p = coeffs[n];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = coeffs[n].norm();
        let a = z.norm();
        for c in coeffs[..n].iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
            s = s * a + c.norm();
        }
        (p / dp, if s > 0.0 { p.norm() / s } else { 0.0 })
    } else {
        let y = z.inv();
        let a = y.norm();
        // rev(y) = sum c_i y^{n-i}
        let mut p = coeffs[0];
        let mut dp = Complex64::new(0.0, 0.0);
        let mut s = coeffs[0].norm();
        for c in coeffs[1..].iter() {
            dp = dp * y + p;
            p = p * y + c;
            s = s * a + c.norm();
        }
        let ratio = z / (n as f64 - y * dp / p);
        (ratio, if s > 0.0 { p.norm() / s } else { 0.0 })
    }
}

pub(crate) fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    newton_ratio(coeffs, z).1
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log|c_i|)`.
fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let logs: Vec<f64> = coeffs.iter().map(|c| if c.norm() > 0.0 { c.norm().ln() } else { f64::NEG_INFINITY }).collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b - a) as f64 * (logs[i] - logs[a]) - (i - a) as f64 * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let sigma = 0.7;
    let mut out = Vec::with_capacity(n);
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let radius = ((logs[i] - logs[j]) / m as f64).exp();
        for t in 0..m {
            let ang = TAU * t as f64 / m as f64 + TAU * i as f64 / n as f64 + sigma;
            out.push(Complex64::from_polar(radius, ang));
        }
    }
    out
}

/// Roots of a polynomial with nonzero leading and constant coefficients.
/// Returns the roots and whether every root met the stopping rule.
pub(crate) fn aberth(coeffs: &[Complex64]) -> (Vec<Complex64>, bool) {
    let n = coeffs.len() - 1;
    if n == 1 {
        return (vec![-coeffs[0] / coeffs[1]], true);
    }
    let mut z = initial_guesses(coeffs);
    let mut done = vec![false; n];
    for _ in 0..MAX_ITER {
        if done.iter().all(|&d| d) {
            break;
        }
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (ratio, berr) = newton_ratio(coeffs, z[i]);
            if berr <= 4.0 * EPS || !ratio.is_finite() {
                done[i] = true;
                continue;
            }
            let mut sum = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    sum += (z[i] - z[j]).inv();
                }
            }
            let corr = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if !corr.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= corr;
            if corr.norm() <= EPS * z[i].norm() {
                done[i] = true;
            }
        }
    }
    let converged = done.iter().all(|&d| d);
    (z, converged)
}

/// Newton steps on the original polynomial while the backward error keeps shrinking.
pub(crate) fn polish(coeffs: &[Complex64], root: Complex64) -> Complex64 {
    let mut best = root;
    let (mut ratio, mut berr) = newton_ratio(coeffs, root);
    for _ in 0..8 {
        if berr == 0.0 || !ratio.is_finite() {
            break;
        }
        let cand = best - ratio;
        let (r2, b2) = newton_ratio(coeffs, cand);
        if b2 < berr {
            best = cand;
            ratio = r2;
            berr = b2;
        } else {
            break;
        }
    }
    best
}

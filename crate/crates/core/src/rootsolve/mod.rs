//! Polynomial roots with residual certificates, and the root branches
//! `z_j(lambda)` and `lambda_j(z)` of a characteristic function.

mod aberth;

use num_complex::Complex64;
use std::f64::consts::TAU;
use thiserror::Error;

use crate::symbolkit::{CharFunction, FLOAT_ZERO_REL};

/// Residual bound above which a root list is marked low-confidence.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Relative distance under which two roots are considered clustered.
pub const CLUSTER_TOL: f64 = 1e-7;
/// Relative modulus difference treated as a tie when sorting.
const MODULUS_TIE: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial has degree 0")]
    Constant,
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("argument z must be nonzero")]
    ZeroArgument,
}

/// Roots sorted by modulus, ties by argument in `[0, 2pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootList {
    pub roots: Vec<Complex64>,
    /// Relative backward error `|P(z)| / sum |c_i| |z|^i` per root.
    pub residuals: Vec<f64>,
    pub low_confidence: bool,
    pub clustered: bool,
    /// Roots exactly at zero (trailing-zero coefficients), included in `roots`.
    pub at_origin: usize,
    /// Degree lost to negligible leading coefficients.
    pub at_infinity: usize,
}

impl RootList {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.roots.iter().map(|z| z.norm()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn arg_key(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Sorts by modulus; runs of moduli equal to relative `1e-10` are ordered by argument.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(arg_key(*a).total_cmp(&arg_key(*b))));
    let mut start = 0;
    while start < roots.len() {
        let base = roots[start].norm();
        let mut end = start + 1;
        while end < roots.len() && roots[end].norm() - base <= MODULUS_TIE * base.max(f64::MIN_POSITIVE) {
            end += 1;
        }
        roots[start..end].sort_by(|a, b| arg_key(*a).total_cmp(&arg_key(*b)));
        start = end;
    }
}

/// All roots of `sum coeffs[i] z^i`.
pub fn roots(coeffs: &[Complex64]) -> Result<RootList, RootError> {
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(RootError::NonFinite);
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(RootError::ZeroPolynomial);
    }
    let cutoff = FLOAT_ZERO_REL * scale;
    let hi = coeffs.iter().rposition(|c| c.norm() > cutoff).unwrap();
    let at_infinity = coeffs.len() - 1 - hi;
    if hi == 0 {
        return Err(RootError::Constant);
    }
    let lo = coeffs.iter().position(|c| c.norm() > cutoff).unwrap();
    let trimmed = &coeffs[lo..=hi];
    let mut found = Vec::with_capacity(hi);
    found.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), lo));
    let mut converged = true;
    if trimmed.len() > 1 {
        let (zs, ok) = aberth::aberth(trimmed);
        converged = ok;
        found.extend(zs.into_iter().map(|z| aberth::polish(trimmed, z)));
    }
    sort_roots(&mut found);
    let residuals: Vec<f64> = found
        .iter()
        .map(|&z| if z == Complex64::new(0.0, 0.0) { 0.0 } else { aberth::backward_error(trimmed, z) })
        .collect();
    let low_confidence = !converged || residuals.iter().any(|r| !(*r <= RESIDUAL_TOL));
    let mut clustered = false;
    for i in 0..found.len() {
        for j in i + 1..found.len() {
            let s = found[i].norm().max(found[j].norm()).max(f64::MIN_POSITIVE);
            if (found[i] - found[j]).norm() < CLUSTER_TOL * s {
                clustered = true;
            }
        }
    }
    Ok(RootList { roots: found, residuals, low_confidence, clustered, at_origin: lo, at_infinity })
}

/// Real-coefficient convenience wrapper.
pub fn roots_real(coeffs: &[f64]) -> Result<RootList, RootError> {
    let c: Vec<Complex64> = coeffs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    roots(&c)
}

/// Roots in `z` of `z^p f(z, lambda)`, indexed from the origin side.
///
/// `at_infinity > 0` signals that `f_q(lambda)` vanished (degenerate leading coefficient).
pub fn sorted_roots_z(f: &CharFunction, lambda: Complex64) -> Result<RootList, RootError> {
    roots(&f.z_poly(lambda))
}

/// The `k` roots in `lambda` of `f(z, .)`.
pub fn branches_lambda(f: &CharFunction, z: Complex64) -> Result<RootList, RootError> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(RootError::ZeroArgument);
    }
    if !z.is_finite() {
        return Err(RootError::NonFinite);
    }
    roots(&f.lambda_poly(z))
}

/// Optimal matching distance between two equally sized point sets, by
/// exhaustive assignment for small sets and greedy nearest neighbour beyond.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    if n <= 8 {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = f64::INFINITY;
        permute(&mut perm, 0, &mut |p| {
            let d = p.iter().enumerate().map(|(i, &j)| (a[i] - b[j]).norm()).fold(0.0, f64::max);
            best = best.min(d);
        });
        return best;
    }
    let mut used = vec![false; n];
    let mut worst: f64 = 0.0;
    for x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|u, v| u.1.total_cmp(&v.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn permute(p: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        visit(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, visit);
        p.swap(i, j);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn z_squared_minus_one() {
        let r = roots_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert!((r.roots[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((r.roots[1] - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(!r.low_confidence);
    }

    #[test]
    fn quadratic_formula() {
        let r = roots_real(&[1.0, -3.0, 1.0]).unwrap();
        let s5 = 5f64.sqrt();
        assert!((r.roots[0].re - (3.0 - s5) / 2.0).abs() < 1e-14);
        assert!((r.roots[1].re - (3.0 + s5) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn z_squared_plus_one_orders_by_argument() {
        let r = roots_real(&[1.0, 0.0, 1.0]).unwrap();
        assert!((r.roots[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((r.roots[1] - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn errors() {
        assert_eq!(roots_real(&[0.0, 0.0]), Err(RootError::ZeroPolynomial));
        assert_eq!(roots_real(&[3.0]), Err(RootError::Constant));
        assert_eq!(roots_real(&[3.0, 0.0]), Err(RootError::Constant));
        assert_eq!(roots_real(&[f64::NAN, 1.0]), Err(RootError::NonFinite));
    }

    #[test]
    fn origin_and_infinity_counts() {
        let r = roots_real(&[0.0, 0.0, 2.0, 1.0, 0.0]).unwrap();
        assert_eq!(r.at_origin, 2);
        assert_eq!(r.at_infinity, 1);
        assert_eq!(r.len(), 3);
        assert!((r.roots[2] - c(-2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn wilkinson_like_cluster_and_spread() {
        // (z-1)^3 (z+1e6)
        let coeffs = [-1e6, 3e6 - 1.0, 3.0 - 3e6, 1e6 - 3.0, 1.0];
        let r = roots_real(&coeffs).unwrap();
        assert!((r.roots[3] - c(-1e6, 0.0)).norm() < 1e-6 * 1e6);
        for z in &r.roots[..3] {
            assert!((z - c(1.0, 0.0)).norm() < 1e-4);
        }
        assert!(r.max_residual() < 1e-12);
    }

    #[test]
    fn high_degree_unit_roots() {
        let mut coeffs = vec![0.0; 41];
        coeffs[0] = -1.0;
        coeffs[40] = 1.0;
        let r = roots_real(&coeffs).unwrap();
        assert_eq!(r.len(), 40);
        for z in &r.roots {
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
        assert!(!r.low_confidence);
    }

    #[test]
    fn matching() {
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(1.0, 0.1), c(0.0, 0.0)];
        assert!((matching_distance(&a, &b) - 0.1).abs() < 1e-15);
    }
}

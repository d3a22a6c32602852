//! Elimination of the real parameter: with `z = x + iy` and real `alpha`,
//! `z^p f(z, alpha) = u(x, y, alpha) + i v(x, y, alpha)` and the net lies in
//! the zero set of `Res_alpha(u, v)`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::contour::{trace_contours, ContourSet};
use super::field::{net_value, node_field, ORIGIN_MASK_CELLS};
use super::GammaError;
use crate::grid::Rect;
use crate::symbolkit::coeff::rational_to_f64;
use crate::symbolkit::det::det_expansion;
use crate::symbolkit::{BiPoly, CharFunction};

/// Polynomials in `x, y` reuse [`BiPoly`] with keys `(x exponent, y exponent)`.
type XY = BiPoly<BigRational>;

pub const MAX_K: usize = 4;
pub const MAX_PQ: i32 = 8;

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitCurve {
    /// Primitive integer polynomial in `x, y` (keys `(x exponent, y exponent)`),
    /// with the powers of `y` and `x^2 + y^2` removed.
    #[serde(skip)]
    pub poly: BiPoly<BigRational>,
    /// Power of `y` divided out of the resultant.
    pub y_power: u32,
    /// Power of `x^2 + y^2` divided out of the resultant.
    pub rho_power: u32,
    pub degree: u32,
    pub terms: usize,
}

impl ImplicitCurve {
    /// Value of the reduced polynomial.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.poly
            .terms()
            .map(|(&(a, b), c)| rational_to_f64(c) * x.powi(a) * y.powi(b as i32))
            .sum()
    }

    /// Integer coefficients as `(x exponent, y exponent, coefficient)`, sorted by exponents.
    pub fn coefficients(&self) -> Vec<(u32, u32, BigInt)> {
        self.poly.terms().map(|(&(a, b), c)| (a as u32, b, c.to_integer())).collect()
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn binomial(n: u32, k: u32) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// Real and imaginary parts of `(x + iy)^m`.
fn power_parts(m: u32) -> (XY, XY) {
    let mut re = Vec::new();
    let mut im = Vec::new();
    for j in 0..=m {
        let c = binomial(m, j);
        let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
        let term = (((m - j) as i32, j), q(sign * c));
        if j % 2 == 0 {
            re.push(term);
        } else {
            im.push(term);
        }
    }
    (BiPoly::from_terms(re), BiPoly::from_terms(im))
}

pub fn gamma_implicit(f: &CharFunction) -> Result<ImplicitCurve, GammaError> {
    let exact = f.exact().ok_or_else(|| GammaError::InvalidInput("elimination needs an exact symbol".into()))?;
    let k = f.k();
    let (p, qd) = (f.p(), f.q());
    if k > MAX_K || p + qd > MAX_PQ {
        return Err(GammaError::Guard(format!("k = {k}, p + q = {} (limits {MAX_K}, {MAX_PQ})", p + qd)));
    }
    let parts: Vec<(XY, XY)> = (0..=(p + qd) as u32).map(power_parts).collect();
    // u_l, v_l: coefficients of alpha^l.
    let mut u = vec![XY::zero(); k + 1];
    let mut v = vec![XY::zero(); k + 1];
    for (&(m, l), c) in exact.terms() {
        let (re, im) = &parts[(m + p) as usize];
        let c = BiPoly::from_terms([((0, 0), c.clone())]);
        u[l as usize] = u[l as usize].add(&re.mul(&c));
        v[l as usize] = v[l as usize].add(&im.mul(&c));
    }
    // Sylvester matrix of two polynomials of nominal degree k in alpha.
    let n = 2 * k;
    let mut syl = vec![vec![XY::zero(); n]; n];
    for row in 0..k {
        for l in 0..=k {
            syl[row][row + k - l] = u[l].clone();
            syl[row + k][row + k - l] = v[l].clone();
        }
    }
    let res = det_expansion(&syl);
    if res.is_zero() {
        return Err(GammaError::ZeroResultant);
    }
    let y_power = res.terms().map(|(&(_, b), _)| b).min().unwrap_or(0);
    let mut poly = BiPoly::from_terms(res.terms().map(|(&(a, b), c)| ((a, b - y_power), c.clone())));
    let mut rho_power = 0;
    while let Some(quot) = divide_rho(&poly) {
        poly = quot;
        rho_power += 1;
    }
    let poly = primitive(&poly);
    let degree = poly.terms().map(|(&(a, b), _)| a as u32 + b).max().unwrap_or(0);
    let terms = poly.terms().count();
    Ok(ImplicitCurve { poly, y_power, rho_power, degree, terms })
}

/// Exact quotient by `x^2 + y^2`, if it divides.
fn divide_rho(poly: &XY) -> Option<XY> {
    if poly.terms().all(|(&(a, b), _)| a == 0 && b == 0) {
        return None;
    }
    let rho = BiPoly::from_terms([((2, 0), q(1)), ((0, 2), q(1))]);
    let mut rem = poly.clone();
    let mut quot = XY::zero();
    loop {
        // Highest power of y; reduce it with y^2 = rho - x^2.
        let Some((&(a, b), c)) = rem.terms().filter(|(k, _)| k.1 >= 2).max_by_key(|(k, _)| (k.1, k.0)) else { break };
        let t = BiPoly::from_terms([((a, b - 2), c.clone())]);
        quot = quot.add(&t);
        rem = rem.sub(&t.mul(&rho));
    }
    // What is left has degree < 2 in y; it must vanish.
    rem.is_zero().then_some(quot)
}

/// Integer coefficients with gcd 1 and a positive leading term.
fn primitive(poly: &XY) -> XY {
    let lcm = poly.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
    let ints: Vec<((i32, u32), BigInt)> =
        poly.terms().map(|(k, c)| (*k, (c * BigRational::from_integer(lcm.clone())).to_integer())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    let lead_neg = ints.iter().max_by_key(|(k, _)| (k.0 + k.1 as i32, k.1)).map(|(_, c)| c.is_negative()).unwrap_or(false);
    let g = if lead_neg { -g } else { g };
    BiPoly::from_terms(ints.into_iter().map(|(k, c)| (k, BigRational::from_integer(c / &g))))
}

fn opposite_signs(vals: &[Option<f64>]) -> bool {
    let (mut neg, mut pos) = (false, false);
    for v in vals.iter().flatten() {
        neg |= *v < 0.0;
        pos |= *v > 0.0;
    }
    neg && pos
}

/// Whether the net field changes sign within distance `h` of `(x, y)`.
fn net_crosses_near(f: &CharFunction, x: f64, y: f64, h: f64) -> bool {
    let at = |dx: f64, dy: f64| net_value(f, Complex64::new(x + dx, y + dy));
    opposite_signs(&[at(0.0, 0.0), at(h, 0.0), at(-h, 0.0), at(0.0, h), at(0.0, -h)])
}

/// Traces `g = 0` and keeps only components confirmed by the net field.
///
/// The resultant also vanishes where `u` and `v` share a non-real root
/// `alpha`; a component is kept when at least half of its vertices have a
/// sign change of the net field within one cell.
pub fn trace_implicit(curve: &ImplicitCurve, f: &CharFunction, bbox: Rect, res: usize) -> ContourSet {
    let cell = (bbox.width() / res as f64).max(bbox.height() / res as f64);
    let field = node_field(bbox, res, ORIGIN_MASK_CELLS * cell, |z| Some(curve.eval(z.re, z.im)));
    let mut set = trace_contours(&field, |x, y| Some(curve.eval(x, y)));
    set.components.retain(|c| {
        let hits = c.points.iter().filter(|&&(x, y)| net_crosses_near(f, x, y, cell)).count();
        2 * hits >= c.points.len()
    });
    set
}

/// Fraction of valid cells of a `res x res` lattice where the sign-change
/// indicators of the net field and of the filtered `g` disagree.
pub fn implicit_agreement(curve: &ImplicitCurve, f: &CharFunction, bbox: Rect, res: usize) -> f64 {
    let cell = (bbox.width() / res as f64).max(bbox.height() / res as f64);
    let mask = ORIGIN_MASK_CELLS * cell;
    let net = node_field(bbox, res, mask, |z| net_value(f, z));
    let g = node_field(bbox, res, mask, |z| Some(curve.eval(z.re, z.im)));
    let nx = net.nx();
    let (mut total, mut differ) = (0usize, 0usize);
    for iy in 0..res {
        for ix in 0..res {
            let corners = [(ix, iy), (ix + 1, iy), (ix, iy + 1), (ix + 1, iy + 1)];
            if corners.iter().any(|&(a, b)| !net.valid[b * nx + a] || !g.valid[b * nx + a]) {
                continue;
            }
            total += 1;
            let net_cell = opposite_signs(&corners.map(|(a, b)| Some(net.values[b * nx + a])));
            let (cx, cy) = ((net.xs[ix] + net.xs[ix + 1]) / 2.0, (net.ys[iy] + net.ys[iy + 1]) / 2.0);
            let g_cell = opposite_signs(&corners.map(|(a, b)| Some(g.values[b * nx + a])))
                && net_crosses_near(f, cx, cy, cell);
            if net_cell != g_cell {
                differ += 1;
            }
        }
    }
    if total == 0 {
        return 1.0;
    }
    differ as f64 / total as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolkit::{char_function, MatrixSymbol};

    fn scalar(blocks: &[(i32, i64)]) -> CharFunction {
        let b: Vec<(i32, Vec<Vec<i64>>)> = blocks.iter().map(|&(m, c)| (m, vec![vec![c]])).collect();
        char_function(&MatrixSymbol::from_integer_blocks(1, &b).unwrap()).unwrap()
    }

    #[test]
    fn power_parts_of_cube() {
        let (re, im) = power_parts(3);
        // (x+iy)^3 = x^3 - 3xy^2 + i(3x^2 y - y^3)
        assert_eq!(re, BiPoly::from_terms([((3, 0), q(1)), ((1, 2), q(-3))]));
        assert_eq!(im, BiPoly::from_terms([((2, 1), q(3)), ((0, 3), q(-1))]));
    }

    #[test]
    fn joukowski_gives_unit_circle() {
        // z + 1/z real: y (x^2 + y^2 - 1) = 0
        let f = scalar(&[(-1, 1), (1, 1)]);
        let g = gamma_implicit(&f).unwrap();
        assert_eq!(g.y_power, 1);
        assert_eq!(g.poly, BiPoly::from_terms([((2, 0), q(1)), ((0, 2), q(1)), ((0, 0), q(-1))]));
    }

    #[test]
    fn rho_division() {
        let rho = BiPoly::from_terms([((2, 0), q(1)), ((0, 2), q(1))]);
        let h = BiPoly::from_terms([((1, 0), q(3)), ((0, 1), q(-2)), ((0, 0), q(1))]);
        assert_eq!(divide_rho(&rho.mul(&rho).mul(&h)), Some(rho.mul(&h)));
        assert_eq!(divide_rho(&h), None);
    }

    #[test]
    fn float_symbol_rejected() {
        let s = MatrixSymbol::from_integer_blocks(1, &[(-1, vec![vec![1]]), (1, vec![vec![1]])]).unwrap().to_float();
        assert!(gamma_implicit(&char_function(&s).unwrap()).is_err());
    }
}

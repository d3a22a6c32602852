use num_complex::Complex64;
use num_rational::BigRational;

use super::bivariate::BiPoly;
use super::coeff::{rational_to_f64, Coeff};
use super::det::det_expansion;
use super::laurent::LaurentPoly;
use super::symbol::{MatrixSymbol, SymbolError};

/// Largest block size for which the characteristic function is expanded.
pub const MAX_EXPANSION_K: usize = 12;

/// `f(z, lambda) = det(B(z) - lambda I)`.
///
/// Holds the exact expansion when the symbol is exact, always a float copy,
/// and a dense table `table[m + p][l]` of the coefficient of `z^m lambda^l`.
#[derive(Clone, Debug)]
pub struct CharFunction {
    k: usize,
    p: i32,
    q: i32,
    exact: Option<BiPoly<BigRational>>,
    float: BiPoly<f64>,
    table: Vec<Vec<f64>>,
    scale: f64,
}

pub fn char_function(symbol: &MatrixSymbol) -> Result<CharFunction, SymbolError> {
    let k = symbol.k();
    if k > MAX_EXPANSION_K {
        return Err(SymbolError::TooLarge(format!(
            "characteristic function expansion supports k <= {MAX_EXPANSION_K}, got {k}"
        )));
    }
    match symbol.exact_entries() {
        Some(entries) => Ok(CharFunction::from_exact(k, shifted_det(&entries))),
        None => Ok(CharFunction::from_float(k, shifted_det(&symbol.float_entries()).trim_relative())),
    }
}

fn shifted_det<C: Coeff>(entries: &[Vec<LaurentPoly<C>>]) -> BiPoly<C> {
    let k = entries.len();
    let lambda = BiPoly::<C>::lambda();
    let m: Vec<Vec<BiPoly<C>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let e = BiPoly::from_z(&entries[i][j]);
                    if i == j {
                        e.sub(&lambda)
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    det_expansion(&m)
}

impl CharFunction {
    pub fn from_exact(k: usize, exact: BiPoly<BigRational>) -> Self {
        let float = exact.map(rational_to_f64);
        let mut out = Self::from_float(k, float);
        out.exact = Some(exact);
        out
    }

    pub fn from_float(k: usize, float: BiPoly<f64>) -> Self {
        let (lo, hi) = float.z_range().unwrap_or((0, 0));
        let p = -lo.min(0);
        let q = hi.max(0);
        let mut table = vec![vec![0.0; k + 1]; (p + q + 1) as usize];
        for (&(m, l), c) in float.terms() {
            table[(m + p) as usize][l as usize] = *c;
        }
        let scale = float.scale();
        CharFunction { k, p, q, exact: None, float, table, scale }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Order of the pole at the origin: `-ord_z f`.
    pub fn p(&self) -> i32 {
        self.p
    }

    /// `deg_z f`.
    pub fn q(&self) -> i32 {
        self.q
    }

    pub fn exact(&self) -> Option<&BiPoly<BigRational>> {
        self.exact.as_ref()
    }

    pub fn float(&self) -> &BiPoly<f64> {
        &self.float
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `g_l(z)`, the coefficient of `lambda^l`.
    pub fn g(&self, l: u32) -> LaurentPoly<f64> {
        self.float.lambda_coeff(l)
    }

    /// `f_m(lambda)`, the coefficient of `z^m`, as ascending lambda coefficients.
    pub fn f_m(&self, m: i32) -> Vec<f64> {
        if m < -self.p || m > self.q {
            return vec![0.0; self.k + 1];
        }
        self.table[(m + self.p) as usize].clone()
    }

    pub fn eval(&self, z: Complex64, lambda: Complex64) -> Complex64 {
        let zp = z.powi(-self.p);
        self.z_poly(lambda).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c) * zp
    }

    /// Ascending coefficients in `z` of the polynomial `z^p f(z, lambda)`.
    pub fn z_poly(&self, lambda: Complex64) -> Vec<Complex64> {
        self.table.iter().map(|row| horner_real(row, lambda)).collect()
    }

    /// Scale per `z` coefficient of `z^p f(z, lambda)`, used for relative zero tests.
    pub fn z_poly_scale(&self, lambda: Complex64) -> f64 {
        let a = lambda.norm();
        self.table
            .iter()
            .map(|row| row.iter().rev().fold(0.0, |acc, c| acc * a + c.abs()))
            .fold(0.0, f64::max)
    }

    /// Ascending coefficients in `lambda` of `f(z, lambda)`.
    pub fn lambda_poly(&self, z: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.k + 1];
        let mut zm = z.powi(-self.p);
        for row in &self.table {
            for (l, c) in row.iter().enumerate() {
                if *c != 0.0 {
                    out[l] += zm * *c;
                }
            }
            zm *= z;
        }
        out
    }
}

fn horner_real(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c)
}

/// `det B(z)`, exact when the symbol is.
#[derive(Clone, Debug)]
pub struct ScalarSymbol {
    pub exact: Option<LaurentPoly<BigRational>>,
    pub float: LaurentPoly<f64>,
}

impl ScalarSymbol {
    /// True when `det B(z)` vanishes identically.
    pub fn is_degenerate(&self) -> bool {
        self.float.is_zero()
    }
}

pub fn scalar_symbol(symbol: &MatrixSymbol) -> Result<ScalarSymbol, SymbolError> {
    let f = char_function(symbol)?;
    Ok(ScalarSymbol { exact: f.exact().map(|e| e.lambda_coeff(0)), float: f.g(0) })
}

/// Order and degree of `g_l` plus whether they match the generic formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrdDeg {
    pub ord: i32,
    pub deg: i32,
    pub generic_ord: i32,
    pub generic_deg: i32,
}

impl OrdDeg {
    pub fn is_generic(&self) -> bool {
        self.ord == self.generic_ord && self.deg == self.generic_deg
    }
}

pub fn coeff_ord_deg(f: &CharFunction, l: u32) -> Result<OrdDeg, SymbolError> {
    let g = f.g(l);
    let (Some(ord), Some(deg)) = (g.ord(), g.deg()) else {
        return Err(SymbolError::Layout(format!("g_{l} is the zero polynomial")));
    };
    let k = f.k() as i64;
    let rest = k - l as i64;
    let generic_ord = div_ceil(-(f.p() as i64) * rest, k) as i32;
    let generic_deg = (f.q() as i64 * rest).div_euclid(k) as i32;
    Ok(OrdDeg { ord, deg, generic_ord, generic_deg })
}

pub fn is_generic(f: &CharFunction) -> bool {
    (0..=f.k() as u32).all(|l| coeff_ord_deg(f, l).map(|od| od.is_generic()).unwrap_or(false))
}

fn div_ceil(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn b1() -> MatrixSymbol {
        MatrixSymbol::from_integer_blocks(
            2,
            &[(-1, vec![vec![-2, 0], vec![-4, 1]]), (0, vec![vec![8, -5], vec![-2, 5]]), (1, vec![vec![0, -6], vec![0, 0]])],
        )
        .unwrap()
    }

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn b1_matches_printed_f() {
        let f = char_function(&b1()).unwrap();
        let expected = BiPoly::from_terms([
            ((0, 0), rat(6)),
            ((-2, 0), rat(-2)),
            ((-1, 0), rat(-22)),
            ((1, 0), rat(-12)),
            ((0, 1), rat(-13)),
            ((-1, 1), rat(1)),
            ((0, 2), rat(1)),
        ]);
        assert_eq!(f.exact().unwrap(), &expected);
        assert_eq!((f.p(), f.q()), (2, 1));
    }

    #[test]
    fn b1_ord_deg() {
        let f = char_function(&b1()).unwrap();
        let g0 = coeff_ord_deg(&f, 0).unwrap();
        assert_eq!((g0.ord, g0.deg), (-2, 1));
        assert!(g0.is_generic());
        let g1 = coeff_ord_deg(&f, 1).unwrap();
        assert_eq!((g1.ord, g1.deg), (-1, 0));
        assert!(g1.is_generic());
        let g2 = coeff_ord_deg(&f, 2).unwrap();
        assert_eq!((g2.ord, g2.deg), (0, 0));
        assert!(is_generic(&f));
    }

    #[test]
    fn diagonal_example() {
        let s = MatrixSymbol::from_integer_blocks(2, &[(-1, vec![vec![0, 0], vec![0, 1]]), (1, vec![vec![1, 0], vec![0, 0]])])
            .unwrap();
        let f = char_function(&s).unwrap();
        let expected = BiPoly::from_terms([((0, 0), rat(1)), ((1, 1), rat(-1)), ((-1, 1), rat(-1)), ((0, 2), rat(1))]);
        assert_eq!(f.exact().unwrap(), &expected);
        let b = scalar_symbol(&s).unwrap();
        assert_eq!(b.exact.unwrap(), LaurentPoly::constant(rat(1)));
    }

    #[test]
    fn scalar_case_is_b_minus_lambda() {
        let s = MatrixSymbol::from_integer_blocks(1, &[(-2, vec![vec![3]]), (0, vec![vec![1]]), (1, vec![vec![-4]])]).unwrap();
        let f = char_function(&s).unwrap();
        let expected = BiPoly::from_terms([((-2, 0), rat(3)), ((0, 0), rat(1)), ((1, 0), rat(-4)), ((0, 1), rat(-1))]);
        assert_eq!(f.exact().unwrap(), &expected);
        assert_eq!((f.p(), f.q()), (2, 1));
    }

    #[test]
    fn views_and_eval_agree() {
        let f = char_function(&b1()).unwrap();
        let z = Complex64::new(0.3, -1.2);
        let lam = Complex64::new(2.0, 0.5);
        let direct = f.float().eval(z, lam);
        assert!((f.eval(z, lam) - direct).norm() < 1e-12 * direct.norm().max(1.0));
        let lp = f.lambda_poly(z);
        let via_lambda: Complex64 = lp.iter().enumerate().map(|(l, c)| c * lam.powu(l as u32)).sum();
        assert!((via_lambda - direct).norm() < 1e-12 * direct.norm().max(1.0));
        assert_eq!(f.f_m(-1), vec![-22.0, 1.0, 0.0]);
        assert_eq!(f.f_m(0), vec![6.0, -13.0, 1.0]);
    }

    #[test]
    fn float_symbol_expands() {
        let f_exact = char_function(&b1()).unwrap();
        let f_float = char_function(&b1().to_float()).unwrap();
        assert!(f_float.exact().is_none());
        assert_eq!(f_float.float(), f_exact.float());
    }
}

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::coeff::{Coeff, FLOAT_ZERO_REL};
use super::laurent::LaurentPoly;

/// Sparse bivariate polynomial, Laurent in `z` and polynomial in `lambda`.
///
/// Keys are `(z exponent, lambda exponent)`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BiPoly<C> {
    terms: BTreeMap<(i32, u32), C>,
}

impl<C: Coeff> Default for BiPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i32, u32), C)>) -> Self {
        let mut out = Self::zero();
        for (key, c) in terms {
            out.add_term(key, &c);
        }
        out
    }

    /// Embeds a Laurent polynomial in `z` (lambda exponent 0).
    pub fn from_z(poly: &LaurentPoly<C>) -> Self {
        Self::from_terms(poly.terms().map(|(m, c)| ((m, 0), c.clone())))
    }

    pub fn lambda() -> Self {
        Self::from_terms([((0, 1), C::one())])
    }

    fn add_term(&mut self, key: (i32, u32), c: &C) {
        if c.is_zero_value() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                let sum = existing.add(c);
                if sum.is_zero_value() {
                    self.terms.remove(&key);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, u32), &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, z_exp: i32, l_exp: u32) -> Option<&C> {
        self.terms.get(&(z_exp, l_exp))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (key, c) in &other.terms {
            out.add_term(*key, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((za, la), a) in &self.terms {
            for ((zb, lb), b) in &other.terms {
                out.add_term((za + zb, la + lb), &a.mul(b));
            }
        }
        out
    }

    pub fn eval(&self, z: Complex64, lambda: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|((m, l), c)| c.as_c64() * z.powi(*m) * lambda.powu(*l))
            .sum()
    }

    pub fn scale(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Drops coefficients at or below `FLOAT_ZERO_REL` times the largest magnitude.
    pub fn trim_relative(&self) -> Self {
        let cutoff = FLOAT_ZERO_REL * self.scale();
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.magnitude() > cutoff)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        BiPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    /// Support points `(z exponent, lambda exponent)`.
    pub fn support(&self) -> Vec<(i32, u32)> {
        self.terms.keys().copied().collect()
    }

    pub fn z_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|k| k.0).min()?;
        let hi = self.terms.keys().map(|k| k.0).max()?;
        Some((lo, hi))
    }

    pub fn lambda_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Coefficient of `lambda^l` as a Laurent polynomial in `z`.
    pub fn lambda_coeff(&self, l: u32) -> LaurentPoly<C> {
        self.z_slice(|key| key.1 == l, |key| key.0)
    }

    /// Coefficient of `z^m` as a polynomial in `lambda`.
    pub fn z_coeff(&self, m: i32) -> LaurentPoly<C> {
        self.z_slice(|key| key.0 == m, |key| key.1 as i32)
    }

    fn z_slice(&self, keep: impl Fn(&(i32, u32)) -> bool, exponent: impl Fn(&(i32, u32)) -> i32) -> LaurentPoly<C> {
        let picked: Vec<(i32, C)> = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, c)| (exponent(k), c.clone()))
            .collect();
        let Some(lo) = picked.iter().map(|t| t.0).min() else {
            return LaurentPoly::zero();
        };
        let hi = picked.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![C::zero(); (hi - lo + 1) as usize];
        for (e, c) in picked {
            coeffs[(e - lo) as usize] = c;
        }
        LaurentPoly::from_coeffs(lo, coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_i64(v)
    }

    #[test]
    fn views_slice_the_same_terms() {
        // 6 - 2 z^-2 + lambda z^-1 + lambda^2
        let f = BiPoly::from_terms([((0, 0), q(6)), ((-2, 0), q(-2)), ((-1, 1), q(1)), ((0, 2), q(1))]);
        assert_eq!(f.lambda_coeff(0), LaurentPoly::from_coeffs(-2, vec![q(-2), q(0), q(6)]));
        assert_eq!(f.lambda_coeff(1), LaurentPoly::monomial(q(1), -1));
        assert_eq!(f.z_coeff(0), LaurentPoly::from_coeffs(0, vec![q(6), q(0), q(1)]));
        assert_eq!(f.z_range(), Some((-2, 0)));
        assert_eq!(f.lambda_degree(), Some(2));
    }

    #[test]
    fn cancellation_removes_terms() {
        let a = BiPoly::from_terms([((1, 1), q(3))]);
        assert!(a.sub(&a).is_zero());
        let x = BiPoly::from_terms([((1, 0), q(1)), ((0, 1), q(1))]);
        let y = BiPoly::from_terms([((1, 0), q(1)), ((0, 1), q(-1))]);
        // (z + l)(z - l) = z^2 - l^2
        assert_eq!(x.mul(&y), BiPoly::from_terms([((2, 0), q(1)), ((0, 2), q(-1))]));
    }
}

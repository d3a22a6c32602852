use num_complex::Complex64;

use super::coeff::{AsComplex, Coeff, FLOAT_ZERO_REL};

/// A Laurent polynomial `sum_m c_m z^m` stored densely from its order to its degree.
///
/// The zero polynomial has no coefficients; its order and degree are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<C> {
    ord: i32,
    coeffs: Vec<C>,
}

impl<C: AsComplex + Clone> LaurentPoly<C> {
    /// Builds a polynomial from coefficients starting at exponent `ord`, then normalizes.
    pub fn from_coeffs(ord: i32, coeffs: Vec<C>) -> Self {
        let mut p = LaurentPoly { ord, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        LaurentPoly { ord: 0, coeffs: Vec::new() }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero_value()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero_value()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.ord += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.ord = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn ord(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.ord)
    }

    pub fn deg(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.ord + self.coeffs.len() as i32 - 1)
    }

    /// Coefficient of `z^m`, `None` when it is structurally zero.
    pub fn coeff(&self, m: i32) -> Option<&C> {
        let idx = m - self.ord;
        if idx < 0 {
            return None;
        }
        self.coeffs.get(idx as usize)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_value())
            .map(move |(i, c)| (self.ord + i as i32, c))
    }

    /// Evaluates at a complex point; `z` must be nonzero when the order is negative.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.as_c64();
        }
        if self.ord != 0 && !self.coeffs.is_empty() {
            acc *= z.powi(self.ord);
        }
        acc
    }

    pub fn map<D: AsComplex + Clone>(&self, f: impl Fn(&C) -> D) -> LaurentPoly<D> {
        LaurentPoly::from_coeffs(self.ord, self.coeffs.iter().map(f).collect())
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.as_c64().norm()).fold(0.0, f64::max)
    }
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn constant(c: C) -> Self {
        Self::from_coeffs(0, vec![c])
    }

    pub fn monomial(c: C, m: i32) -> Self {
        Self::from_coeffs(m, vec![c])
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.ord.min(other.ord);
        let hi = self.deg().unwrap().max(other.deg().unwrap());
        let coeffs = (lo..=hi)
            .map(|m| match (self.coeff(m), other.coeff(m)) {
                (Some(a), Some(b)) => a.add(b),
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => C::zero(),
            })
            .collect();
        Self::from_coeffs(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { ord: self.ord, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero_value() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_coeffs(self.ord + other.ord, out)
    }

    pub fn scale_by(&self, c: &C) -> Self {
        Self::from_coeffs(self.ord, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// Drops coefficients below `FLOAT_ZERO_REL` times the largest magnitude.
    pub fn trim_relative(&self) -> Self {
        let cutoff = FLOAT_ZERO_REL * self.scale();
        Self::from_coeffs(
            self.ord,
            self.coeffs
                .iter()
                .map(|c| if c.magnitude() <= cutoff { C::zero() } else { c.clone() })
                .collect(),
        )
    }
}

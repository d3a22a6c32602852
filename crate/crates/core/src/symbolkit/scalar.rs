use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use super::coeff::{rational_to_f64, AsComplex};

/// Largest decimal exponent accepted in a literal such as `1e300`.
const MAX_DECIMAL_EXPONENT: i64 = 400;
/// Largest number of digits accepted in a literal.
const MAX_LITERAL_DIGITS: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("mixed exact/float arithmetic requires an explicit conversion")]
    MixedMode,
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid number literal {0:?}")]
    InvalidLiteral(String),
    #[error("complex literal {0:?} is not a real number")]
    NonReal(String),
    #[error("number literal {0:?} is out of the supported range")]
    OutOfRange(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

/// A real matrix entry: an exact rational or a double.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn integer(v: i64) -> Self {
        Scalar::Exact(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Scalar::Exact(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Float(_) => Mode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => rational_to_f64(r),
            Scalar::Float(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(v) => *v == 0.0,
        }
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// Explicit conversion to float mode.
    pub fn to_float(&self) -> Scalar {
        Scalar::Float(self.to_f64())
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a + b)),
            _ => Err(ScalarError::MixedMode),
        }
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a - b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a - b)),
            _ => Err(ScalarError::MixedMode),
        }
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a * b)),
            _ => Err(ScalarError::MixedMode),
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        if other.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a / b)),
            (Scalar::Float(a), Scalar::Float(b)) => Ok(Scalar::Float(a / b)),
            _ => Err(ScalarError::MixedMode),
        }
    }

    /// Parses `"-3"`, `"2.5"`, `"1e-3"`, `"-7/4"` into an exact rational.
    pub fn parse_literal(text: &str) -> Result<Scalar, ScalarError> {
        parse_exact(text.trim()).map(Scalar::Exact)
    }
}

impl AsComplex for Scalar {
    fn as_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse_literal(s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Float(v) => write!(f, "{v:?}"),
        }
    }
}

fn looks_complex(text: &str) -> bool {
    let t = text.trim_end();
    (t.ends_with('i') || t.ends_with('j') || t.ends_with('I') || t.ends_with('J'))
        && t.chars().any(|c| c.is_ascii_digit())
}

fn parse_exact(text: &str) -> Result<BigRational, ScalarError> {
    if text.is_empty() {
        return Err(ScalarError::InvalidLiteral(text.to_string()));
    }
    if text.len() > MAX_LITERAL_DIGITS {
        return Err(ScalarError::OutOfRange(text.chars().take(32).collect()));
    }
    if looks_complex(text) {
        return Err(ScalarError::NonReal(text.to_string()));
    }
    if let Some((num, den)) = text.split_once('/') {
        let n = parse_decimal(num.trim())?;
        let d = parse_decimal(den.trim())?;
        if d.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        return Ok(n / d);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Result<BigRational, ScalarError> {
    let invalid = || ScalarError::InvalidLiteral(text.to_string());
    let (negative, body) = match text.as_bytes().first() {
        Some(b'-') => (true, &text[1..]),
        Some(b'+') => (false, &text[1..]),
        _ => (false, text),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let exp_text = &body[pos + 1..];
            let exp: i64 = exp_text.parse().map_err(|_| invalid())?;
            (&body[..pos], exp)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((a, b)) => (a, b),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(invalid());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(invalid());
    }
    let scale = exponent - frac_part.len() as i64;
    if exponent.abs() > MAX_DECIMAL_EXPONENT || scale.abs() > MAX_DECIMAL_EXPONENT + MAX_LITERAL_DIGITS as i64 {
        return Err(ScalarError::OutOfRange(text.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0".to_string() } else { digits };
    let mut value = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(invalid)?;
    if negative {
        value = -value;
    }
    let ten = BigInt::from(10);
    let result = if scale >= 0 {
        BigRational::from_integer(value * ten.pow(scale as u32))
    } else {
        BigRational::new(value, ten.pow((-scale) as u32))
    };
    Ok(result)
}

/// Renders an exact rational for display; integers print without a denominator.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else if r.is_negative() {
        format!("-{}/{}", r.numer().abs(), r.denom())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d).unwrap()
    }

    #[test]
    fn parses_literals_exactly() {
        assert_eq!(Scalar::parse_literal("-3").unwrap(), Scalar::integer(-3));
        assert_eq!(Scalar::parse_literal("2.5").unwrap(), q(5, 2));
        assert_eq!(Scalar::parse_literal("1e-3").unwrap(), q(1, 1000));
        assert_eq!(Scalar::parse_literal("-7/4").unwrap(), q(-7, 4));
        assert_eq!(Scalar::parse_literal("0.1/3").unwrap(), q(1, 30));
        assert_eq!(Scalar::parse_literal(".5").unwrap(), q(1, 2));
        assert_eq!(Scalar::parse_literal("12.5E2").unwrap(), Scalar::integer(1250));
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(matches!(Scalar::parse_literal(""), Err(ScalarError::InvalidLiteral(_))));
        assert!(matches!(Scalar::parse_literal("abc"), Err(ScalarError::InvalidLiteral(_))));
        assert!(matches!(Scalar::parse_literal("1/0"), Err(ScalarError::DivisionByZero)));
        assert!(matches!(Scalar::parse_literal("1+2i"), Err(ScalarError::NonReal(_))));
        assert!(matches!(Scalar::parse_literal("1e999999"), Err(ScalarError::OutOfRange(_))));
        assert!(matches!(Scalar::parse_literal("."), Err(ScalarError::InvalidLiteral(_))));
        assert!(matches!(Scalar::parse_literal("--1"), Err(ScalarError::InvalidLiteral(_))));
    }

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = q(1, 3);
        let b = q(1, 6);
        assert_eq!(a.checked_add(&b).unwrap(), q(1, 2));
        assert_eq!(a.checked_sub(&b).unwrap(), q(1, 6));
        assert_eq!(a.checked_mul(&b).unwrap(), q(1, 18));
        assert_eq!(a.checked_div(&b).unwrap(), Scalar::integer(2));
        assert_eq!(a.checked_div(&Scalar::integer(0)), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn mixed_mode_is_rejected() {
        let a = Scalar::integer(1);
        let b = Scalar::Float(1.0);
        assert_eq!(a.checked_add(&b), Err(ScalarError::MixedMode));
        assert_eq!(a.checked_mul(&b), Err(ScalarError::MixedMode));
        assert_eq!(a.to_float().checked_add(&b).unwrap(), Scalar::Float(2.0));
    }

    #[test]
    fn display_round_trips() {
        for text in ["-3", "5/2", "-7/4"] {
            let s = Scalar::parse_literal(text).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(Scalar::parse_literal(&s.to_string()).unwrap(), s);
        }
    }
}

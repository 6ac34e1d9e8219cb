//! Exact rational numbers and the approximation parameter.
//!
//! Every parameter value, profit and breakpoint in this crate is a
//! [`Rational`]; floating point only appears when rendering for plots.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision fraction kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsilonError {
    #[error("epsilon must be written as `num/den` with integer parts, got `{0}`")]
    Format(String),
    #[error("epsilon must lie strictly between 0 and 1, got {num}/{den}")]
    OutOfRange { num: u64, den: u64 },
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Largest integer not exceeding `value`.
pub fn floor_int(value: &Rational) -> BigInt {
    value.numer().div_floor(value.denom())
}

/// Smallest integer not below `value`.
pub fn ceil_int(value: &Rational) -> BigInt {
    value.numer().div_ceil(value.denom())
}

pub fn midpoint(lo: &Rational, hi: &Rational) -> Rational {
    (lo + hi) / int(2)
}

/// Parses `a`, `a/b`, or a finite decimal such as `-1.25`, exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let invalid = || ParseRationalError::Invalid(text.to_string());
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_integer(num).ok_or_else(invalid)?;
        let den = parse_integer(den).ok_or_else(invalid)?;
        if den.is_zero() {
            return Err(ParseRationalError::ZeroDenominator(text.to_string()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(invalid());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if whole.len() - whole_digits.len() > 1 {
            return Err(invalid());
        }
        let whole_value = if whole_digits.is_empty() {
            BigInt::zero()
        } else {
            parse_integer(whole_digits).ok_or_else(invalid)?
        };
        if whole_value.is_negative() {
            return Err(invalid());
        }
        let frac_value = BigInt::from_str(frac).map_err(|_| invalid())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = Rational::new(whole_value * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    parse_integer(text).map(Rational::from_integer).ok_or_else(invalid)
}

fn parse_integer(text: &str) -> Option<BigInt> {
    let text = text.trim();
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(text).ok()
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Decimal rendering with `digits` significant digits, trailing zeros
/// trimmed (similar to C's `%g`).
pub fn format_significant(value: &Rational, digits: usize) -> String {
    let x = to_f64(value);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let exponent = x.abs().log10().floor() as i32;
    if exponent < -5 || exponent >= digits as i32 {
        let s = format!("{:.*e}", digits - 1, x);
        let (mantissa, exp) = s.split_once('e').unwrap_or((&s, "0"));
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Approximation parameter in (0, 1), stored as a reduced fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self, EpsilonError> {
        if num == 0 || den == 0 || num >= den {
            return Err(EpsilonError::OutOfRange { num, den });
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// `1 - ε`.
    pub fn complement(&self) -> Rational {
        Rational::one() - self.value()
    }

    pub fn halved(&self) -> Self {
        // den < 2^63 in every realistic use; doubling can only fail beyond that.
        Self::new(self.num, self.den.checked_mul(2).expect("epsilon denominator overflow"))
            .expect("halving keeps epsilon inside (0, 1)")
    }

    /// `⌊2n/ε⌋`, the largest scaled profit any feasible solution can reach.
    pub fn scaled_profit_cap(&self, n: usize) -> u64 {
        (2 * n as u128 * self.den as u128 / self.num as u128) as u64
    }
}

impl FromStr for Epsilon {
    type Err = EpsilonError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let format_err = || EpsilonError::Format(text.to_string());
        let (num, den) = text.trim().split_once('/').ok_or_else(format_err)?;
        let parse = |part: &str| -> Result<u64, EpsilonError> {
            let part = part.trim();
            if part.is_empty() || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(format_err());
            }
            part.parse().map_err(|_| format_err())
        };
        Self::new(parse(num)?, parse(den)?)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

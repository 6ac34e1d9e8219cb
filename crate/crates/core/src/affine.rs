use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

/// `intercept + λ·slope` over the parameter λ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineFunction {
    pub intercept: Rational,
    pub slope: Rational,
}

impl AffineFunction {
    pub fn new(intercept: Rational, slope: Rational) -> Self {
        Self { intercept, slope }
    }

    pub fn from_ints(intercept: i64, slope: i64) -> Self {
        Self::new(crate::rational::int(intercept), crate::rational::int(slope))
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.intercept.is_zero() && self.slope.is_zero()
    }

    pub fn eval(&self, lambda: &Rational) -> Rational {
        &self.intercept + lambda * &self.slope
    }

    /// Parameter value where the two lines meet, absent for parallel lines.
    pub fn intersect(&self, other: &AffineFunction) -> Option<Rational> {
        let slope_gap = &self.slope - &other.slope;
        if slope_gap.is_zero() {
            return None;
        }
        Some((&other.intercept - &self.intercept) / slope_gap)
    }

    /// The root of the line, if it is not constant.
    pub fn root(&self) -> Option<Rational> {
        if self.slope.is_zero() {
            None
        } else {
            Some(-&self.intercept / &self.slope)
        }
    }
}

impl std::ops::Add<&AffineFunction> for &AffineFunction {
    type Output = AffineFunction;

    fn add(self, rhs: &AffineFunction) -> AffineFunction {
        AffineFunction::new(&self.intercept + &rhs.intercept, &self.slope + &rhs.slope)
    }
}

impl fmt::Display for AffineFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.slope.is_negative() {
            write!(f, "{} - {}λ", self.intercept, -&self.slope)
        } else {
            write!(f, "{} + {}λ", self.intercept, self.slope)
        }
    }
}

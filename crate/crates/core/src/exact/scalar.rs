//! Ring interfaces shared by every coefficient type.

use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Coefficients of differential forms. Multiplication need not commute.
pub trait Coeff: Clone + Debug + PartialEq + Send + Sync + 'static {
    /// The commutative scalar ring the coefficient is a module over.
    type Scalar: Scalar;

    fn zero_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn mul_scalar(&self, s: &Self::Scalar) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// Partial derivative in ambient coordinate `var`.
    fn partial(&self, var: usize) -> Self;
    /// Embeds a scalar.
    fn from_scalar(s: Self::Scalar) -> Self;
    /// Text used in reports.
    fn render(&self) -> String;
}

/// Commutative scalar rings: rationals, rational functions and jets.
pub trait Scalar: Coeff<Scalar = Self> {
    fn one_elem() -> Self;
    fn from_rational(r: Rational) -> Self;
    fn try_inv(&self) -> Result<Self>;
    /// Value when the scalar is a known constant.
    fn constant_value(&self) -> Option<Rational>;
}

impl Coeff for Rational {
    type Scalar = Rational;

    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn mul_scalar(&self, s: &Self) -> Self {
        self * s
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn partial(&self, _var: usize) -> Self {
        Zero::zero()
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn render(&self) -> String {
        super::rat_to_string(self)
    }
}

impl Scalar for Rational {
    fn one_elem() -> Self {
        One::one()
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn try_inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }
    fn constant_value(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

/// Division helper for scalar rings.
pub fn div<S: Scalar>(a: &S, b: &S) -> Result<S> {
    Ok(a.times(&b.try_inv()?))
}

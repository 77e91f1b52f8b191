//! Exact scalar tower: big rationals, sparse polynomials, rational functions,
//! truncated Taylor jets and exact linear algebra.

pub mod jet;
pub mod linalg;
pub mod poly;
pub mod ratfn;
pub mod scalar;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use jet::Jet;
pub use linalg::{LinearFamily, Matrix};
pub use poly::{Monomial, Poly};
pub use ratfn::RatFn;
pub use scalar::{Coeff, Scalar};

/// Arbitrary-precision rational, always stored in lowest terms.
pub type Rational = num_rational::BigRational;

/// Number of ambient coordinates `x0..x3, y0..y3`.
pub const NVARS: usize = 8;

pub const VAR_NAMES: [&str; NVARS] = ["x0", "x1", "x2", "x3", "y0", "y1", "y2", "y3"];

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q` or `p` when the denominator is one.
pub fn rat_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Exact rational cube root, if one exists.
pub fn rational_cbrt(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return Some(Rational::zero());
    }
    let n = integer_cbrt(&r.numer().abs())?;
    let d = integer_cbrt(r.denom())?;
    let root = Rational::new(n, d);
    Some(if r.is_negative() { -root } else { root })
}

/// Exact rational square root of a non-negative rational, if one exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &n * &n == *r.numer() && &d * &d == *r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

fn integer_cbrt(n: &BigInt) -> Option<BigInt> {
    let c = n.cbrt();
    if &c * &c * &c == *n {
        Some(c)
    } else {
        None
    }
}

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(rat_to_string).collect();
    format!("({})", parts.join(", "))
}

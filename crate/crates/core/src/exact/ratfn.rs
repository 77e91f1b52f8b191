//! Rational functions in the eight ambient coordinates.
//!
//! The denominator is kept as a product of monic polynomial factors with
//! multiplicities. Sums use the least common multiple of the factor lists, so
//! denominators such as `(|x|^2 + |y|^2)^3 |x|^2` never get expanded unless
//! asked for.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{format_point, Poly, Rational, NVARS};
use crate::error::{Error, Result};

#[derive(Clone, Default)]
pub struct RatFn {
    num: Poly,
    /// Monic, non-constant, pairwise distinct factors with positive exponents.
    den: Vec<(Poly, u32)>,
}

impl RatFn {
    pub fn zero() -> Self {
        RatFn::default()
    }

    pub fn one() -> Self {
        RatFn::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFn::from_poly(Poly::constant(c))
    }

    pub fn var(i: usize) -> Self {
        RatFn::from_poly(Poly::var(i))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn {
            num: p,
            den: Vec::new(),
        }
    }

    /// `num / den`, failing when `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&RatFn::from_poly(num) * &RatFn::from_poly(den).inv()?)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    /// Expanded denominator polynomial.
    pub fn den(&self) -> Poly {
        let mut out = Poly::one();
        for (f, e) in &self.den {
            out = &out * &f.pow(*e);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return Some(Rational::zero());
        }
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<RatFn> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut num = Poly::one();
        for (f, e) in &self.den {
            num = &num * &f.pow(*e);
        }
        if let Some(c) = self.num.as_constant() {
            return Ok(RatFn {
                num: num.scale(&c.recip()),
                den: Vec::new(),
            });
        }
        let (lc, monic) = self.num.monic();
        Ok(RatFn {
            num: num.scale(&lc.recip()),
            den: vec![(monic, 1)],
        })
    }

    fn factor_exponent(&self, f: &Poly) -> u32 {
        self.den
            .iter()
            .find(|(g, _)| g == f)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn lcm_factors(a: &[(Poly, u32)], b: &[(Poly, u32)]) -> Vec<(Poly, u32)> {
        let mut out: Vec<(Poly, u32)> = a.to_vec();
        for (f, e) in b {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => out.push((f.clone(), *e)),
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    /// Numerator rewritten over the larger denominator `target`.
    fn lift(&self, target: &[(Poly, u32)]) -> Poly {
        let mut n = self.num.clone();
        for (f, e) in target {
            let missing = e - self.factor_exponent(f);
            if missing > 0 {
                n = &n * &f.pow(missing);
            }
        }
        n
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> RatFn {
        let mut num = self.num.clone();
        let mut den = Vec::new();
        for (f, e) in &self.den {
            let mut e = *e;
            while e > 0 {
                match num.div_exact(f) {
                    Some(q) => {
                        num = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            if e > 0 {
                den.push((f.clone(), e));
            }
        }
        if num.is_zero() {
            den.clear();
        }
        RatFn { num, den }
    }

    /// Quotient-rule partial derivative.
    pub fn partial(&self, var: usize) -> RatFn {
        if self.den.is_empty() {
            return RatFn::from_poly(self.num.partial(var));
        }
        let derivs: Vec<Poly> = self.den.iter().map(|(f, _)| f.partial(var)).collect();
        let all: Poly = self
            .den
            .iter()
            .fold(Poly::one(), |acc, (f, _)| &acc * f);
        let mut num = &self.num.partial(var) * &all;
        for (i, (_, e)) in self.den.iter().enumerate() {
            if derivs[i].is_zero() {
                continue;
            }
            let mut others = Poly::one();
            for (j, (g, _)) in self.den.iter().enumerate() {
                if j != i {
                    others = &others * g;
                }
            }
            let term = &(&self.num * &derivs[i]) * &others;
            num = &num - &term.scale(&Rational::from_integer((*e).into()));
        }
        let den = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        RatFn { num, den }.drop_zero()
    }

    fn drop_zero(self) -> RatFn {
        if self.num.is_zero() {
            RatFn::zero()
        } else {
            self
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        let mut den = Rational::one();
        for (f, e) in &self.den {
            let v = f.eval(point);
            if v.is_zero() {
                return Err(Error::Pole {
                    point: format_point(point),
                });
            }
            den *= num_traits::pow(v, *e as usize);
        }
        Ok(self.num.eval(point) / den)
    }

    /// Substitutes every coordinate by a rational function.
    pub fn compose(&self, subst: &[RatFn]) -> Result<RatFn> {
        assert_eq!(subst.len(), NVARS, "substitution needs one entry per coordinate");
        let from = |c: &Rational| RatFn::constant(c.clone());
        let num = self.num.substitute(subst, from);
        let mut den = RatFn::one();
        for (f, e) in &self.den {
            let v = f.substitute(subst, from);
            if v.is_zero() {
                return Err(Error::Invalid(
                    "substitution makes a denominator vanish identically".into(),
                ));
            }
            for _ in 0..*e {
                den = &den * &v;
            }
        }
        Ok(&num * &den.inv()?)
    }

    /// Generic substitution into any scalar ring.
    pub fn substitute<S: super::Scalar>(&self, vals: &[S]) -> Result<S> {
        let from = |c: &Rational| S::from_rational(c.clone());
        let num = self.num.substitute(vals, from);
        let mut den = S::one_elem();
        for (f, e) in &self.den {
            let v = f.substitute(vals, from);
            for _ in 0..*e {
                den = den.times(&v);
            }
        }
        Ok(num.times(&den.try_inv()?))
    }
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        for (k, (g, e)) in self.den.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "({})", g)?;
            } else {
                write!(f, "({})^{}", g, e)?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({})", self)
    }
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, other: &RatFn) -> RatFn {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            return RatFn {
                num: &self.num + &other.num,
                den: self.den.clone(),
            }
            .drop_zero();
        }
        let den = RatFn::lcm_factors(&self.den, &other.den);
        let num = &self.lift(&den) + &other.lift(&den);
        RatFn { num, den }.drop_zero()
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, other: &RatFn) -> RatFn {
        self + &(-other)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, other: &RatFn) -> RatFn {
        if self.is_zero() || other.is_zero() {
            return RatFn::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 += e,
                None => den.push((f.clone(), *e)),
            }
        }
        den.sort_by(|x, y| x.0.cmp(&y.0));
        RatFn {
            num: &self.num * &other.num,
            den,
        }
    }
}

impl<'a> Div<&'a RatFn> for &'a RatFn {
    type Output = Result<RatFn>;
    fn div(self, other: &RatFn) -> Result<RatFn> {
        Ok(self * &other.inv()?)
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, o: RatFn) -> RatFn {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

impl super::Coeff for RatFn {
    type Scalar = RatFn;

    fn zero_elem() -> Self {
        RatFn::zero()
    }
    fn is_zero_elem(&self) -> bool {
        RatFn::is_zero(self)
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
        RatFn::scale(self, r)
    }
    fn partial(&self, var: usize) -> Self {
        RatFn::partial(self, var)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl super::Scalar for RatFn {
    fn one_elem() -> Self {
        RatFn::one()
    }
    fn from_rational(r: Rational) -> Self {
        RatFn::constant(r)
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn constant_value(&self) -> Option<Rational> {
        self.as_constant()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn nx() -> RatFn {
        RatFn::from_poly(Poly::sum_of_squares(&[0, 1, 2, 3]))
    }
    fn ny() -> RatFn {
        RatFn::from_poly(Poly::sum_of_squares(&[4, 5, 6, 7]))
    }

    fn pt(v: [i64; 8]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn inverse_times_value_is_one() {
        let a = ny().inv().unwrap();
        assert_eq!(&a * &ny(), RatFn::one());
    }

    #[test]
    fn adding_zero_is_identity() {
        let s = (&nx() + &ny()).inv().unwrap();
        assert_eq!(&s + &RatFn::zero(), s);
    }

    #[test]
    fn partition_of_unity() {
        let s_inv = (&nx() + &ny()).inv().unwrap();
        let sum = &(&ny() * &s_inv) + &(&nx() * &s_inv);
        assert_eq!(sum, RatFn::one());
        assert_eq!(sum.reduce().as_constant(), Some(int(1)));
    }

    #[test]
    fn evaluation() {
        let s_inv = (&nx() + &ny()).inv().unwrap();
        assert_eq!(s_inv.eval(&pt([1, 0, 0, 0, 0, 0, 0, 0])).unwrap(), int(1));
        let f = &ny() * &s_inv;
        assert_eq!(f.eval(&pt([1, 0, 0, 0, 1, 0, 0, 0])).unwrap(), rat(1, 2));
        let g = ny().inv().unwrap();
        assert!(matches!(
            g.eval(&pt([1, 0, 0, 0, 0, 0, 0, 0])),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(RatFn::zero().inv().unwrap_err(), Error::DivisionByZero);
        assert!((&RatFn::one() / &RatFn::zero()).is_err());
    }

    #[test]
    fn composition_with_quaternion_inverse() {
        // w = y^{-1} has components (y0, -y1, -y2, -y3)/|y|^2 in the x slots.
        let inv_ny = ny().inv().unwrap();
        let mut subst: Vec<RatFn> = (0..8).map(RatFn::var).collect();
        for a in 0..4 {
            let sign = if a == 0 { int(1) } else { int(-1) };
            subst[a] = &RatFn::var(4 + a).scale(&sign) * &inv_ny;
        }
        let w0 = RatFn::var(0).compose(&subst).unwrap();
        assert_eq!(w0, &RatFn::var(4) * &inv_ny);
        let c = RatFn::constant(rat(5, 7));
        assert_eq!(c.compose(&subst).unwrap(), c);
        assert_eq!(nx().compose(&subst).unwrap(), inv_ny);
    }

    #[test]
    fn quotient_rule_matches_expansion() {
        let s = &nx() + &ny();
        let f = &RatFn::var(0) * &s.inv().unwrap();
        // d/dx0 (x0/S) = (S - 2 x0^2) / S^2
        let expect = &(&s - &RatFn::var(0).pow_i(2).scale(&int(2))) * &(&s * &s).inv().unwrap();
        assert_eq!(f.partial(0), expect);
    }

    #[test]
    fn reduce_cancels_common_factor() {
        let s = &nx() + &ny();
        let f = &(&s * &RatFn::var(3)) * &s.inv().unwrap();
        let r = f.reduce();
        assert!(r.den_factors().is_empty());
        assert_eq!(r, RatFn::var(3));
    }

    impl RatFn {
        fn pow_i(&self, e: u32) -> RatFn {
            (0..e).fold(RatFn::one(), |acc, _| &acc * self)
        }
    }
}

//! Sparse polynomials with rational coefficients in the eight coordinates
//! `x0..x3, y0..y3`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_traits::{One, Signed, Zero};

use super::{rat_to_string, Rational, NVARS, VAR_NAMES};
use crate::error::{Error, Result};

static TERM_LIMIT: AtomicUsize = AtomicUsize::new(400_000);

/// Sets the maximum number of terms any polynomial product may produce.
pub fn set_term_limit(limit: usize) {
    TERM_LIMIT.store(limit, AtomicOrdering::Relaxed);
}

pub fn term_limit() -> usize {
    TERM_LIMIT.load(AtomicOrdering::Relaxed)
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u8; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(i: usize) -> Self {
        let mut e = [0; NVARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = [0u8; NVARS];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.0[k]
                .checked_add(other.0[k])
                .expect("exponent overflow");
        }
        Monomial(e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = [0u8; NVARS];
        for (k, slot) in e.iter_mut().enumerate() {
            *slot = self.0[k].checked_sub(other.0[k])?;
        }
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{}", VAR_NAMES[k])?;
            } else {
                write!(f, "{}^{}", VAR_NAMES[k], e)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::ONE, c);
        }
        Poly { terms }
    }

    pub fn var(i: usize) -> Self {
        assert!(i < NVARS, "coordinate index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i), Rational::one());
        Poly { terms }
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(it: I) -> Self {
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in it {
            *terms.entry(m).or_insert_with(Rational::zero) += c;
        }
        terms.retain(|_, c| !c.is_zero());
        Poly { terms }
    }

    /// `sum_{i in vars} (coord_i)^2`.
    pub fn sum_of_squares(vars: &[usize]) -> Self {
        Poly::from_terms(vars.iter().map(|&i| {
            let mut e = [0u8; NVARS];
            e[i] = 2;
            (Monomial(e), Rational::one())
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v * c))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero());
        }
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c));
        }
        let limit = term_limit();
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
            if acc.len() > limit {
                return Err(Error::TermLimit {
                    terms: acc.len(),
                    limit,
                });
            }
        }
        let terms: BTreeMap<Monomial, Rational> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Poly { terms })
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Formal partial derivative with respect to coordinate `var`.
    pub fn partial(&self, var: usize) -> Poly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut d = *m;
            d.0[var] -= 1;
            terms.insert(d, c * Rational::from_integer(e.into()));
        }
        Poly { terms }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), NVARS, "evaluation point must have 8 coordinates");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    v *= num_traits::pow(point[k].clone(), e as usize);
                }
            }
            total += v;
        }
        total
    }

    /// Exact quotient `self / d` if `d` divides `self`, otherwise `None`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        let mut rem = self.clone();
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            let t = Poly::monomial(qm, qc.clone());
            rem = &rem - &(&t * d);
            quot.insert(qm, qc);
        }
        Some(Poly { terms: quot })
    }

    /// Normalizes to leading coefficient one, returning the removed factor.
    pub fn monic(&self) -> (Rational, Poly) {
        match self.leading() {
            None => (Rational::one(), Poly::zero()),
            Some((_, lc)) => {
                let lc = lc.clone();
                (lc.clone(), self.scale(&lc.recip()))
            }
        }
    }

    /// Substitutes the coordinates by values of any ring, in term order.
    pub fn substitute<T, F>(&self, vals: &[T], from_rational: F) -> T
    where
        T: super::Coeff,
        F: Fn(&Rational) -> T,
    {
        let mut powers: Vec<Vec<T>> = vals.iter().map(|v| vec![v.clone()]).collect();
        let mut total = from_rational(&Rational::zero());
        for (m, c) in &self.terms {
            let mut term = from_rational(c);
            for (k, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[k].len() < e as usize {
                    let next = powers[k].last().unwrap().times(&vals[k]);
                    powers[k].push(next);
                }
                term = term.times(&powers[k][e as usize - 1]);
            }
            total = total.plus(&term);
        }
        total
    }
}

impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().rev().cmp(other.terms.iter().rev())
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if *m == Monomial::ONE {
                write!(f, "{}", rat_to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", m)?;
            } else {
                write!(f, "{}*{}", rat_to_string(&abs), m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(*m, c.clone());
                }
            }
        }
        Poly { terms }
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        self + &(-other)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        self.try_mul(other)
            .unwrap_or_else(|e| panic!("polynomial guardrail: {e}"))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn x(i: usize) -> Poly {
        Poly::var(i)
    }

    #[test]
    fn monomial_product() {
        let p = &x(0) * &x(0);
        let mut e = [0u8; 8];
        e[0] = 2;
        assert_eq!(p, Poly::monomial(Monomial(e), int(1)));
    }

    #[test]
    fn cancellation_gives_zero() {
        let a = &x(0) + &x(4);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn norm_product_has_sixteen_terms() {
        let nx = Poly::sum_of_squares(&[0, 1, 2, 3]);
        let ny = Poly::sum_of_squares(&[4, 5, 6, 7]);
        let p = &nx * &ny;
        assert_eq!(p.degree(), 4);
        assert_eq!(p.num_terms(), 16);
        // naive oracle: every (x_i y_j)^2 appears once with coefficient 1
        for i in 0..4 {
            for j in 4..8 {
                let mut e = [0u8; 8];
                e[i] = 2;
                e[j] = 2;
                assert_eq!(p.terms.get(&Monomial(e)), Some(&int(1)));
            }
        }
    }

    #[test]
    fn partial_derivatives() {
        let p = &x(0) * &x(1);
        assert_eq!(p.partial(0), x(1));
        let nx = Poly::sum_of_squares(&[0, 1, 2, 3]);
        assert_eq!(nx.partial(2), x(2).scale(&int(2)));
        assert!(Poly::constant(rat(7, 3)).partial(7).is_zero());
    }

    #[test]
    fn exact_division() {
        let nx = Poly::sum_of_squares(&[0, 1, 2, 3]);
        let s = &nx + &Poly::sum_of_squares(&[4, 5, 6, 7]);
        let p = &(&nx * &s) * &x(5);
        assert_eq!(p.div_exact(&s), Some(&nx * &x(5)));
        assert_eq!((&p + &Poly::one()).div_exact(&s), None);
    }

    #[test]
    fn grlex_ordering_and_display() {
        let p = &(&x(0) * &x(0)) + &(&x(1).scale(&rat(-3, 2)) + &Poly::one());
        assert_eq!(p.to_string(), "x0^2 - 3/2*x1 + 1");
        assert!(Monomial::var(0) > Monomial::var(7));
        assert!(Monomial::ONE < Monomial::var(7));
    }

    #[test]
    fn term_guardrail() {
        let s = Poly::sum_of_squares(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let old = term_limit();
        set_term_limit(10);
        let r = s.try_mul(&s);
        set_term_limit(old);
        assert!(matches!(r, Err(Error::TermLimit { .. })));
    }
}

//! Truncated Taylor expansions at a rational point.
//!
//! A jet of order `k` stores the Taylor coefficients of a function in the
//! displacement variables `h = q - p` up to total degree `k`. Each partial
//! derivative lowers the order by one, so a jet of order `k` supports `k`
//! nested derivatives with exact values.

use std::fmt;
use std::collections::HashMap;

use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use super::{rat_to_string, Coeff, Rational, Scalar, NVARS};
use crate::error::{Error, Result};

/// Highest supported jet order.
pub const KMAX: u8 = 4;

/// Order tag of exact constants.
const CONST: u8 = u8::MAX;

struct Tables {
    monos: Vec<[u8; NVARS]>,
    /// `len[k]` is the number of monomials of degree at most `k`.
    len: Vec<usize>,
    /// For each monomial `i`, pairs `(j, index of m_i m_j)` ordered by degree of `j`.
    mul: Vec<Vec<(u32, u32)>>,
    /// For each variable, `(source, target, exponent)` of the derivative map.
    deriv: Vec<Vec<(u32, u32, u8)>>,
}

static TABLES: Lazy<Tables> = Lazy::new(build_tables);

fn build_tables() -> Tables {
    let mut monos: Vec<[u8; NVARS]> = vec![[0; NVARS]];
    let mut len = vec![1usize];
    let mut frontier: Vec<[u8; NVARS]> = vec![[0; NVARS]];
    for _ in 1..=KMAX {
        let mut next: Vec<[u8; NVARS]> = Vec::new();
        for m in &frontier {
            let last = m.iter().rposition(|&e| e > 0).unwrap_or(0);
            for v in last..NVARS {
                let mut n = *m;
                n[v] += 1;
                next.push(n);
            }
        }
        monos.extend(next.iter().copied());
        len.push(monos.len());
        frontier = next;
    }
    let index: HashMap<[u8; NVARS], usize> =
        monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let degree = |m: &[u8; NVARS]| m.iter().map(|&e| e as usize).sum::<usize>();
    let mut mul = Vec::with_capacity(monos.len());
    for a in &monos {
        let da = degree(a);
        let mut row = Vec::new();
        for (j, b) in monos.iter().enumerate() {
            if da + degree(b) > KMAX as usize {
                break;
            }
            let mut c = *a;
            for v in 0..NVARS {
                c[v] += b[v];
            }
            row.push((j as u32, index[&c] as u32));
        }
        mul.push(row);
    }
    let mut deriv = Vec::with_capacity(NVARS);
    for v in 0..NVARS {
        let mut rows = Vec::new();
        for (i, m) in monos.iter().enumerate() {
            if m[v] > 0 {
                let mut t = *m;
                t[v] -= 1;
                rows.push((i as u32, index[&t] as u32, m[v]));
            }
        }
        deriv.push(rows);
    }
    Tables {
        monos,
        len,
        mul,
        deriv,
    }
}

fn len_for(order: u8) -> usize {
    if order == CONST {
        1
    } else {
        TABLES.len[order as usize]
    }
}

#[derive(Clone)]
pub struct Jet {
    order: u8,
    c: Vec<Rational>,
}

impl Jet {
    pub fn constant(r: Rational) -> Self {
        Jet {
            order: CONST,
            c: vec![r],
        }
    }

    /// The coordinate function `q_var` expanded at `point` to the given order.
    pub fn coordinate(point: &[Rational], var: usize, order: u8) -> Self {
        assert!(order <= KMAX, "jet order above the supported maximum");
        let mut c = vec![Rational::zero(); len_for(order)];
        c[0] = point[var].clone();
        if order >= 1 {
            // degree-one monomials are stored in variable order right after 1
            c[1 + var] = Rational::one();
        }
        Jet { order, c }
    }

    /// All eight coordinate jets at `point`.
    pub fn coordinates(point: &[Rational], order: u8) -> [Jet; NVARS] {
        std::array::from_fn(|v| Jet::coordinate(point, v, order))
    }

    pub fn order(&self) -> Option<u8> {
        (self.order != CONST).then_some(self.order)
    }

    pub fn is_constant(&self) -> bool {
        self.order == CONST
    }

    /// Value at the expansion point.
    pub fn value(&self) -> &Rational {
        &self.c[0]
    }

    /// Taylor coefficient of `h^m`.
    pub fn coefficient(&self, m: &[u8; NVARS]) -> Rational {
        TABLES
            .monos
            .iter()
            .take(self.c.len())
            .position(|x| x == m)
            .map(|i| self.c[i].clone())
            .unwrap_or_else(Rational::zero)
    }

    fn combine(&self, other: &Jet, f: impl Fn(&Rational, &Rational) -> Rational) -> Jet {
        let order = self.order.min(other.order);
        let n = len_for(order);
        let zero = Rational::zero();
        let c = (0..n)
            .map(|i| f(self.c.get(i).unwrap_or(&zero), other.c.get(i).unwrap_or(&zero)))
            .collect();
        Jet { order, c }
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.combine(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Jet {
        Jet {
            order: self.order,
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Jet {
        Jet {
            order: self.order,
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    pub fn mul(&self, other: &Jet) -> Jet {
        if self.is_constant() {
            return other.scale(&self.c[0]);
        }
        if other.is_constant() {
            return self.scale(&other.c[0]);
        }
        let order = self.order.min(other.order);
        let n = len_for(order);
        let t = &*TABLES;
        let mut out = vec![Rational::zero(); n];
        for i in 0..n {
            let a = &self.c[i];
            if a.is_zero() {
                continue;
            }
            for &(j, idx) in &t.mul[i] {
                let (j, idx) = (j as usize, idx as usize);
                if idx >= n {
                    // entries are listed by increasing degree of j
                    break;
                }
                let b = &other.c[j];
                if !b.is_zero() {
                    out[idx] += a * b;
                }
            }
        }
        Jet { order, c: out }
    }

    pub fn partial(&self, var: usize) -> Jet {
        if self.is_constant() {
            return Jet::constant(Rational::zero());
        }
        assert!(self.order > 0, "jet order exhausted by differentiation");
        let order = self.order - 1;
        let n = len_for(order);
        let mut c = vec![Rational::zero(); n];
        for &(src, dst, e) in &TABLES.deriv[var] {
            let (src, dst) = (src as usize, dst as usize);
            if dst < n && src < self.c.len() {
                c[dst] = &self.c[src] * Rational::from_integer(e.into());
            }
        }
        Jet { order, c }
    }

    pub fn inv(&self) -> Result<Jet> {
        let a0 = self.c[0].clone();
        if a0.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let inv0 = a0.recip();
        if self.is_constant() {
            return Ok(Jet::constant(inv0));
        }
        // 1/(a0 + g) = (1/a0) sum_n (-g/a0)^n, g without constant term
        let mut g = self.scale(&-inv0.clone());
        g.c[0] = Rational::zero();
        let mut term = Jet::constant(Rational::one());
        let mut sum = Jet::constant(Rational::one());
        for _ in 0..self.order {
            term = term.mul(&g);
            sum = sum.add(&term);
        }
        let mut out = sum.scale(&inv0);
        if out.is_constant() {
            out = Jet {
                order: self.order,
                c: {
                    let mut c = vec![Rational::zero(); len_for(self.order)];
                    c[0] = out.c[0].clone();
                    c
                },
            };
        }
        Ok(out)
    }
}

impl PartialEq for Jet {
    /// Compares the Taylor coefficients both jets know.
    fn eq(&self, other: &Self) -> bool {
        let n = len_for(self.order.min(other.order));
        let zero = Rational::zero();
        (0..n).all(|i| self.c.get(i).unwrap_or(&zero) == other.c.get(i).unwrap_or(&zero))
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.order() {
            None => write!(f, "Jet(const {})", rat_to_string(&self.c[0])),
            Some(k) => write!(f, "Jet(order {}, value {})", k, rat_to_string(&self.c[0])),
        }
    }
}

impl Coeff for Jet {
    type Scalar = Jet;

    fn zero_elem() -> Self {
        Jet::constant(Rational::zero())
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|a| a.is_zero())
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn mul_scalar(&self, s: &Self) -> Self {
        self.mul(s)
    }
    fn scale(&self, r: &Rational) -> Self {
        Jet::scale(self, r)
    }
    fn partial(&self, var: usize) -> Self {
        Jet::partial(self, var)
    }
    fn from_scalar(s: Self) -> Self {
        s
    }
    fn render(&self) -> String {
        rat_to_string(&self.c[0])
    }
}

impl Scalar for Jet {
    fn one_elem() -> Self {
        Jet::constant(Rational::one())
    }
    fn from_rational(r: Rational) -> Self {
        Jet::constant(r)
    }
    fn try_inv(&self) -> Result<Self> {
        self.inv()
    }
    fn constant_value(&self) -> Option<Rational> {
        self.is_constant().then(|| self.c[0].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, Poly, RatFn};

    fn point() -> Vec<Rational> {
        vec![rat(1, 2), int(-1), rat(2, 3), int(0), rat(1, 5), int(2), rat(-3, 4), int(1)]
    }

    #[test]
    fn table_sizes() {
        assert_eq!(TABLES.len, vec![1, 9, 45, 165, 495]);
    }

    #[test]
    fn jets_match_symbolic_derivatives() {
        // f = x0 x4 / (1 + |x|^2)
        let nx = Poly::sum_of_squares(&[0, 1, 2, 3]);
        let f = RatFn::new(&Poly::var(0) * &Poly::var(4), &nx + &Poly::one()).unwrap();
        let p = point();
        let q = Jet::coordinates(&p, 3);
        let jf = f.substitute(&q).unwrap();
        assert_eq!(jf.value(), &f.eval(&p).unwrap());
        for a in 0..8 {
            for b in 0..8 {
                let sym = f.partial(a).partial(b).eval(&p).unwrap();
                assert_eq!(jf.partial(a).partial(b).value(), &sym);
            }
        }
        let sym = f.partial(0).partial(1).partial(4).eval(&p).unwrap();
        assert_eq!(jf.partial(0).partial(1).partial(4).value(), &sym);
    }

    #[test]
    fn inverse_is_exact() {
        let p = point();
        let q = Jet::coordinates(&p, 4);
        let f = q[0].mul(&q[1]).add(&Jet::constant(int(3)));
        let g = f.inv().unwrap();
        let one = f.mul(&g);
        assert_eq!(one, Jet::constant(int(1)));
        assert!(Jet::constant(int(0)).inv().is_err());
    }

    #[test]
    #[should_panic(expected = "order exhausted")]
    fn differentiating_past_order_panics() {
        let q = Jet::coordinates(&point(), 1);
        let _ = q[0].partial(0).partial(0);
    }
}

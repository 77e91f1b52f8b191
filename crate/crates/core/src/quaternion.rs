//! Quaternions in the basis `e0, e1, e2, e3 = 1, -i, -j, -k`, the complex
//! structures `I1, I2, I3` and Fueter maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{int, Coeff, LinearFamily, Matrix, Rational, Scalar};

/// `c0 e0 + c1 e1 + c2 e2 + c3 e3`.
#[derive(Clone, PartialEq)]
pub struct Quat<S> {
    pub c: [S; 4],
}

impl<S: Scalar> Quat<S> {
    pub fn new(c: [S; 4]) -> Self {
        Quat { c }
    }

    pub fn zero() -> Self {
        Quat::new(std::array::from_fn(|_| S::zero_elem()))
    }

    pub fn real(s: S) -> Self {
        let mut q = Quat::zero();
        q.c[0] = s;
        q
    }

    /// Basis element `e_a`.
    pub fn basis(a: usize) -> Self {
        let mut q = Quat::zero();
        q.c[a] = S::one_elem();
        q
    }

    pub fn from_rationals(c: [Rational; 4]) -> Self {
        Quat::new(c.map(S::from_rational))
    }

    pub fn conj(&self) -> Self {
        Quat::new([
            self.c[0].clone(),
            self.c[1].negated(),
            self.c[2].negated(),
            self.c[3].negated(),
        ])
    }

    pub fn re(&self) -> S {
        self.c[0].clone()
    }

    pub fn im(&self) -> Self {
        let mut q = self.clone();
        q.c[0] = S::zero_elem();
        q
    }

    pub fn norm2(&self) -> S {
        self.c
            .iter()
            .fold(S::zero_elem(), |acc, v| acc.plus(&v.times(v)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = (&self.c, &o.c);
        let dot = a[1]
            .times(&b[1])
            .plus(&a[2].times(&b[2]))
            .plus(&a[3].times(&b[3]));
        let re = a[0].times(&b[0]).minus(&dot);
        // vector part a0 b + b0 a - a x b, since e_a e_b = -eps_abc e_c
        let cross = |i: usize, j: usize| a[i].times(&b[j]).minus(&a[j].times(&b[i]));
        let v1 = a[0].times(&b[1]).plus(&b[0].times(&a[1])).minus(&cross(2, 3));
        let v2 = a[0].times(&b[2]).plus(&b[0].times(&a[2])).minus(&cross(3, 1));
        let v3 = a[0].times(&b[3]).plus(&b[0].times(&a[3])).minus(&cross(1, 2));
        Quat::new([re, v1, v2, v3])
    }

    /// `q^{-1} = conj(q) / |q|^2`.
    pub fn inv(&self) -> Result<Self> {
        let n = self.norm2();
        let ninv = n.try_inv().map_err(|_| Error::NotInvertible)?;
        Ok(self.conj().scalar_mul(&ninv))
    }

    pub fn scalar_mul(&self, s: &S) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].times(s)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].plus(&o.c[a])))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].minus(&o.c[a])))
    }

    pub fn neg(&self) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].negated()))
    }

    /// Commutator `[self, o]`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Quat<T> {
        Quat::new(std::array::from_fn(|a| f(&self.c[a])))
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<Quat<T>> {
        Ok(Quat::new([
            f(&self.c[0])?,
            f(&self.c[1])?,
            f(&self.c[2])?,
            f(&self.c[3])?,
        ]))
    }
}

impl<S: Scalar> fmt::Debug for Quat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<S: Scalar> Coeff for Quat<S> {
    type Scalar = S;

    fn zero_elem() -> Self {
        Quat::zero()
    }
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|v| v.is_zero_elem())
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
    fn mul_scalar(&self, s: &S) -> Self {
        self.scalar_mul(s)
    }
    fn scale(&self, r: &Rational) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].scale(r)))
    }
    fn partial(&self, var: usize) -> Self {
        Quat::new(std::array::from_fn(|a| self.c[a].partial(var)))
    }
    fn from_scalar(s: S) -> Self {
        Quat::real(s)
    }
    fn render(&self) -> String {
        let parts: Vec<String> = (0..4)
            .filter(|&a| !self.c[a].is_zero_elem())
            .map(|a| format!("({})e{}", self.c[a].render(), a))
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// The coordinate quaternion `x = sum x^a e_a` built from four scalars.
pub fn coordinate_quat<S: Scalar>(v: &[S]) -> Quat<S> {
    Quat::new([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

/// Matrix of `v -> v q` in the `e`-basis.
pub fn right_mult(q: &Quat<Rational>) -> Matrix {
    mult_matrix(|e| e.mul(q))
}

/// Matrix of `v -> q v` in the `e`-basis.
pub fn left_mult(q: &Quat<Rational>) -> Matrix {
    mult_matrix(|e| q.mul(e))
}

fn mult_matrix(f: impl Fn(&Quat<Rational>) -> Quat<Rational>) -> Matrix {
    let cols: Vec<Quat<Rational>> = (0..4).map(|a| f(&Quat::basis(a))).collect();
    Matrix::from_fn(4, 4, |i, j| cols[j].c[i].clone())
}

/// Complex structure `I_i`, right multiplication by `e_i` (i = 1, 2, 3).
pub fn complex_structure(i: usize) -> Matrix {
    assert!((1..=3).contains(&i), "complex structures are indexed 1..=3");
    right_mult(&Quat::basis(i))
}

/// `I_i` on `R^8 = H + H`, acting on both factors.
pub fn complex_structure_r8(i: usize) -> Matrix {
    let m = complex_structure(i);
    Matrix::from_fn(8, 8, |r, c| {
        if r / 4 == c / 4 {
            m[(r % 4, c % 4)].clone()
        } else {
            int(0)
        }
    })
}

/// Applies `I_i` to a vector of `R^4`.
pub fn complex_structure_apply(i: usize, v: &[Rational]) -> Vec<Rational> {
    complex_structure(i).apply(v)
}

/// `L + I1 L I1 + I2 L I2 - I3 L I3`.
pub fn fueter_operator(l: &Matrix) -> Matrix {
    let conj = |i: usize| {
        let ii = complex_structure(i);
        &(&ii * l) * &ii
    };
    &(&(l + &conj(1)) + &conj(2)) - &conj(3)
}

pub fn is_fueter(l: &Matrix) -> bool {
    fueter_operator(l).is_zero()
}

/// `H_l + H_l I1 + H_l I2`: left multiplications, then the same composed
/// with `I1` and with `I2`.
pub fn fueter_basis() -> Vec<Matrix> {
    let lefts: Vec<Matrix> = (0..4).map(|a| left_mult(&Quat::basis(a))).collect();
    let mut out = lefts.clone();
    for i in [1, 2] {
        let ii = complex_structure(i);
        out.extend(lefts.iter().map(|l| l * &ii));
    }
    out
}

/// Kernel of the Fueter operator on all 4x4 matrices, by exact elimination.
pub fn fueter_solution_space() -> LinearFamily {
    let columns: Vec<Vec<Rational>> = (0..16)
        .map(|k| {
            let mut l = Matrix::zeros(4, 4);
            l[(k / 4, k % 4)] = int(1);
            fueter_operator(&l).entries().to_vec()
        })
        .collect();
    let op = Matrix::from_fn(16, 16, |r, c| columns[c][r].clone());
    LinearFamily::from_vectors(16, op.nullspace())
}

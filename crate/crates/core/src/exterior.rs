//! Differential forms over `R^8` with coefficients in any [`Coeff`] ring.
//!
//! A basis form `dx^J` is stored as a bit mask over the ambient coordinates
//! `x0..x3, y0..y3`; subspaces such as `R^4` or `R^7` are forms whose masks
//! avoid the unused coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{int, Coeff, Matrix, RatFn, Rational, Scalar, NVARS, VAR_NAMES};
use crate::quaternion::Quat;

/// Weight of an index contraction over `q` shared indices: contractions run
/// over increasing multi-indices, so full index sums carry `1/q!`.
pub fn contraction_weight(q: usize) -> Rational {
    Rational::new(1.into(), (1..=q as i64).product::<i64>().into())
}

/// Bit mask of a multi-index.
pub type Blade = u8;

/// Mask of all eight coordinates.
pub const R8: Blade = 0xff;
/// Mask of `x0..x3`.
pub const R4X: Blade = 0x0f;
/// Mask of `y0..y3`.
pub const R4Y: Blade = 0xf0;
/// Mask of `x1, x2, x3, y0..y3`, the model space of the 3-form.
pub const R7: Blade = 0xfe;

pub fn blade(indices: &[usize]) -> Blade {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn blade_indices(b: Blade) -> Vec<usize> {
    (0..NVARS).filter(|&i| b & (1 << i) != 0).collect()
}

pub fn blade_degree(b: Blade) -> usize {
    b.count_ones() as usize
}

/// Sign of `dx^a ^ dx^b` relative to `dx^{a|b}`; zero if they overlap.
pub fn wedge_sign(a: Blade, b: Blade) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inversions = 0;
    for j in blade_indices(b) {
        inversions += ((a as u16) >> (j + 1)).count_ones();
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sign of `e_i _| dx^J` for `i` in `J`.
fn insertion_sign(i: usize, b: Blade) -> i32 {
    if (b & ((1u16 << i) as u8).wrapping_sub(1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn signed<C: Coeff>(c: &C, s: i32) -> C {
    if s < 0 {
        c.negated()
    } else {
        c.clone()
    }
}

/// A possibly inhomogeneous differential form.
#[derive(Clone, PartialEq)]
pub struct Form<C> {
    terms: BTreeMap<Blade, C>,
}

impl<C: Coeff> Default for Form<C> {
    fn default() -> Self {
        Form::zero()
    }
}

impl<C: Coeff> Form<C> {
    pub fn zero() -> Self {
        Form {
            terms: BTreeMap::new(),
        }
    }

    /// `c dx^J`.
    pub fn term(b: Blade, c: C) -> Self {
        let mut f = Form::zero();
        f.add_term(b, c);
        f
    }

    /// `dx^J` with unit coefficient.
    pub fn basis(indices: &[usize]) -> Self {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), indices.len(), "repeated index in basis form");
        let b = blade(indices);
        let sign = permutation_sign(indices);
        Form::term(b, signed(&C::from_scalar(C::Scalar::one_elem()), sign))
    }

    pub fn scalar(c: C) -> Self {
        Form::term(0, c)
    }

    /// `sum_i c_i dx^i`.
    pub fn one_form(coeffs: &[C]) -> Self {
        let mut f = Form::zero();
        for (i, c) in coeffs.iter().enumerate() {
            f.add_term(1 << i, c.clone());
        }
        f
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Blade, C)>) -> Self {
        let mut f = Form::zero();
        for (b, c) in terms {
            f.add_term(b, c);
        }
        f
    }

    pub fn add_term(&mut self, b: Blade, c: C) {
        if c.is_zero_elem() {
            return;
        }
        match self.terms.get_mut(&b) {
            Some(old) => {
                let s = old.plus(&c);
                if s.is_zero_elem() {
                    self.terms.remove(&b);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Blade, C> {
        &self.terms
    }

    pub fn coefficient(&self, b: Blade) -> C {
        self.terms.get(&b).cloned().unwrap_or_else(C::zero_elem)
    }

    /// Coefficient of `dx^{i_1} ^ ... ^ dx^{i_k}` for indices in any order.
    pub fn component(&self, indices: &[usize]) -> C {
        let b = blade(indices);
        if blade_degree(b) != indices.len() {
            return C::zero_elem();
        }
        signed(&self.coefficient(b), permutation_sign(indices))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree of a homogeneous form; `None` for zero or mixed forms.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.terms.keys().map(|&b| blade_degree(b));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Degree-`k` part.
    pub fn part(&self, k: usize) -> Form<C> {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| blade_degree(**b) == k)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Union of the coordinates that occur.
    pub fn support(&self) -> Blade {
        self.terms.keys().fold(0, |m, b| m | b)
    }

    pub fn add(&self, o: &Form<C>) -> Form<C> {
        let mut f = self.clone();
        for (b, c) in &o.terms {
            f.add_term(*b, c.clone());
        }
        f
    }

    pub fn sub(&self, o: &Form<C>) -> Form<C> {
        let mut f = self.clone();
        for (b, c) in &o.terms {
            f.add_term(*b, c.negated());
        }
        f
    }

    pub fn neg(&self) -> Form<C> {
        self.map_coeffs(|c| c.negated())
    }

    pub fn scale(&self, r: &Rational) -> Form<C> {
        self.map_coeffs(|c| c.scale(r))
    }

    pub fn mul_scalar(&self, s: &C::Scalar) -> Form<C> {
        self.map_coeffs(|c| c.mul_scalar(s))
    }

    /// Multiplies every coefficient on the left by `q`.
    pub fn left_mul(&self, q: &C) -> Form<C> {
        self.map_coeffs(|c| q.times(c))
    }

    /// Multiplies every coefficient on the right by `q`.
    pub fn right_mul(&self, q: &C) -> Form<C> {
        self.map_coeffs(|c| c.times(q))
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        Form::from_terms(self.terms.iter().map(|(b, c)| (*b, f(c))))
    }

    pub fn try_map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> Result<D>) -> Result<Form<D>> {
        let mut out = Form::zero();
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    /// Graded wedge product; coefficients multiply in the order written.
    pub fn wedge(&self, o: &Form<C>) -> Form<C> {
        let mut f = Form::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let s = wedge_sign(*a, *b);
                if s != 0 {
                    f.add_term(a | b, signed(&ca.times(cb), s));
                }
            }
        }
        f
    }

    /// Graded commutator `a ^ b - (-1)^{pq} b ^ a` of homogeneous forms.
    pub fn bracket_wedge(&self, o: &Form<C>) -> Form<C> {
        let p = self.degree().unwrap_or(0);
        let q = o.degree().unwrap_or(0);
        let ba = o.wedge(self);
        if (p * q) % 2 == 0 {
            self.wedge(o).sub(&ba)
        } else {
            self.wedge(o).add(&ba)
        }
    }

    /// Exterior derivative in the ambient coordinates.
    pub fn d(&self) -> Form<C> {
        let mut f = Form::zero();
        for (b, c) in &self.terms {
            for i in 0..NVARS {
                if b & (1 << i) != 0 {
                    continue;
                }
                let dc = c.partial(i);
                if dc.is_zero_elem() {
                    continue;
                }
                f.add_term(b | (1 << i), signed(&dc, wedge_sign(1 << i, *b)));
            }
        }
        f
    }

    /// `e_i _| a`.
    pub fn insert_basis(&self, i: usize) -> Form<C> {
        let mut f = Form::zero();
        for (b, c) in &self.terms {
            if b & (1 << i) != 0 {
                f.add_term(b & !(1 << i), signed(c, insertion_sign(i, *b)));
            }
        }
        f
    }

    /// First-slot insertion `v _| a`.
    pub fn interior(&self, v: &[C::Scalar]) -> Form<C> {
        let mut f = Form::zero();
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero_elem() {
                f = f.add(&self.insert_basis(i).mul_scalar(vi));
            }
        }
        f
    }

    /// Last-slot insertion `a |_ v = (-1)^{p-1} v _| a`.
    pub fn interior_last(&self, v: &[C::Scalar]) -> Form<C> {
        let inner = self.interior(v);
        let mut f = Form::zero();
        for (b, c) in inner.terms {
            // the source degree is one more than the result degree
            f.add_term(b, signed(&c, if blade_degree(b) % 2 == 0 { 1 } else { -1 }));
        }
        f
    }

    /// `e_i` inserted in the last slot.
    pub fn insert_basis_last(&self, i: usize) -> Form<C> {
        let mut f = Form::zero();
        for (b, c) in self.insert_basis(i).terms {
            f.add_term(b, signed(&c, if blade_degree(b) % 2 == 0 { 1 } else { -1 }));
        }
        f
    }

    /// First-slot contraction `b _| a = sum_J b_J iota_J a` with
    /// `iota_J = iota_{j_q} o ... o iota_{j_1}` and Euclidean index raising.
    /// Coefficients multiply as `b_J a_K`.
    pub fn contract_first(b: &Form<C>, a: &Form<C>) -> Form<C> {
        let mut f = Form::zero();
        for (jb, cb) in &b.terms {
            let mut inner = a.clone();
            for j in blade_indices(*jb) {
                inner = inner.insert_basis(j);
            }
            f = f.add(&inner.left_mul(cb));
        }
        f
    }

    /// Last-slot contraction `a |_ b`: each `dx^J = dx^{j_1..j_q}` removes
    /// `e_{j_q}` from the last slot first. Coefficients multiply as `a_K b_J`.
    pub fn contract_last(a: &Form<C>, b: &Form<C>) -> Form<C> {
        let mut f = Form::zero();
        for (jb, cb) in &b.terms {
            let mut inner = a.clone();
            for j in blade_indices(*jb).into_iter().rev() {
                inner = inner.insert_basis_last(j);
            }
            f = f.add(&inner.right_mul(cb));
        }
        f
    }

    /// Pullback along the linear map sending `dx^j` to `sum_i m[j][i] dx^i`.
    pub fn linear_transform(&self, m: &Matrix) -> Form<C> {
        let images: Vec<Form<C::Scalar>> = (0..NVARS)
            .map(|j| {
                Form::one_form(
                    &(0..NVARS)
                        .map(|i| C::Scalar::from_rational(m[(j, i)].clone()))
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        self.substitute_differentials(&images)
    }

    /// Replaces each `dx^j` by the scalar 1-form `images[j]`.
    pub fn substitute_differentials(&self, images: &[Form<C::Scalar>]) -> Form<C> {
        let mut f = Form::zero();
        for (b, c) in &self.terms {
            let mut prod: Form<C::Scalar> = Form::scalar(C::Scalar::one_elem());
            for j in blade_indices(*b) {
                prod = prod.wedge(&images[j]);
                if prod.is_zero() {
                    break;
                }
            }
            for (pb, pc) in prod.terms {
                f.add_term(pb, c.mul_scalar(&pc));
            }
        }
        f
    }

    /// Hodge star `*a = a^# _| vol` for the metric.
    pub fn hodge(&self, metric: &MetricSpec) -> Form<C> {
        let raised = self.linear_transform(&metric.inverse);
        let vol = metric.volume.map_coeffs(|r| C::from_scalar(C::Scalar::from_rational(r.clone())));
        Form::contract_first(&raised, &vol)
    }

    /// `a(v_1, ..., v_k) = iota_{v_k} ... iota_{v_1} a`.
    pub fn apply_vectors(&self, vs: &[Vec<C::Scalar>]) -> C {
        let mut f = self.clone();
        for v in vs {
            f = f.interior(v);
        }
        f.coefficient(0)
    }

    /// Dense tensor `T[i_1..i_k] = a(e_{i_1}, ..., e_{i_k})` of the degree-`k`
    /// part, flattened with the first index most significant.
    pub fn to_tensor(&self, k: usize) -> Vec<C> {
        let mut t = vec![C::zero_elem(); NVARS.pow(k as u32)];
        for (b, c) in &self.terms {
            if blade_degree(*b) != k {
                continue;
            }
            let idx = blade_indices(*b);
            for_each_permutation(&idx, &mut |perm, sign| {
                let flat = perm.iter().fold(0, |acc, &i| acc * NVARS + i);
                t[flat] = signed(c, sign);
            });
        }
        t
    }

    /// Reads a degree-`k` form off an antisymmetric tensor.
    pub fn from_tensor(t: &[C], k: usize) -> Form<C> {
        let mut f = Form::zero();
        for b in 0..=255u8 {
            if blade_degree(b) != k {
                continue;
            }
            let flat = blade_indices(b).iter().fold(0, |acc, &i| acc * NVARS + i);
            f.add_term(b, t[flat].clone());
        }
        f
    }

    /// Keeps only terms whose indices lie in `mask`.
    pub fn restrict_to(&self, mask: Blade) -> Form<C> {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| *b & !mask == 0)
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    /// Terms ordered by degree, then by multi-index.
    pub fn sorted_terms(&self) -> Vec<(Blade, &C)> {
        let mut v: Vec<(Blade, &C)> = self.terms.iter().map(|(b, c)| (*b, c)).collect();
        v.sort_by_key(|(b, _)| (blade_degree(*b), blade_indices(*b)));
        v
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.sorted_terms()
            .into_iter()
            .map(|(b, c)| {
                if b == 0 {
                    format!("({})", c.render())
                } else {
                    format!("({}) {}", c.render(), blade_name(b))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl<S: Scalar> Form<S> {
    /// Embeds a scalar-valued form into any coefficient ring over `S`.
    pub fn lift<C: Coeff<Scalar = S>>(&self) -> Form<C> {
        self.map_coeffs(|c| C::from_scalar(c.clone()))
    }

    /// `d x^i` for a scalar ring.
    pub fn dx(i: usize) -> Self {
        Form::term(1 << i, S::one_elem())
    }

    /// Contraction against a metric: raises `b` with the inverse metric, then
    /// contracts in the first slot.
    pub fn contract_metric(b: &Form<S>, a: &Form<S>, inverse: &Matrix) -> Form<S> {
        Form::contract_first(&b.linear_transform(inverse), a)
    }

    /// Pointwise inner product `<a, b>` of forms using the inverse metric.
    pub fn inner(&self, o: &Form<S>, inverse: &Matrix) -> S {
        Form::contract_first(&self.linear_transform(inverse), o).coefficient(0)
    }
}

impl Form<Rational> {
    pub fn from_i64(terms: &[(&[usize], i64)]) -> Self {
        let mut f = Form::zero();
        for (idx, c) in terms {
            f = f.add(&Form::basis(idx).scale(&int(*c)));
        }
        f
    }
}

/// Coefficients that can be precomposed with a rational map.
pub trait Composable: Coeff + Sized {
    fn compose(&self, map: &[RatFn]) -> Result<Self>;
    fn eval_at(&self, point: &[Rational]) -> Result<Self::Value>;
    type Value: Coeff;
}

impl Composable for RatFn {
    type Value = Rational;
    fn compose(&self, map: &[RatFn]) -> Result<Self> {
        RatFn::compose(self, map)
    }
    fn eval_at(&self, point: &[Rational]) -> Result<Rational> {
        self.eval(point)
    }
}

impl Composable for Quat<RatFn> {
    type Value = Quat<Rational>;
    fn compose(&self, map: &[RatFn]) -> Result<Self> {
        self.try_map(|c| c.compose(map))
    }
    fn eval_at(&self, point: &[Rational]) -> Result<Quat<Rational>> {
        self.try_map(|c| c.eval(point))
    }
}

impl<C: Composable<Scalar = RatFn>> Form<C> {
    /// Pullback along `map`, where `map[j]` expresses target coordinate `j`
    /// in the source coordinates.
    pub fn pullback(&self, map: &[RatFn]) -> Result<Form<C>> {
        if map.len() != NVARS {
            return Err(Error::Invalid(format!("pullback map needs {NVARS} components")));
        }
        let differentials: Vec<Form<RatFn>> = map
            .iter()
            .map(|m| Form::one_form(&(0..NVARS).map(|i| m.partial(i)).collect::<Vec<_>>()))
            .collect();
        let composed = self.try_map_coeffs(|c| c.compose(map))?;
        Ok(composed.substitute_differentials(&differentials))
    }

    /// Evaluates every coefficient at a point.
    pub fn eval(&self, point: &[Rational]) -> Result<Form<C::Value>> {
        self.try_map_coeffs(|c| c.eval_at(point))
    }
}

/// Metric data used by the Hodge star: inverse metric and volume form.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub inverse: Matrix,
    pub volume: Form<Rational>,
}

impl MetricSpec {
    /// Euclidean metric on the coordinates in `mask`, oriented by increasing index.
    pub fn euclidean(mask: Blade) -> Self {
        let inverse = Matrix::from_fn(NVARS, NVARS, |i, j| {
            if i == j && mask & (1 << i) != 0 {
                int(1)
            } else {
                int(0)
            }
        });
        MetricSpec {
            inverse,
            volume: Form::term(mask, int(1)),
        }
    }

    /// Reverses the orientation.
    pub fn reversed(&self) -> Self {
        MetricSpec {
            inverse: self.inverse.clone(),
            volume: self.volume.neg(),
        }
    }
}

impl<C: Coeff> fmt::Debug for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// `dx0^dy1` style name.
pub fn blade_name(b: Blade) -> String {
    blade_indices(b)
        .into_iter()
        .map(|i| format!("d{}", VAR_NAMES[i]))
        .collect::<Vec<_>>()
        .join("^")
}

fn permutation_sign(indices: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..indices.len() {
        for j in i + 1..indices.len() {
            if indices[i] > indices[j] {
                s = -s;
            }
        }
    }
    s
}

fn for_each_permutation(idx: &[usize], f: &mut impl FnMut(&[usize], i32)) {
    let mut perm = idx.to_vec();
    let n = perm.len();
    // Heap's algorithm; every swap flips the sign
    let mut c = vec![0usize; n];
    let mut sign = 1;
    f(&perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            f(&perm, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    type F = Form<Rational>;

    fn dx(i: &[usize]) -> F {
        Form::basis(i)
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(dx(&[0]).wedge(&dx(&[1])), dx(&[0, 1]));
        assert_eq!(dx(&[1]).wedge(&dx(&[0])), dx(&[0, 1]).neg());
        assert!(dx(&[0, 1]).wedge(&dx(&[0, 2])).is_zero());
        assert_eq!(dx(&[1, 0]), dx(&[0, 1]).neg());
        assert_eq!(wedge_sign(blade(&[7]), blade(&[0])), -1);
    }

    #[test]
    fn insertion_conventions() {
        let e = |i: usize| {
            let mut v = vec![int(0); 8];
            v[i] = int(1);
            v
        };
        assert_eq!(dx(&[0, 1]).interior_last(&e(1)), dx(&[0]));
        assert_eq!(dx(&[0, 1]).interior_last(&e(0)), dx(&[1]).neg());
        assert_eq!(dx(&[0, 1]).interior(&e(0)), dx(&[1]));
        assert_eq!(Form::contract_last(&dx(&[0, 1]), &dx(&[1])), dx(&[0]));
        assert_eq!(Form::contract_last(&dx(&[0, 1]), &dx(&[0, 1])), Form::scalar(int(1)));
        assert_eq!(Form::contract_first(&dx(&[0, 1]), &dx(&[0, 1])), Form::scalar(int(1)));
        assert_eq!(dx(&[2, 5]).apply_vectors(&[e(2), e(5)]), int(1));
        assert_eq!(dx(&[2, 5]).apply_vectors(&[e(5), e(2)]), int(-1));
    }

    #[test]
    fn hodge_examples() {
        let g = MetricSpec::euclidean(R8);
        assert_eq!(dx(&[0, 1, 2, 3]).hodge(&g), dx(&[4, 5, 6, 7]));
        assert_eq!(dx(&[0]).hodge(&MetricSpec::euclidean(R4X)), dx(&[1, 2, 3]));
        assert_eq!(dx(&[0, 1]).hodge(&MetricSpec::euclidean(R4X)), dx(&[2, 3]));
        assert_eq!(dx(&[0, 2]).hodge(&MetricSpec::euclidean(R4X)), dx(&[1, 3]).neg());
    }

    #[test]
    fn d_of_linear_form() {
        let x: Vec<RatFn> = (0..8).map(RatFn::var).collect();
        // x0 dx1 - x1 dx0 has d = 2 dx01
        let a = Form::term(blade(&[1]), x[0].clone()).sub(&Form::term(blade(&[0]), x[1].clone()));
        assert_eq!(a.d(), Form::term(blade(&[0, 1]), RatFn::constant(int(2))));
    }

    #[test]
    fn pullback_of_inverse_coordinate() {
        let y: Vec<RatFn> = (0..8).map(RatFn::var).collect();
        let n2 = (4..8).fold(RatFn::zero(), |s, i| s.plus(&y[i].times(&y[i])));
        let inv = n2.inv().unwrap();
        // w0 = y0 / |y|^2 placed in the first target slot
        let mut map = y.clone();
        map[0] = y[4].times(&inv);
        let pulled = Form::<RatFn>::dx(0).pullback(&map).unwrap();
        let expected = Form::one_form(&(0..8).map(|i| map[0].partial(i)).collect::<Vec<_>>());
        assert_eq!(pulled, expected);
        assert_eq!(Form::<RatFn>::dx(3).pullback(&y).unwrap(), Form::dx(3));
    }

    #[test]
    fn tensor_roundtrip() {
        let f = dx(&[1, 4, 6]).add(&dx(&[0, 2, 3]).scale(&rat(-3, 2)));
        let t = f.to_tensor(3);
        assert_eq!(t[6 * 64 + 4 * 8 + 1], int(-1));
        assert_eq!(Form::from_tensor(&t, 3), f);
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-6i64..7, 1i64..4).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_form(k: usize) -> impl Strategy<Value = F> {
        prop::collection::vec(arb_rat(), 8usize.pow(k as u32)).prop_map(move |vals| {
            let mut f = Form::zero();
            for (b, v) in (0..=255u8).filter(|b| blade_degree(*b) == k).zip(vals) {
                f.add_term(b, v);
            }
            f
        })
    }

    /// Polynomial-coefficient form of degree `k` with linear and quadratic terms.
    fn arb_poly_form(k: usize) -> impl Strategy<Value = Form<RatFn>> {
        prop::collection::vec((0u8..=255, 0usize..8, 0usize..8, -3i64..4), 1..5).prop_map(move |raw| {
            let mut f = Form::zero();
            for (b, i, j, c) in raw {
                if blade_degree(b) != k {
                    continue;
                }
                let coef = RatFn::var(i).times(&RatFn::var(j)).scale(&int(c)).plus(&RatFn::var(j));
                f.add_term(b, coef);
            }
            f
        })
    }

    proptest! {
        #[test]
        fn d_squared_vanishes(f in (0usize..5).prop_flat_map(arb_poly_form)) {
            prop_assert!(f.d().d().is_zero());
        }

        #[test]
        fn leibniz(a in arb_poly_form(1), b in arb_poly_form(2)) {
            let lhs = a.wedge(&b).d();
            let rhs = a.d().wedge(&b).sub(&a.wedge(&b.d()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cartan_derivation(a in arb_form(2), b in arb_form(1), v in prop::collection::vec(arb_rat(), 8)) {
            let lhs = a.wedge(&b).interior(&v);
            let rhs = a.interior(&v).wedge(&b).add(&a.wedge(&b.interior(&v)));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn hodge_involution(k in 0usize..=4, vals in prop::collection::vec(arb_rat(), 70)) {
            for (mask, n) in [(R4X, 4usize), (R7, 7), (R8, 8)] {
                if k > n { continue; }
                let g = MetricSpec::euclidean(mask);
                let mut f = F::zero();
                for (b, v) in (0..=255u8).filter(|b| blade_degree(*b) == k && b & !mask == 0).zip(vals.iter()) {
                    f.add_term(b, v.clone());
                }
                let sign = if (k * (n - k)) % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(f.hodge(&g).hodge(&g), f.scale(&int(sign)));
                prop_assert_eq!(f.wedge(&f.hodge(&g)), g.volume.scale(&f.inner(&f, &g.inverse)));
            }
        }

        #[test]
        fn pullback_commutes_with_d(a in arb_poly_form(1), shift in -3i64..4) {
            let x: Vec<RatFn> = (0..8).map(RatFn::var).collect();
            let n2 = x.iter().fold(RatFn::constant(int(1)), |s, v| s.plus(&v.times(v)));
            let map: Vec<RatFn> = (0..8)
                .map(|i| x[(i + 1) % 8].times(&n2.inv().unwrap()).plus(&RatFn::constant(int(shift))))
                .collect();
            prop_assert_eq!(a.d().pullback(&map).unwrap(), a.pullback(&map).unwrap().d());
        }
    }
}

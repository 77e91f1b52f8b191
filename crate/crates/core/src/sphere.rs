//! Rational points on spheres, restriction of ambient forms to `S^7` and the
//! Hopf vertical/horizontal splitting.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exact::{int, rat, Coeff, Jet, Matrix, RatFn, Rational, Scalar, NVARS};
use crate::exterior::{blade_indices, Form, MetricSpec, R8};
use crate::quaternion::Quat;
use crate::structures;

/// Conditions a sampled point must avoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exclusion {
    /// Reject points with `x = 0`.
    XAxis,
    /// Reject points with `y = 0`.
    YAxis,
}

/// A point of the unit sphere in `R^8` with exact coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SpherePoint {
    coords: Vec<Rational>,
    preimage: Vec<Rational>,
}

impl SpherePoint {
    /// Inverse stereographic projection `q -> (2q, |q|^2 - 1) / (|q|^2 + 1)`.
    pub fn from_stereographic(q: &[Rational]) -> Self {
        let n2 = q.iter().fold(Rational::zero(), |s, v| s + v * v);
        let den = &n2 + Rational::one();
        let mut coords: Vec<Rational> = q.iter().map(|v| v * int(2) / &den).collect();
        coords.push((&n2 - Rational::one()) / &den);
        SpherePoint {
            coords,
            preimage: q.to_vec(),
        }
    }

    /// Wraps exact coordinates, checking the unit norm.
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        let n2 = coords.iter().fold(Rational::zero(), |s, v| s + v * v);
        if !n2.is_one() {
            return Err(Error::Invalid("point is not on the unit sphere".into()));
        }
        Ok(SpherePoint {
            coords,
            preimage: Vec::new(),
        })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn preimage(&self) -> &[Rational] {
        &self.preimage
    }

    pub fn x_is_zero(&self) -> bool {
        self.coords.iter().take(4).all(Zero::is_zero)
    }

    pub fn y_is_zero(&self) -> bool {
        self.coords.iter().skip(4).all(Zero::is_zero)
    }

    fn excluded(&self, ex: &[Exclusion]) -> bool {
        ex.iter().any(|e| match e {
            Exclusion::XAxis => self.x_is_zero(),
            Exclusion::YAxis => self.y_is_zero(),
        })
    }

    /// `I - p p^T`.
    pub fn projector(&self) -> Matrix {
        let n = self.coords.len();
        Matrix::from_fn(n, n, |i, j| {
            let delta = if i == j { int(1) } else { int(0) };
            delta - &self.coords[i] * &self.coords[j]
        })
    }

    /// `p _| Vol_{R^8}`, the round volume form.
    pub fn round_volume(&self) -> Form<Rational> {
        Form::term(R8, int(1)).interior(&self.coords)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

const ATTEMPT_BUDGET: usize = 10_000;

/// Deterministic rational points on `S^n` in `R^{n+1}` for `n` in 1..=7.
pub fn sphere_points(
    n: usize,
    count: usize,
    seed: u64,
    exclusions: &[Exclusion],
) -> Result<Vec<SpherePoint>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > ATTEMPT_BUDGET {
            return Err(Error::PointExhaustion { attempts });
        }
        let q: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        let p = SpherePoint::from_stereographic(&q);
        if !p.excluded(exclusions) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Deterministic nonzero rational vectors of `R^n` with small entries.
pub fn random_vectors(n: usize, count: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let v: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng)).collect();
        if v.iter().any(|c| !c.is_zero()) {
            out.push(v);
        }
    }
    out
}

/// Points of `S^7`, optionally avoiding both coordinate axes `x = 0` and `y = 0`.
pub fn s7_points(count: usize, seed: u64, exclude_axes: bool) -> Result<Vec<SpherePoint>> {
    let ex: &[Exclusion] = if exclude_axes {
        &[Exclusion::XAxis, Exclusion::YAxis]
    } else {
        &[]
    };
    sphere_points(7, count, seed, ex)
}

/// Points of the fiber `S^3_0 = {y = 0}` inside `S^7`.
pub fn s3_zero_points(count: usize, seed: u64) -> Result<Vec<SpherePoint>> {
    Ok(sphere_points(3, count, seed, &[])?
        .into_iter()
        .map(|p| {
            let mut coords = p.coords.clone();
            coords.resize(NVARS, int(0));
            SpherePoint {
                coords,
                preimage: p.preimage,
            }
        })
        .collect())
}

/// Tangential part of an ambient form at `p`: pullback by the projector.
pub fn restrict(form: &Form<Rational>, p: &SpherePoint) -> Form<Rational> {
    form.linear_transform(&p.projector())
}

/// `None` when `a` and `b` agree on tangent vectors at `p`; otherwise the
/// leading disagreeing component.
pub fn restricted_difference(
    a: &Form<Rational>,
    b: &Form<Rational>,
    p: &SpherePoint,
) -> Option<String> {
    let diff = restrict(&a.sub(b), p);
    diff.sorted_terms().first().map(|(bl, c)| {
        format!(
            "restricted difference has {} on {:?}",
            crate::exact::rat_to_string(c),
            blade_indices(*bl)
        )
    })
}

/// Vertical and horizontal frame data at a point of `S^7`.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    pub projector: Matrix,
    /// `U_i`, the metric duals of `zeta_i` at the point.
    pub vertical: [Vec<Rational>; 3],
    /// Orthogonal basis of the horizontal space with squared norms.
    pub horizontal: Vec<(Vec<Rational>, Rational)>,
    /// Orthogonal projector onto the vertical space.
    pub vertical_projector: Matrix,
    pub horizontal_projector: Matrix,
}

impl TangentFrame {
    pub fn at(p: &SpherePoint) -> Self {
        let projector = p.projector();
        let vertical: [Vec<Rational>; 3] =
            std::array::from_fn(|i| structures::vertical_field(i + 1, p.coords()));
        let vertical_projector = Matrix::from_fn(NVARS, NVARS, |r, c| {
            vertical
                .iter()
                .fold(int(0), |s, u| s + &u[r] * &u[c])
        });
        let horizontal_projector = &projector - &vertical_projector;
        let horizontal = gram_schmidt(
            (0..NVARS).map(|j| horizontal_projector.column(j)).collect(),
        );
        TangentFrame {
            projector,
            vertical,
            horizontal,
            vertical_projector,
            horizontal_projector,
        }
    }

    /// `(f_1, f_2, f_3, b)` with `a = f_i zeta_i + b` and `b` horizontal.
    pub fn split_one_form(&self, a: &Form<Rational>, p: &SpherePoint) -> ([Rational; 3], Form<Rational>) {
        let a = restrict(a, p);
        let f: [Rational; 3] = std::array::from_fn(|i| a.interior(&self.vertical[i]).coefficient(0));
        let mut b = a;
        for (i, fi) in f.iter().enumerate() {
            b = b.sub(&Form::one_form(&self.vertical[i]).scale(fi));
        }
        (f, b)
    }
}

/// Orthogonalizes without square roots; zero vectors are dropped.
pub fn gram_schmidt(vectors: Vec<Vec<Rational>>) -> Vec<(Vec<Rational>, Rational)> {
    let dot = |a: &[Rational], b: &[Rational]| a.iter().zip(b).fold(int(0), |s, (x, y)| s + x * y);
    let mut out: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for mut v in vectors {
        for (u, n2) in &out {
            let c = dot(&v, u) / n2;
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= &c * ui;
            }
        }
        let n2 = dot(&v, &v);
        if !n2.is_zero() {
            out.push((v, n2));
        }
    }
    out
}

/// Round metric at `p`, oriented by `p _| Vol_{R^8}`.
pub fn round_metric(p: &SpherePoint) -> MetricSpec {
    MetricSpec {
        inverse: p.projector(),
        volume: p.round_volume(),
    }
}

// Covariant calculus on S^7. A tangential tensor is represented by any
// ambient extension T; for tangent z, x_j the Levi-Civita derivative is
//   (nabla T)[z, x_1..x_r] = d_z T[x..] - sum_j delta(z, x_j) T[x_1..q..x_r]
// where q is the position vector, and the formula iterates because its
// output is again an extension. Coefficients are Taylor jets at the point.

/// Coefficients that can be expanded as jets at a point.
pub trait JetExpand: Coeff {
    type Jetted: Coeff<Scalar = Jet> + JetValue;
    fn expand(&self, q: &[Jet]) -> Result<Self::Jetted>;
}

/// Jet-valued coefficients with a value at the base point.
pub trait JetValue: Coeff<Scalar = Jet> {
    type Value: Coeff<Scalar = Rational>;
    fn value_at(&self) -> Self::Value;
}

impl JetExpand for RatFn {
    type Jetted = Jet;
    fn expand(&self, q: &[Jet]) -> Result<Jet> {
        self.substitute(q)
    }
}

impl JetExpand for Quat<RatFn> {
    type Jetted = Quat<Jet>;
    fn expand(&self, q: &[Jet]) -> Result<Quat<Jet>> {
        self.try_map(|c| c.substitute(q))
    }
}

impl JetValue for Jet {
    type Value = Rational;
    fn value_at(&self) -> Rational {
        self.value().clone()
    }
}

impl JetValue for Quat<Jet> {
    type Value = Quat<Rational>;
    fn value_at(&self) -> Quat<Rational> {
        self.map(|c| c.value().clone())
    }
}

/// Dense tensor with `8^rank` entries, first index most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor<C> {
    pub rank: usize,
    pub data: Vec<C>,
}

impl<C: Coeff> Tensor<C> {
    pub fn from_form(f: &Form<C>, k: usize) -> Self {
        Tensor {
            rank: k,
            data: f.to_tensor(k),
        }
    }

    /// Reads an antisymmetric tensor as a form.
    pub fn to_form(&self) -> Form<C> {
        Form::from_tensor(&self.data, self.rank)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Tensor<D> {
        Tensor {
            rank: self.rank,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, o: &Tensor<C>) -> Tensor<C> {
        Tensor {
            rank: self.rank,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Tensor<C>) -> Tensor<C> {
        Tensor {
            rank: self.rank,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Tensor<C> {
        self.map(|c| c.scale(r))
    }

    /// `sum_{z,w} m[z][w] T[z, w, ...]`.
    pub fn trace_first_pair(&self, m: &Matrix) -> Tensor<C> {
        assert!(self.rank >= 2, "trace needs two indices");
        let rest = NVARS.pow(self.rank as u32 - 2);
        let mut data = vec![C::zero_elem(); rest];
        for z in 0..NVARS {
            for w in 0..NVARS {
                let c = &m[(z, w)];
                if c.is_zero() {
                    continue;
                }
                let base = (z * NVARS + w) * rest;
                for (i, d) in data.iter_mut().enumerate() {
                    *d = d.plus(&self.data[base + i].scale(c));
                }
            }
        }
        Tensor {
            rank: self.rank - 2,
            data,
        }
    }

    /// Evaluates the tensor on vectors in its leading slots.
    pub fn apply_leading(&self, v: &[Rational]) -> Tensor<C> {
        let rest = NVARS.pow(self.rank as u32 - 1);
        let mut data = vec![C::zero_elem(); rest];
        for (z, vz) in v.iter().enumerate() {
            if vz.is_zero() {
                continue;
            }
            for (i, d) in data.iter_mut().enumerate() {
                *d = d.plus(&self.data[z * rest + i].scale(vz));
            }
        }
        Tensor {
            rank: self.rank - 1,
            data,
        }
    }

    /// Applies `m` to every slot: `T[a..] -> sum m[b][a] T[b..]`.
    pub fn project_all(&self, m: &Matrix) -> Tensor<C> {
        let mut t = self.clone();
        for slot in 0..self.rank {
            let stride = NVARS.pow((self.rank - 1 - slot) as u32);
            let mut data = vec![C::zero_elem(); t.data.len()];
            for (idx, d) in data.iter_mut().enumerate() {
                let a = (idx / stride) % NVARS;
                let base = idx - a * stride;
                for b in 0..NVARS {
                    let c = &m[(b, a)];
                    if !c.is_zero() {
                        *d = d.plus(&t.data[base + b * stride].scale(c));
                    }
                }
            }
            t.data = data;
        }
        t
    }
}

impl<C: JetValue> Tensor<C> {
    pub fn value(&self) -> Tensor<C::Value> {
        self.map(|c| c.value_at())
    }
}

/// One covariant derivative. `gauge`, when present, is the connection
/// 1-form acting by commutator on coefficients.
pub fn covariant_derivative<C: Coeff<Scalar = Jet>>(
    t: &Tensor<C>,
    q: &[Jet],
    gauge: Option<&[C]>,
) -> Tensor<C> {
    let n = NVARS.pow(t.rank as u32);
    let mut data = Vec::with_capacity(n * NVARS);
    for z in 0..NVARS {
        for idx in 0..n {
            let mut v = t.data[idx].partial(z);
            for slot in 0..t.rank {
                let stride = NVARS.pow((t.rank - 1 - slot) as u32);
                let x = (idx / stride) % NVARS;
                if x != z {
                    continue;
                }
                let base = idx - x * stride;
                for (m, qm) in q.iter().enumerate() {
                    v = v.minus(&t.data[base + m * stride].mul_scalar(qm));
                }
            }
            if let Some(a) = gauge {
                v = v.plus(&a[z].times(&t.data[idx])).minus(&t.data[idx].times(&a[z]));
            }
            data.push(v);
        }
    }
    Tensor {
        rank: t.rank + 1,
        data,
    }
}

/// Trace used for rough Laplacians.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trace {
    Full,
    Vertical,
    Horizontal,
}

/// Jet data for sphere calculus at one point.
pub struct PointCalculus<'a> {
    pub point: &'a SpherePoint,
    pub frame: TangentFrame,
    pub q: [Jet; NVARS],
}

impl<'a> PointCalculus<'a> {
    /// Jets of the given order; each covariant derivative consumes one order.
    pub fn new(point: &'a SpherePoint, order: u8) -> Self {
        PointCalculus {
            point,
            frame: TangentFrame::at(point),
            q: Jet::coordinates(point.coords(), order),
        }
    }

    pub fn jet_form<C: JetExpand>(&self, f: &Form<C>) -> Result<Form<C::Jetted>> {
        f.try_map_coeffs(|c| c.expand(&self.q))
    }

    fn gauge_components<C: JetExpand>(&self, a: Option<&Form<C>>) -> Result<Option<Vec<C::Jetted>>> {
        match a {
            None => Ok(None),
            Some(a) => {
                let ja = self.jet_form(a)?;
                Ok(Some((0..NVARS).map(|z| ja.coefficient(1 << z)).collect()))
            }
        }
    }

    /// `nabla^n T` for a degree-`k` form, as a jet tensor of rank `k + n`.
    pub fn derivatives<C: JetExpand>(
        &self,
        f: &Form<C>,
        k: usize,
        n: usize,
        gauge: Option<&Form<C>>,
    ) -> Result<Tensor<C::Jetted>> {
        let ga = self.gauge_components(gauge)?;
        Ok(self.jet_derivatives(&self.jet_form(f)?, k, n, ga.as_deref()))
    }

    /// [`Self::derivatives`] for a form already expanded as jets at the point,
    /// with the gauge given by its jet components.
    pub fn jet_derivatives<C: Coeff<Scalar = Jet>>(
        &self,
        f: &Form<C>,
        k: usize,
        n: usize,
        gauge: Option<&[C]>,
    ) -> Tensor<C> {
        let mut t = Tensor::from_form(f, k);
        for _ in 0..n {
            t = covariant_derivative(&t, &self.q, gauge);
        }
        t
    }

    /// `nabla T` at the point with every slot projected to the tangent space.
    pub fn nabla<C: JetExpand>(
        &self,
        f: &Form<C>,
        k: usize,
        gauge: Option<&Form<C>>,
    ) -> Result<Tensor<<C::Jetted as JetValue>::Value>> {
        Ok(self
            .derivatives(f, k, 1, gauge)?
            .value()
            .project_all(&self.frame.projector))
    }

    pub fn trace_matrix(&self, trace: Trace) -> &Matrix {
        match trace {
            Trace::Full => &self.frame.projector,
            Trace::Vertical => &self.frame.vertical_projector,
            Trace::Horizontal => &self.frame.horizontal_projector,
        }
    }

    /// Rough Laplacian `-tr nabla^2` of a degree-`k` form, traced over the
    /// full, vertical or horizontal tangent directions.
    pub fn rough_laplacian<C: JetExpand>(
        &self,
        f: &Form<C>,
        k: usize,
        trace: Trace,
        gauge: Option<&Form<C>>,
    ) -> Result<Form<<C::Jetted as JetValue>::Value>> {
        let t = self.derivatives(f, k, 2, gauge)?.value();
        let lap = t.trace_first_pair(self.trace_matrix(trace)).scale(&int(-1));
        Ok(lap.project_all(&self.frame.projector).to_form())
    }

    /// `d^* T = -tr_{(1,2)} nabla T`.
    pub fn codifferential<C: JetExpand>(
        &self,
        f: &Form<C>,
        k: usize,
        gauge: Option<&Form<C>>,
    ) -> Result<Form<<C::Jetted as JetValue>::Value>> {
        let ga = self.gauge_components(gauge)?;
        Ok(self.jet_codifferential(&self.jet_form(f)?, k, ga.as_deref()))
    }

    /// [`Self::codifferential`] of a form already expanded as jets.
    pub fn jet_codifferential<C: JetValue>(
        &self,
        f: &Form<C>,
        k: usize,
        gauge: Option<&[C]>,
    ) -> Form<C::Value> {
        assert!(k >= 1, "codifferential needs a form of positive degree");
        let t = self.jet_derivatives(f, k, 1, gauge).value();
        let div = t.trace_first_pair(&self.frame.projector).scale(&int(-1));
        div.project_all(&self.frame.projector).to_form()
    }
}

/// Pullback by `P(q) = I - q q^T / |q|^2`, making an ambient form tangential
/// along every sphere through the origin.
pub fn project_tangential<C: Coeff>(f: &Form<C>, q: &[C::Scalar]) -> Result<Form<C>>
where
    C::Scalar: Scalar,
{
    let n2 = q.iter().fold(C::Scalar::zero_elem(), |s, v| s.plus(&v.times(v)));
    let inv = n2.try_inv()?;
    let images: Vec<Form<C::Scalar>> = (0..NVARS)
        .map(|j| {
            let coeffs: Vec<C::Scalar> = (0..NVARS)
                .map(|i| {
                    let delta = if i == j { C::Scalar::one_elem() } else { C::Scalar::zero_elem() };
                    delta.minus(&q[j].times(&q[i]).times(&inv))
                })
                .collect();
            Form::one_form(&coeffs)
        })
        .collect();
    Ok(f.substitute_differentials(&images))
}

/// Degree-2 value split into `(2,0)`, `(1,1)` and `(0,2)` parts.
pub fn bidegree_parts(beta: &Form<Rational>, frame: &TangentFrame) -> [Form<Rational>; 3] {
    let t = beta.linear_transform(&frame.projector);
    let vv = t.linear_transform(&frame.vertical_projector);
    let hh = t.linear_transform(&frame.horizontal_projector);
    let mixed = t.sub(&vv).sub(&hh);
    [vv, mixed, hh]
}

/// Ambient pieces of a 1-form: `f_i = alpha(U_i)`, `a = f_i zeta_i`, `b = alpha - a`.
pub struct VerticalSplit {
    pub f: [RatFn; 3],
    pub a: Form<RatFn>,
    pub b: Form<RatFn>,
}

pub fn split_ambient(alpha: &Form<RatFn>) -> VerticalSplit {
    let r = structures::ambient_coords();
    let f: [RatFn; 3] = std::array::from_fn(|i| {
        let z = structures::zeta(i + 1, &r);
        (0..NVARS).fold(RatFn::zero(), |s, j| {
            s.plus(&alpha.coefficient(1 << j).times(&z.coefficient(1 << j)))
        })
    });
    let a = (0..3).fold(Form::zero(), |acc, i| {
        acc.add(&structures::zeta(i + 1, &r).mul_scalar(&f[i]))
    });
    let b = alpha.sub(&a);
    VerticalSplit { f, a, b }
}

fn first_difference(label: &str, a: &Form<Rational>, b: &Form<Rational>) -> Option<String> {
    let d = a.sub(b);
    d.sorted_terms().first().map(|(bl, c)| {
        format!(
            "{label}: sides differ by {} on {:?}",
            crate::exact::rat_to_string(c),
            blade_indices(*bl)
        )
    })
}

/// Laplacians of the vertical frame: `nabla^* nabla zeta_i = 6 zeta_i` with
/// vertical and horizontal parts `2 zeta_i` and `4 zeta_i`, `d^* zeta_i = 0`
/// and `(nabla_X zeta_i)(Y) = omega_i^circ(X, Y)`.
pub fn frame_laplacian_check(points: &[SpherePoint]) -> crate::check::CheckOutcome {
    let r = structures::ambient_coords();
    crate::check::over_points(points, |p| {
        let pc = PointCalculus::new(p, 2);
        for i in 1..=3 {
            let z = structures::zeta(i, &r);
            let zp = restrict(&structures::zeta(i, p.coords()), p);
            for (trace, c) in [(Trace::Full, 6), (Trace::Vertical, 2), (Trace::Horizontal, 4)] {
                let lap = pc.rough_laplacian(&z, 1, trace, None)?;
                if let Some(w) = first_difference(&format!("{trace:?} Laplacian of zeta_{i}"), &lap, &zp.scale(&int(c))) {
                    return Ok(Some(w));
                }
            }
            let div = pc.codifferential(&z, 1, None)?;
            if !div.is_zero() {
                return Ok(Some(format!("d^* zeta_{i} = {div}")));
            }
            let grad = pc.nabla(&z, 1, None)?.to_form();
            if let Some(w) = first_difference(&format!("nabla zeta_{i}"), &grad, &restrict(&structures::omega_circ(i), p)) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    })
}

/// Blockwise exterior derivative of a 1-form `alpha = f_i zeta_i + b`:
/// `d(f_i zeta_i)` has `(1,1)` part `d^h f_i ^ zeta_i` and `(0,2)` part
/// `2 f_i omega_bar_i`, and `db` has no `(2,0)` part.
pub fn d_split_check(alpha: &Form<RatFn>, points: &[SpherePoint]) -> crate::check::CheckOutcome {
    let split = split_ambient(alpha);
    let (da, db) = (split.a.d(), split.b.d());
    let df: Vec<Form<RatFn>> = split.f.iter().map(|f| Form::scalar(f.clone()).d()).collect();
    crate::check::over_points(points, |p| {
        let frame = TangentFrame::at(p);
        let x = p.coords();
        let [_, da11, da02] = bidegree_parts(&da.eval(x)?, &frame);
        let [db20, _, _] = bidegree_parts(&db.eval(x)?, &frame);
        let mut mixed = Form::zero();
        let mut flat = Form::zero();
        for i in 0..3 {
            let fi = split.f[i].eval(x)?;
            let dhf = df[i].eval(x)?.linear_transform(&frame.horizontal_projector);
            mixed = mixed.add(&dhf.wedge(&structures::zeta(i + 1, x)));
            flat = flat.add(&structures::omega_bar(i + 1, x).scale(&(fi * int(2))));
        }
        let flat = flat.linear_transform(&frame.projector);
        let mixed = mixed.linear_transform(&frame.projector);
        Ok(first_difference("(2,0) part of db", &db20, &Form::zero())
            .or_else(|| first_difference("(1,1) part of da", &da11, &mixed))
            .or_else(|| first_difference("(0,2) part of da", &da02, &flat)))
    })
}

/// Vertical part of the rough Laplacian of `alpha = f_i zeta_i + b`:
/// `(nabla^* nabla alpha)^v = nabla^* nabla^v a + 4a + (nabla^* nabla^h f_i + 2<d^h b, omega_bar_i>) zeta_i`,
/// with the inner product of 2-forms.
pub fn vertical_laplacian_check(alpha: &Form<RatFn>, points: &[SpherePoint]) -> crate::check::CheckOutcome {
    let split = split_ambient(alpha);
    let db = split.b.d();
    crate::check::over_points(points, |p| {
        let pc = PointCalculus::new(p, 2);
        let x = p.coords();
        let frame = &pc.frame;
        let full = pc.rough_laplacian(alpha, 1, Trace::Full, None)?;
        let lhs = vertical_part(&full, frame, x);
        let mut rhs = pc
            .rough_laplacian(&split.a, 1, Trace::Vertical, None)?
            .add(&restrict(&split.a.eval(x)?, p).scale(&int(4)));
        let dhb = db.eval(x)?.linear_transform(&frame.horizontal_projector);
        for i in 0..3 {
            let f = Form::scalar(split.f[i].clone());
            let lap_h = pc.rough_laplacian(&f, 0, Trace::Horizontal, None)?.coefficient(0);
            let pairing = dhb.inner(&structures::omega_bar(i + 1, x), &frame.projector);
            let c = lap_h + pairing * int(2);
            rhs = rhs.add(&restrict(&structures::zeta(i + 1, x), p).scale(&c));
        }
        Ok(first_difference("vertical Laplacian", &lhs, &rhs))
    })
}

/// `sum_i beta(U_i) zeta_i` for a 1-form value.
pub fn vertical_part(beta: &Form<Rational>, frame: &TangentFrame, x: &[Rational]) -> Form<Rational> {
    (0..3).fold(Form::zero(), |acc, i| {
        let c = beta.interior(&frame.vertical[i]).coefficient(0);
        acc.add(&Form::one_form(&structures::vertical_field(i + 1, x)).scale(&c))
    })
}

/// `d(b _| phi) _| phi = d^* b - db _| psi + c b _| phi` for the standard
/// structure, with `b _| phi` built from tangentially projected ambient forms
/// so that it extends the sphere contraction. The stated form of the identity
/// has `c = tau0 / 2`; exact evaluation gives `c = tau0`.
pub fn dbstar_check(b: &Form<RatFn>, c: &Rational, points: &[SpherePoint]) -> crate::check::CheckOutcome {
    let db = b.d();
    let psi0 = structures::spin7_form();
    crate::check::over_points(points, |p| {
        let x = p.coords();
        let pc = PointCalculus::new(p, 1);
        // d of the projected contraction only needs first-order jets
        let jb = project_tangential(&pc.jet_form(b)?, &pc.q)?;
        let jphi = project_tangential(&structures::phi_std(&pc.q), &pc.q)?;
        let d_bphi = Form::contract_first(&jb, &jphi).d().map_coeffs(|j| j.value().clone());
        let phi = restrict(&structures::phi_std(x), p);
        let psi = restrict(&psi0, p);
        let bp = restrict(&b.eval(x)?, p);
        let lhs = restrict(&Form::contract_first(&restrict(&d_bphi, p), &phi), p);
        let dstar = pc.codifferential(b, 2, None)?;
        let dbpsi = restrict(&Form::contract_first(&restrict(&db.eval(x)?, p), &psi), p);
        let bphi = restrict(&Form::contract_first(&bp, &phi), p);
        let rhs = dstar.sub(&dbpsi).add(&bphi.scale(c));
        Ok(first_difference("d(b _| phi) _| phi", &lhs, &rhs))
    })
}

/// Polynomial 1-form with a vertical part, used by the Laplacian split checks.
pub fn sample_one_form() -> Form<RatFn> {
    let x = structures::ambient_coords();
    structures::zeta(1, &x).add(&Form::one_form(&[
        x[5].clone(),
        x[0].times(&x[1]),
        RatFn::zero(),
        x[7].clone(),
        x[2].times(&x[2]),
        RatFn::zero(),
        x[3].clone(),
        RatFn::zero(),
    ]))
}

/// Polynomial 2-form `x2 dx05 + x1 x6 dx34`.
pub fn sample_two_form() -> Form<RatFn> {
    let x = structures::ambient_coords();
    Form::term(crate::exterior::blade(&[0, 5]), x[2].clone())
        .add(&Form::term(crate::exterior::blade(&[3, 4]), x[1].times(&x[6])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{ambient_coords, omega_bar, phi_std, spin7_form, zeta};

    #[test]
    fn stereographic_points() {
        let south = SpherePoint::from_stereographic(&vec![int(0); 7]);
        let mut expected = vec![int(0); 8];
        expected[7] = int(-1);
        assert_eq!(south.coords(), &expected[..]);
        let mut q = vec![int(0); 7];
        q[0] = int(1);
        let mut e0 = vec![int(0); 8];
        e0[0] = int(1);
        assert_eq!(SpherePoint::from_stereographic(&q).coords(), &e0[..]);
        let pts = s7_points(30, 42, true).unwrap();
        assert_eq!(pts, s7_points(30, 42, true).unwrap());
        for p in &pts {
            assert!(SpherePoint::new(p.coords().to_vec()).is_ok());
            assert!(!p.x_is_zero() && !p.y_is_zero());
            let pr = p.projector();
            assert_eq!(&pr * &pr, pr);
            assert!(pr.apply(p.coords()).iter().all(Zero::is_zero));
        }
        for p in s3_zero_points(5, 1).unwrap() {
            assert!(p.y_is_zero());
        }
        assert!(matches!(
            sphere_points(3, 3, 0, &[Exclusion::YAxis]),
            Err(Error::PointExhaustion { .. })
        ));
    }

    #[test]
    fn frames_and_splitting() {
        for p in s7_points(10, 3, false).unwrap() {
            let fr = TangentFrame::at(&p);
            for i in 0..3 {
                for j in 0..3 {
                    let ip = fr.vertical[i].iter().zip(&fr.vertical[j]).fold(int(0), |s, (a, b)| s + a * b);
                    assert_eq!(ip, if i == j { int(1) } else { int(0) });
                    let zi = zeta(i + 1, p.coords());
                    assert_eq!(zi.interior(&fr.vertical[j]).coefficient(0), if i == j { int(1) } else { int(0) });
                }
            }
            assert_eq!(fr.horizontal.len(), 4);
            assert!((&fr.vertical_projector * &fr.horizontal_projector).is_zero());
            let (f, b) = fr.split_one_form(&zeta(2, p.coords()), &p);
            assert_eq!(f, [int(0), int(1), int(0)]);
            assert!(b.is_zero());
            let v = Form::one_form(&[int(1), int(-2), int(3), int(0), rat(1, 2), int(5), int(-1), int(2)]);
            let (f, b) = fr.split_one_form(&v, &p);
            let mut back = b.clone();
            for i in 0..3 {
                back = back.add(&Form::one_form(&fr.vertical[i]).scale(&f[i]));
                assert!(b.interior(&fr.vertical[i]).is_zero());
            }
            assert_eq!(back, restrict(&v, &p));
        }
    }

    #[test]
    fn round_laplacians() {
        let pts = s7_points(6, 4, false).unwrap();
        assert!(frame_laplacian_check(&pts).passed);
        let x0 = Form::scalar(RatFn::var(0));
        for p in &pts {
            let pc = PointCalculus::new(p, 2);
            let lap = pc.rough_laplacian(&x0, 0, Trace::Full, None).unwrap();
            assert_eq!(lap.coefficient(0), &p.coords()[0] * int(7));
            let div = pc.codifferential(&x0.d(), 1, None).unwrap();
            assert_eq!(div.coefficient(0), &p.coords()[0] * int(7));
        }
    }

    /// Second covariant derivative of a function against the Hessian
    /// formula `D^2 f(X, Y) - <X, Y> D_r f` evaluated symbolically.
    #[test]
    fn hessian_oracle() {
        let r = ambient_coords();
        let f = r[0].times(&r[5]).plus(&r[2].times(&r[2]).times(&r[7]));
        for p in s7_points(3, 8, false).unwrap() {
            let pc = PointCalculus::new(&p, 2);
            let h = pc.derivatives(&Form::scalar(f.clone()), 0, 2, None).unwrap().value();
            let h = h.project_all(&p.projector());
            let radial = (0..8).fold(int(0), |s, m| s + &p.coords()[m] * f.partial(m).eval(p.coords()).unwrap());
            let pr = p.projector();
            let mut raw = Matrix::from_fn(8, 8, |z, w| f.partial(z).partial(w).eval(p.coords()).unwrap());
            for z in 0..8 {
                raw[(z, z)] -= &radial;
            }
            let expected = &(&pr * &raw) * &pr;
            assert_eq!(h.data, expected.entries().to_vec());
        }
    }

    #[test]
    fn nabla_phi_is_psi() {
        let r = ambient_coords();
        for p in s7_points(3, 4, true).unwrap() {
            let pc = PointCalculus::new(&p, 1);
            let n = pc.nabla(&phi_std(&r), 3, None).unwrap();
            let psi = Tensor::from_form(&restrict(&spin7_form(), &p), 4);
            assert_eq!(n, psi);
        }
    }

    #[test]
    fn split_and_vertical_laplacian() {
        let pts = s7_points(3, 4, true).unwrap();
        let alpha = sample_one_form();
        assert!(d_split_check(&alpha, &pts).passed);
        assert!(d_split_check(&Form::zero(), &pts).passed);
        assert!(vertical_laplacian_check(&alpha, &pts).passed);
        assert!(vertical_laplacian_check(&zeta(1, &ambient_coords()), &pts).passed);
        assert!(vertical_laplacian_check(&Form::zero(), &pts).passed);
    }

    #[test]
    fn dbstar_coefficient() {
        let x = ambient_coords();
        let pts = s7_points(2, 4, true).unwrap();
        let b = sample_two_form();
        assert!(dbstar_check(&b, &int(4), &pts).passed);
        assert!(!dbstar_check(&b, &int(2), &pts).passed);
        assert!(dbstar_check(&omega_bar(1, &x), &int(4), &pts).passed);
        assert!(dbstar_check(&Form::zero(), &int(2), &pts).passed);
    }
}

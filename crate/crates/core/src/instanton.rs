//! Quaternion-valued connections, their curvature and gauge transformations,
//! the standard instantons on `R^4` and `S^7`, and pointwise instanton tests.

use num_traits::Zero;

use crate::check::{over_points, over_vectors, CheckOutcome};
use crate::error::{Error, Result};
use crate::exact::{int, rat, rat_to_string, Coeff, Jet, Matrix, RatFn, Rational, NVARS};
use crate::exterior::{blade_indices, Form};
use crate::quaternion::{complex_structure_r8, Quat};
use crate::sphere::{restrict, JetExpand, JetValue, SpherePoint};
use crate::structures::{anti_self_dual, omega_x, spin7_defect, G2Structure};

/// Quaternion-valued form with rational-function coefficients.
pub type QForm = Form<Quat<RatFn>>;
/// Quaternion-valued form with constant coefficients.
pub type QValue = Form<Quat<Rational>>;

/// Coordinate chart a connection lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chart {
    /// `R^4` with coordinates `x0..x3`.
    R4,
    /// `R^8 = H_x + H_y`.
    R8,
}

/// An `Im H`-valued connection 1-form.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeConnection {
    pub form: QForm,
    pub chart: Chart,
    pub label: String,
}

/// The unit gauge `q / |q|`, acted on without square roots.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveGauge {
    pub q: Quat<RatFn>,
}

/// The quaternion coordinate `x` (`offset = 0`) or `y` (`offset = 4`).
pub fn coordinate(offset: usize) -> Quat<RatFn> {
    Quat::new(std::array::from_fn(|a| RatFn::var(offset + a)))
}

/// `dx` or `dy` as a quaternion-valued 1-form.
pub fn differential(offset: usize) -> QForm {
    Form::from_terms((0..4).map(|a| (1u8 << (offset + a), Quat::basis(a))))
}

pub fn conj_form(f: &QForm) -> QForm {
    f.map_coeffs(|c| c.conj())
}

pub fn im_form(f: &QForm) -> QForm {
    f.map_coeffs(|c| c.im())
}

fn reduce_form(f: &QForm) -> QForm {
    f.map_coeffs(|c| c.map(|r| r.reduce()))
}

fn qd(q: &Quat<RatFn>) -> QForm {
    Form::from_terms((0..NVARS).map(|i| (1u8 << i, q.partial(i))))
}

fn norm2(offset: usize) -> RatFn {
    coordinate(offset).norm2()
}

impl GaugeConnection {
    /// Fails unless every coefficient is imaginary.
    pub fn new(label: impl Into<String>, chart: Chart, form: QForm) -> Result<Self> {
        let label = label.into();
        if form.degree().is_some_and(|k| k != 1) {
            return Err(Error::Invalid(format!("{label}: connection must be a 1-form")));
        }
        if form.terms().values().any(|c| !c.re().is_zero()) {
            return Err(Error::Invalid(format!("{label}: connection has a real part")));
        }
        Ok(GaugeConnection {
            form: reduce_form(&form),
            chart,
            label,
        })
    }

    pub fn trivial(chart: Chart) -> Self {
        GaugeConnection {
            form: Form::zero(),
            chart,
            label: "0".into(),
        }
    }

    /// `F = dA + A ^ A`.
    pub fn curvature(&self) -> QForm {
        reduce_form(&self.exterior_derivative().add(&self.square()))
    }

    pub fn exterior_derivative(&self) -> QForm {
        reduce_form(&self.form.d())
    }

    pub fn square(&self) -> QForm {
        reduce_form(&self.form.wedge(&self.form))
    }

    /// `dF + A ^ F - F ^ A`.
    pub fn bianchi_defect(&self, f: &QForm) -> QForm {
        reduce_form(&f.d().add(&self.form.wedge(f)).sub(&f.wedge(&self.form)))
    }

    /// `r _| A` for the position field `r`.
    pub fn radial_contraction(&self) -> QForm {
        let r: Vec<RatFn> = (0..NVARS).map(RatFn::var).collect();
        reduce_form(&self.form.interior(&r))
    }

    /// Curvature at one point from first-order jets of `A`.
    pub fn curvature_at(&self, x: &[Rational]) -> Result<QValue> {
        let q = Jet::coordinates(x, 1);
        let ja = self.form.try_map_coeffs(|c| c.expand(&q))?;
        Ok(ja.d().add(&ja.wedge(&ja)).map_coeffs(|c| c.value_at()))
    }

    /// `g(A) = (q A q^bar - Im(dq q^bar)) / |q|^2`.
    pub fn gauge_transform(&self, g: &ProjectiveGauge) -> Result<GaugeConnection> {
        let q = &g.q;
        let qbar = q.conj();
        let ninv = q.norm2().inv()?;
        let conjugated = self.form.left_mul(q).right_mul(&qbar);
        let shift = im_form(&qd(q).right_mul(&qbar));
        GaugeConnection::new(
            format!("{}:gauge", self.label),
            self.chart,
            conjugated.sub(&shift).mul_scalar(&ninv),
        )
    }

    /// `A + delta`, relabelled.
    pub fn perturbed(&self, delta: &QForm, label: impl Into<String>) -> Result<GaugeConnection> {
        GaugeConnection::new(label, self.chart, self.form.add(delta))
    }

    /// Pullback of the connection along a rational map.
    pub fn pullback(&self, map: &[RatFn], chart: Chart, label: impl Into<String>) -> Result<GaugeConnection> {
        GaugeConnection::new(label, chart, self.form.pullback(map)?)
    }
}

impl ProjectiveGauge {
    pub fn new(q: Quat<RatFn>) -> Result<Self> {
        if q.norm2().is_zero() {
            return Err(Error::Invalid("gauge quaternion vanishes identically".into()));
        }
        Ok(ProjectiveGauge { q })
    }

    /// `q F q^bar / |q|^2`, the transformed curvature.
    pub fn conjugate(&self, f: &QForm) -> Result<QForm> {
        let ninv = self.q.norm2().inv()?;
        Ok(reduce_form(
            &f.left_mul(&self.q).right_mul(&self.q.conj()).mul_scalar(&ninv),
        ))
    }
}

/// `B0 = Im(x dx^bar) / (1 + |x|^2)` on `R^4`.
pub fn b0() -> GaugeConnection {
    let x = coordinate(0);
    let dxbar = conj_form(&differential(0));
    let den = (&RatFn::one() + &norm2(0)).inv().expect("nonzero");
    GaugeConnection::new("B0", Chart::R4, im_form(&dxbar.left_mul(&x)).mul_scalar(&den))
        .expect("imaginary by construction")
}

/// `dx ^ dx^bar / (1 + |x|^2)^2`.
pub fn b0_curvature_closed_form() -> QForm {
    let dx = differential(0);
    let den = (&RatFn::one() + &norm2(0)).inv().expect("nonzero");
    reduce_form(&dx.wedge(&conj_form(&dx)).mul_scalar(&(&den * &den)))
}

fn s_inv() -> RatFn {
    (&norm2(0) + &norm2(4)).inv().expect("nonzero")
}

/// `q^{-1} dq` for the quaternion coordinate at `offset`.
fn maurer_cartan(offset: usize) -> QForm {
    differential(offset).left_mul(&coordinate(offset).inv().expect("nonzero"))
}

/// `A0 = Im[|y|^2 x^{-1} dx + |x|^2 y^{-1} dy] / (|x|^2 + |y|^2)`.
pub fn a0() -> GaugeConnection {
    let inner = maurer_cartan(0)
        .mul_scalar(&norm2(4))
        .add(&maurer_cartan(4).mul_scalar(&norm2(0)));
    GaugeConnection::new("A0", Chart::R8, im_form(&inner).mul_scalar(&s_inv()))
        .expect("imaginary by construction")
}

/// The left Hopf connection `Im[w dw^bar + z dz^bar] / (|w|^2 + |z|^2)`,
/// with `w` in the first quaternion slot and `z` in the second.
pub fn left_hopf_connection() -> GaugeConnection {
    let w = coordinate(0);
    let z = coordinate(4);
    let inner = conj_form(&differential(0))
        .left_mul(&w)
        .add(&conj_form(&differential(4)).left_mul(&z));
    GaugeConnection::new("hopf-left", Chart::R8, im_form(&inner).mul_scalar(&s_inv()))
        .expect("imaginary by construction")
}

/// `(x, y) -> (w, z) = (y^{-1}, x^{-1})`.
pub fn inversion_swap_map() -> Vec<RatFn> {
    let yinv = coordinate(4).inv().expect("nonzero");
    let xinv = coordinate(0).inv().expect("nonzero");
    yinv.c.iter().chain(xinv.c.iter()).cloned().collect()
}

/// `A0` obtained by pulling the left Hopf connection back along
/// [`inversion_swap_map`].
pub fn a0_by_pullback() -> Result<GaugeConnection> {
    left_hopf_connection().pullback(&inversion_swap_map(), Chart::R8, "A0:pullback")
}

fn s_inv_squared() -> RatFn {
    let s = s_inv();
    &s * &s
}

/// How the mixed `x^{-1}dx`, `y^{-1}dy` products are written in the closed
/// forms of `dA0` and `A0 ^ A0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossTerm {
    /// `mx ^ my + my ^ mx`, the exact expansion.
    Symmetrized,
    /// A single ordering counted twice, `2 my ^ mx` in `dA0` and `2 mx ^ my`
    /// in `A0 ^ A0`, as if the quaternion coefficients commuted.
    Doubled,
}

/// Closed form of `dA0`, expanded term by term.
pub fn a0_derivative_closed_form(cross: CrossTerm) -> QForm {
    let (x, y) = (coordinate(0), coordinate(4));
    let (xn, yn) = (norm2(0), norm2(4));
    let (dx, dy) = (differential(0), differential(4));
    let (dxbar, dybar) = (conj_form(&dx), conj_form(&dy));
    let (mx, my) = (maurer_cartan(0), maurer_cartan(4));
    let mixed = match cross {
        CrossTerm::Symmetrized => mx.wedge(&my).add(&my.wedge(&mx)),
        CrossTerm::Doubled => my.wedge(&mx).scale(&int(2)),
    };
    let terms = mx
        .wedge(&dxbar.right_mul(&x))
        .mul_scalar(&yn)
        .add(&my.wedge(&dybar.right_mul(&y)).mul_scalar(&xn))
        .sub(&dx.left_mul(&x.conj()).wedge(&dybar.right_mul(&y)))
        .sub(&dy.left_mul(&y.conj()).wedge(&dxbar.right_mul(&x)))
        .sub(&mixed.mul_scalar(&(&xn * &yn)))
        .sub(&my.wedge(&my).mul_scalar(&(&xn * &xn)))
        .sub(&mx.wedge(&mx).mul_scalar(&(&yn * &yn)));
    reduce_form(&im_form(&terms).mul_scalar(&s_inv_squared()))
}

/// Closed form of `A0 ^ A0`.
pub fn a0_square_closed_form(cross: CrossTerm) -> QForm {
    let (xn, yn) = (norm2(0), norm2(4));
    let (mx, my) = (maurer_cartan(0), maurer_cartan(4));
    let mixed = match cross {
        CrossTerm::Symmetrized => mx.wedge(&my).add(&my.wedge(&mx)),
        CrossTerm::Doubled => mx.wedge(&my).scale(&int(2)),
    };
    let terms = mx
        .wedge(&mx)
        .mul_scalar(&(&yn * &yn))
        .add(&my.wedge(&my).mul_scalar(&(&xn * &xn)))
        .add(&mixed.mul_scalar(&(&xn * &yn)));
    reduce_form(&im_form(&terms).mul_scalar(&s_inv_squared()))
}

/// `Im[|y|^2 x^{-1}dx ^ dx^bar x + |x|^2 y^{-1}dy ^ dy^bar y - 2 x^bar dx ^ dy^bar y] / S^2`.
pub fn a0_curvature_closed_form() -> QForm {
    let (x, y) = (coordinate(0), coordinate(4));
    let (xn, yn) = (norm2(0), norm2(4));
    let (dx, dy) = (differential(0), differential(4));
    let (dxbar, dybar) = (conj_form(&dx), conj_form(&dy));
    let terms = maurer_cartan(0)
        .wedge(&dxbar.right_mul(&x))
        .mul_scalar(&yn)
        .add(&maurer_cartan(4).wedge(&dybar.right_mul(&y)).mul_scalar(&xn))
        .sub(&dx.left_mul(&x.conj()).wedge(&dybar.right_mul(&y)).scale(&int(2)));
    reduce_form(&im_form(&terms).mul_scalar(&s_inv_squared()))
}

/// `Im[y x^{-1} dx y^bar + y dy^bar] / S`, the gauge `q = y` of `A0`.
pub fn a0_gauge_y_closed_form() -> QForm {
    let y = coordinate(4);
    let terms = maurer_cartan(0)
        .left_mul(&y)
        .right_mul(&y.conj())
        .add(&conj_form(&differential(4)).left_mul(&y));
    reduce_form(&im_form(&terms).mul_scalar(&s_inv()))
}

/// `A0` in the gauge `q = y`, regular along `y = 0`.
pub fn a0_regular_at_y_zero() -> Result<GaugeConnection> {
    let mut c = a0().gauge_transform(&ProjectiveGauge::new(coordinate(4))?)?;
    c.label = "A0:gauge-x".into();
    Ok(c)
}

/// `A0` in the gauge `q = x`, regular along `x = 0`.
pub fn a0_regular_at_x_zero() -> Result<GaugeConnection> {
    let mut c = a0().gauge_transform(&ProjectiveGauge::new(coordinate(0))?)?;
    c.label = "A0:gauge-y".into();
    Ok(c)
}

/// The quaternionic Hopf map to the affine chart, `(x, y) -> x y^{-1}`,
/// padded with zeros.
pub fn hopf_chart_map() -> Vec<RatFn> {
    let u = coordinate(0).mul(&coordinate(4).inv().expect("nonzero"));
    let mut map: Vec<RatFn> = u.c.to_vec();
    map.resize(NVARS, RatFn::zero());
    map
}

/// `B0` pulled back to `R^8` by [`hopf_chart_map`].
pub fn hopf_pullback(b: &GaugeConnection) -> Result<GaugeConnection> {
    b.pullback(&hopf_chart_map(), Chart::R8, format!("pullback:{}", b.label))
}

/// `B0 + e1 x0 dx1 / 10`, a connection on `R^4` whose curvature has both
/// dual types.
pub fn perturbed_b0() -> Result<GaugeConnection> {
    let delta = Form::term(1 << 1, Quat::new([RatFn::zero(), RatFn::var(0).scale(&rat(1, 10)), RatFn::zero(), RatFn::zero()]));
    b0().perturbed(&delta, "B0+eps")
}

/// `A0 + e1 (x0 dx1 - x1 dx0) / 10`.
pub fn perturbed_a0() -> Result<GaugeConnection> {
    let e1 = |f: RatFn| Quat::new([RatFn::zero(), f, RatFn::zero(), RatFn::zero()]);
    let delta = Form::from_terms([
        (1u8 << 1, e1(RatFn::var(0).scale(&rat(1, 10)))),
        (1u8 << 0, e1(RatFn::var(1).scale(&rat(-1, 10)))),
    ]);
    a0().perturbed(&delta, "A0+eps")
}

/// Looks up a connection by label: `B0`, `A0`, `A0:gauge-x`, `A0:gauge-y`,
/// `A0:pullback` or `pullback:B0`.
pub fn connection(label: &str) -> Result<GaugeConnection> {
    match label {
        "B0" => Ok(b0()),
        "A0" => Ok(a0()),
        "A0:gauge-x" => a0_regular_at_y_zero(),
        "A0:gauge-y" => a0_regular_at_x_zero(),
        "A0:pullback" => a0_by_pullback(),
        "pullback:B0" => hopf_pullback(&b0()),
        _ => Err(Error::UnknownLabel(label.into())),
    }
}

pub const CONNECTION_LABELS: [&str; 6] = ["B0", "A0", "A0:gauge-x", "A0:gauge-y", "A0:pullback", "pullback:B0"];

/// Anything that yields a curvature value at a point of `R^8`.
pub trait CurvatureSource: Sync {
    fn curvature_value(&self, x: &[Rational]) -> Result<QValue>;
}

impl CurvatureSource for GaugeConnection {
    fn curvature_value(&self, x: &[Rational]) -> Result<QValue> {
        self.curvature_at(x)
    }
}

impl CurvatureSource for QForm {
    fn curvature_value(&self, x: &[Rational]) -> Result<QValue> {
        self.eval(x)
    }
}

/// A curvature source plus a constant quaternion-valued 2-form.
pub struct Shifted<'a, T: ?Sized> {
    pub base: &'a T,
    pub shift: QValue,
}

impl<T: CurvatureSource + ?Sized> CurvatureSource for Shifted<'_, T> {
    fn curvature_value(&self, x: &[Rational]) -> Result<QValue> {
        Ok(self.base.curvature_value(x)?.add(&self.shift))
    }
}

/// The four real components of a quaternion-valued form.
pub fn quat_components(f: &QValue) -> [Form<Rational>; 4] {
    std::array::from_fn(|a| f.map_coeffs(|q| q.c[a].clone()))
}

/// Embeds a real form as the `e_a` component.
pub fn with_unit(f: &Form<Rational>, a: usize) -> QValue {
    f.map_coeffs(|r| Quat::basis(a).scalar_mul(r))
}

/// Self-dual and anti-self-dual parts of a 2-form on `R^4`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualDecomposition<C: Coeff> {
    pub self_dual: Form<C>,
    pub anti_self_dual: Form<C>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Duality {
    SelfDual,
    AntiSelfDual,
    Mixed,
    Zero,
}

impl<C: Coeff> DualDecomposition<C> {
    pub fn duality(&self) -> Duality {
        match (self.self_dual.is_zero(), self.anti_self_dual.is_zero()) {
            (true, true) => Duality::Zero,
            (false, true) => Duality::SelfDual,
            (true, false) => Duality::AntiSelfDual,
            (false, false) => Duality::Mixed,
        }
    }
}

/// Projects the 2-form part on `x0..x3` onto the `omega_i` basis and its
/// anti-self-dual partners.
pub fn asd_check<C: Coeff>(f: &Form<C>) -> DualDecomposition<C> {
    let project = |basis: &dyn Fn(usize) -> Form<Rational>| {
        let mut out = Form::<C>::zero();
        for i in 1..=3 {
            let w = basis(i);
            let mut pairing = C::zero_elem();
            for (b, r) in w.terms() {
                pairing = pairing.plus(&f.coefficient(*b).scale(r));
            }
            let lifted = w.map_coeffs(|r| pairing.scale(&(r / int(2))));
            out = out.add(&lifted);
        }
        out
    };
    DualDecomposition {
        self_dual: project(&|i| omega_x(i)),
        anti_self_dual: project(&|i| anti_self_dual(i, 0)),
    }
}

fn first_nonzero(label: &str, f: &Form<Rational>) -> Option<String> {
    f.sorted_terms().first().map(|(b, c)| {
        format!("{label} has {} on {:?}", rat_to_string(c), blade_indices(*b))
    })
}

/// `phi _| F` restricted to the tangent space, for every component of `F`.
pub fn g2_instanton_check<T: CurvatureSource + ?Sized>(
    f: &T,
    s: &G2Structure,
    points: &[SpherePoint],
) -> CheckOutcome {
    over_points(points, |p| {
        let m = s.metric_at(p)?;
        let phi = restrict(&s.phi_at(p), p);
        let value = f.curvature_value(p.coords())?;
        for (a, fa) in quat_components(&value).iter().enumerate() {
            let c = restrict(&Form::contract_metric(&restrict(fa, p), &phi, &m.spec.inverse), p);
            if let Some(w) = first_nonzero(&format!("phi _| F (e{a} part)"), &c) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    })
}

/// `F + *(Psi_0 ^ F) = 0` on `R^8` for every component.
pub fn spin7_instanton_check<T: CurvatureSource + ?Sized>(f: &T, points: &[Vec<Rational>]) -> CheckOutcome {
    over_vectors(points, |x| {
        let value = f.curvature_value(x)?;
        for (a, fa) in quat_components(&value).iter().enumerate() {
            if let Some(w) = first_nonzero(&format!("F + *(Psi_0 ^ F) (e{a} part)"), &spin7_defect(fa)) {
                return Ok(Some(w));
            }
        }
        Ok(None)
    })
}

/// `I1` on `R^8`: right multiplication by `e1` on both quaternion factors.
pub fn i1_r8() -> Matrix {
    complex_structure_r8(1)
}

/// `omega(X, Y) = <I1 X, Y>`.
pub fn i1_kahler_form() -> Form<Rational> {
    let m = i1_r8();
    let mut f = Form::zero();
    for i in 0..NVARS {
        for j in (i + 1)..NVARS {
            // <I1 e_i, e_j> = m[j][i]
            f = f.add(&Form::basis(&[i, j]).scale(&m[(j, i)]));
        }
    }
    f
}

/// Projector onto `T_p S^7 cap I1(T_p S^7)`.
pub fn complex_tangent_projector(p: &SpherePoint) -> Matrix {
    let x = p.coords();
    let ix = i1_r8().apply(x);
    Matrix::from_fn(NVARS, NVARS, |i, j| {
        let delta = if i == j { int(1) } else { int(0) };
        delta - &x[i] * &x[j] - &ix[i] * &ix[j]
    })
}

/// Pointwise Hermitian-Yang-Mills test on the `I1`-complex tangent
/// subspace: (i) `F(I1 X, I1 Y) = F(X, Y)` and (ii) the `I1`-trace vanishes.
pub fn hym_check<T: CurvatureSource + ?Sized>(f: &T, points: &[SpherePoint]) -> CheckOutcome {
    let i1 = i1_r8();
    over_points(points, |p| {
        let q = complex_tangent_projector(p);
        let value = f.curvature_value(p.coords())?;
        let span: Vec<Vec<Rational>> = (0..NVARS).map(|j| q.column(j)).collect();
        let turned: Vec<Vec<Rational>> = span.iter().map(|v| i1.apply(v)).collect();
        let basis: Vec<Vec<Rational>> = (0..NVARS)
            .map(|j| (0..NVARS).map(|i| if i == j { int(1) } else { int(0) }).collect())
            .collect();
        for (a, fa) in quat_components(&value).iter().enumerate() {
            for i in 0..NVARS {
                for j in (i + 1)..NVARS {
                    let lhs = fa.apply_vectors(&[turned[i].clone(), turned[j].clone()]);
                    let rhs = fa.apply_vectors(&[span[i].clone(), span[j].clone()]);
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "(i) e{a} part: F(I1 X, I1 Y) = {} but F(X, Y) = {} for columns {i}, {j}",
                            rat_to_string(&lhs),
                            rat_to_string(&rhs)
                        )));
                    }
                }
            }
            let mut trace = int(0);
            for i in 0..NVARS {
                for j in 0..NVARS {
                    if !q[(i, j)].is_zero() {
                        let v = fa.apply_vectors(&[basis[i].clone(), i1.apply(&basis[j])]);
                        trace += &q[(i, j)] * v;
                    }
                }
            }
            if !trace.is_zero() {
                return Ok(Some(format!("(ii) e{a} part: I1-trace is {}", rat_to_string(&trace))));
            }
        }
        Ok(None)
    })
}

/// Evaluates every coefficient at each point; fails at the first pole.
pub fn regularity_check(c: &GaugeConnection, points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        c.form.eval(p.coords())?;
        Ok(None)
    })
}

/// Points of the fiber `x = 0`, from points of `y = 0` with the factors swapped.
pub fn swap_factors(points: &[SpherePoint]) -> Result<Vec<SpherePoint>> {
    points
        .iter()
        .map(|p| {
            let x = p.coords();
            SpherePoint::new(x[4..].iter().chain(x[..4].iter()).cloned().collect())
        })
        .collect()
}

/// Homotopy class `kappa (kappa + 1) / 2` in `Z/12` of the pulled-back bundle.
pub fn bundle_class(kappa: u64) -> u64 {
    (kappa * (kappa + 1) / 2) % 12
}

/// Renders the first disagreement between two symbolic forms, reducing
/// each coefficient difference.
pub fn symbolic_difference(a: &QForm, b: &QForm) -> Option<String> {
    let diff = reduce_form(&a.sub(b));
    diff.sorted_terms()
        .first()
        .map(|(bl, c)| format!("difference {} on {:?}", c.render(), blade_indices(*bl)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::{random_vectors, s3_zero_points, s7_points};

    #[test]
    fn b0_curvature_and_duality() {
        let b = b0();
        let f = b.curvature();
        assert_eq!(symbolic_difference(&f, &b0_curvature_closed_form()), None);
        assert!(b.bianchi_defect(&f).is_zero());
        // at the origin dx ^ dx^bar has e1 part -2 (dx01 - dx23)
        let origin = vec![int(0); NVARS];
        let f0 = quat_components(&f.eval(&origin).unwrap());
        assert_eq!(f0[1], anti_self_dual(1, 0).scale(&int(-2)));
        assert!(f0[0].is_zero());
        assert_eq!(asd_check(&f).duality(), Duality::AntiSelfDual);
        assert_eq!(asd_check(&omega_x(1)).duality(), Duality::SelfDual);
        assert_eq!(asd_check(&anti_self_dual(1, 0)).duality(), Duality::AntiSelfDual);
        let p = perturbed_b0().unwrap();
        assert_eq!(asd_check(&p.curvature()).duality(), Duality::Mixed);
        assert!(GaugeConnection::trivial(Chart::R4).curvature().is_zero());
    }

    #[test]
    fn a0_routes_and_curvature() {
        let a = a0();
        assert_eq!(symbolic_difference(&a.form, &a0_by_pullback().unwrap().form), None);
        assert!(a.radial_contraction().is_zero());
        let f = a.curvature();
        assert_eq!(symbolic_difference(&f, &a0_curvature_closed_form()), None);
        let sym = CrossTerm::Symmetrized;
        assert_eq!(symbolic_difference(&a.exterior_derivative(), &a0_derivative_closed_form(sym)), None);
        assert_eq!(symbolic_difference(&a.square(), &a0_square_closed_form(sym)), None);
        // the doubled single-ordering versions are each off by the same
        // amount, so they do not even sum to the curvature
        let dd = a0_derivative_closed_form(CrossTerm::Doubled);
        let sd = a0_square_closed_form(CrossTerm::Doubled);
        assert!(symbolic_difference(&a.exterior_derivative(), &dd).is_some());
        assert!(symbolic_difference(&a.square(), &sd).is_some());
        assert!(symbolic_difference(&dd.add(&sd), &f).is_some());
        assert!(a.bianchi_defect(&f).is_zero());
        // jets agree with the symbolic curvature
        for p in s7_points(3, 5, true).unwrap() {
            assert_eq!(a.curvature_at(p.coords()).unwrap(), f.eval(p.coords()).unwrap());
        }
    }

    #[test]
    fn gauge_transformations() {
        let a = a0();
        let unit = ProjectiveGauge::new(Quat::real(RatFn::one())).unwrap();
        assert_eq!(a.gauge_transform(&unit).unwrap().form, a.form);
        let gx = a0_regular_at_y_zero().unwrap();
        assert_eq!(symbolic_difference(&gx.form, &a0_gauge_y_closed_form()), None);
        let g = ProjectiveGauge::new(coordinate(4)).unwrap();
        let conj = g.conjugate(&a0_curvature_closed_form()).unwrap();
        for p in s7_points(20, 3, true).unwrap() {
            assert_eq!(gx.curvature_at(p.coords()).unwrap(), conj.eval(p.coords()).unwrap());
        }
        let y0 = s3_zero_points(5, 2).unwrap();
        let x0 = swap_factors(&y0).unwrap();
        assert!(regularity_check(&gx, &y0).passed);
        assert!(!regularity_check(&gx, &x0).passed);
        assert!(!regularity_check(&a, &y0).passed);
        let gy = a0_regular_at_x_zero().unwrap();
        assert!(regularity_check(&gy, &x0).passed);
        assert!(!regularity_check(&gy, &y0).passed);
        assert!(ProjectiveGauge::new(Quat::zero()).is_err());
    }

    #[test]
    fn instanton_conditions() {
        let a = a0();
        let pts = s7_points(12, 11, true).unwrap();
        for s in [G2Structure::standard(), G2Structure::squashed()] {
            assert!(g2_instanton_check(&a, &s, &pts).passed);
            assert!(!g2_instanton_check(&perturbed_a0().unwrap(), &s, &pts).passed);
        }
        // gauge covariance under a generic linear gauge
        let q = Quat::new([
            &RatFn::constant(int(2)) + &RatFn::var(5),
            RatFn::var(0),
            RatFn::var(7).scale(&int(-1)),
            RatFn::constant(rat(1, 3)),
        ]);
        let ga = a.gauge_transform(&ProjectiveGauge::new(q).unwrap()).unwrap();
        assert!(g2_instanton_check(&ga, &G2Structure::standard(), &pts).passed);
        // pullback equivalence in both directions
        assert!(g2_instanton_check(&hopf_pullback(&b0()).unwrap(), &G2Structure::standard(), &pts).passed);
        let bad = hopf_pullback(&perturbed_b0().unwrap()).unwrap();
        assert!(!g2_instanton_check(&bad, &G2Structure::standard(), &pts).passed);
        assert!(!g2_instanton_check(&bad, &G2Structure::squashed(), &pts).passed);

        let f = a0_curvature_closed_form();
        let vecs = random_vectors(NVARS, 8, 4);
        assert!(spin7_instanton_check(&f, &vecs).passed);
        assert!(spin7_instanton_check(&QForm::zero(), &vecs).passed);
        let kahler = Shifted { base: &QForm::zero(), shift: with_unit(&crate::structures::kahler_form(), 1) };
        let out = spin7_instanton_check(&kahler, &vecs);
        assert!(!out.passed);
        let defect = spin7_defect(&crate::structures::kahler_form());
        assert_eq!(defect, crate::structures::kahler_form().scale(&int(4)));
    }

    #[test]
    fn hermitian_yang_mills() {
        let f = a0_curvature_closed_form();
        let pts = s7_points(10, 8, true).unwrap();
        assert!(hym_check(&f, &pts).passed);
        let gamma = Form::basis(&[0, 4]);
        let twisted = gamma.sub(&gamma.linear_transform(&i1_r8()));
        let injected = Shifted { base: &f, shift: with_unit(&twisted, 2) };
        let out = hym_check(&injected, &pts);
        assert!(out.witness.unwrap().detail.starts_with("(i)"));
        let traced = Shifted { base: &QForm::zero(), shift: with_unit(&i1_kahler_form(), 1) };
        let out = hym_check(&traced, &pts);
        assert!(out.witness.unwrap().detail.starts_with("(ii)"));
    }

    #[test]
    fn bundle_classes() {
        assert_eq!(bundle_class(0), 0);
        assert_eq!(bundle_class(1), 1);
        assert_eq!(bundle_class(3), 6);
        assert_eq!(bundle_class(4), 10);
        assert_eq!(bundle_class(7), 4);
        for k in 0..50u64 {
            assert_eq!(bundle_class(k + 24), bundle_class(k));
        }
    }

    #[test]
    fn registry_labels() {
        for l in CONNECTION_LABELS {
            assert_eq!(connection(l).unwrap().label, l);
        }
        assert!(matches!(connection("nope"), Err(Error::UnknownLabel(_))));
        assert!(GaugeConnection::new("bad", Chart::R4, Form::term(1, Quat::real(RatFn::one()))).is_err());
    }
}

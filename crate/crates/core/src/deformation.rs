//! Linear deformations `alpha_M = (M r) _| F_A` of the standard instanton,
//! their Coulomb residuals, the deformation operator at sphere points, and
//! the horizontal operator on the fiber `y = 0`.

use num_traits::Zero;

use crate::check::{over_points, CheckOutcome};
use crate::error::{Error, Result};
use crate::exact::{format_point, int, Coeff, Jet, LinearFamily, Matrix, RatFn, Rational, NVARS};
use crate::exterior::{blade_indices, Form};
use crate::instanton::{a0_curvature_closed_form, quat_components, GaugeConnection, QForm, QValue};
use crate::quaternion::{complex_structure_r8, fueter_basis, left_mult, Quat};
use crate::sphere::{restrict, JetExpand, JetValue, PointCalculus, SpherePoint, TangentFrame, Trace};
use crate::structures::{ambient_coords, is_spin7, phi_std, zeta, G2Structure, StructureKind};

/// Where a deformation matrix comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeformKind {
    W,
    WI1,
    WI2,
    Sp2,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformMatrix {
    pub m: Matrix,
    pub kind: DeformKind,
    pub label: String,
}

/// A gauge-algebra valued 1-form. Linear candidates remember `M`, so that
/// pointwise work can rebuild them from jets of the connection.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformCandidate {
    pub alpha: QForm,
    /// `M` when `alpha = (M r) _| F`, possibly followed by `image`.
    pub matrix: Option<Matrix>,
    /// `I_i` applied afterwards, as `alpha o I_i`.
    pub image: Option<usize>,
    pub label: String,
}

/// `sum_{i<j} M_ij dx^i ^ dx^j`.
pub fn matrix_two_form(m: &Matrix) -> Form<Rational> {
    let mut f = Form::zero();
    for i in 0..NVARS {
        for j in (i + 1)..NVARS {
            if !m[(i, j)].is_zero() {
                f = f.add(&Form::basis(&[i, j]).scale(&m[(i, j)]));
            }
        }
    }
    f
}

fn unit_matrix(k: usize) -> Matrix {
    let mut m = Matrix::zeros(NVARS, NVARS);
    m[(k / NVARS, k % NVARS)] = int(1);
    m
}

/// Antisymmetric 8x8 matrices commuting with `I1`, `I2`, `I3`, by exact
/// nullspace.
pub fn sp2_lie_basis() -> Vec<DeformMatrix> {
    let structures: Vec<Matrix> = (1..=3).map(complex_structure_r8).collect();
    // rows: M + M^T and [M, I_i], flattened
    let images: Vec<Vec<Rational>> = (0..NVARS * NVARS)
        .map(|k| {
            let m = unit_matrix(k);
            let mut v = (&m + &m.transpose()).entries().to_vec();
            for s in &structures {
                v.extend(m.commutator(s).entries().iter().cloned());
            }
            v
        })
        .collect();
    let op = Matrix::from_fn(images[0].len(), NVARS * NVARS, |r, c| images[c][r].clone());
    op.nullspace()
        .into_iter()
        .enumerate()
        .map(|(k, v)| DeformMatrix {
            m: Matrix::from_fn(NVARS, NVARS, |i, j| v[i * NVARS + j].clone()),
            kind: DeformKind::Sp2,
            label: format!("sp2:{k}"),
        })
        .collect()
}

/// Block matrix of `(x, y) -> (a x + z^bar y, z x - a y)`.
pub fn w_matrix(a: &Rational, z: &Quat<Rational>) -> Matrix {
    let lz = left_mult(z);
    let lzbar = left_mult(&z.conj());
    Matrix::from_fn(NVARS, NVARS, |r, c| match (r / 4, c / 4) {
        (0, 0) if r == c => a.clone(),
        (1, 1) if r == c => -a.clone(),
        (0, 1) => lzbar[(r % 4, c % 4)].clone(),
        (1, 0) => lz[(r % 4, c % 4)].clone(),
        _ => int(0),
    })
}

/// `a = 1`, then `z = e0..e3`.
pub fn w_basis() -> Vec<DeformMatrix> {
    let mut out = vec![DeformMatrix {
        m: w_matrix(&int(1), &Quat::zero()),
        kind: DeformKind::W,
        label: "W:a".into(),
    }];
    for k in 0..4 {
        out.push(DeformMatrix {
            m: w_matrix(&int(0), &Quat::basis(k)),
            kind: DeformKind::W,
            label: format!("W:z{k}"),
        });
    }
    out
}

/// `W`, `W I1` and `W I2`.
pub fn fifteen_basis() -> Vec<DeformMatrix> {
    let w = w_basis();
    let mut out = w.clone();
    for (i, kind) in [(1, DeformKind::WI1), (2, DeformKind::WI2)] {
        let ii = complex_structure_r8(i);
        out.extend(w.iter().map(|d| DeformMatrix {
            m: &d.m * &ii,
            kind,
            label: format!("{}I{i}", d.label),
        }));
    }
    out
}

/// Rank of a list of matrices.
pub fn matrix_rank(ms: &[DeformMatrix]) -> usize {
    LinearFamily::from_matrices(&ms.iter().map(|d| d.m.clone()).collect::<Vec<_>>()).rank()
}

/// Whether the 2-form of `m` lies in Lie(Spin(7)).
pub fn in_spin7(m: &Matrix) -> bool {
    is_spin7(&matrix_two_form(m))
}

/// `alpha_M = (M r) _| F`.
pub fn linear_deformation(m: &DeformMatrix, f: &QForm) -> DeformCandidate {
    let r = ambient_coords();
    let x: Vec<RatFn> = (0..NVARS)
        .map(|i| {
            (0..NVARS).fold(RatFn::zero(), |acc, j| {
                if m.m[(i, j)].is_zero() {
                    acc
                } else {
                    &acc + &r[j].scale(&m.m[(i, j)])
                }
            })
        })
        .collect();
    DeformCandidate {
        alpha: f.interior(&x),
        matrix: Some(m.m.clone()),
        image: None,
        label: m.label.clone(),
    }
}

/// `r _| alpha`, zero for deformations of a conical connection.
pub fn radial_contraction(c: &DeformCandidate) -> QForm {
    let r = ambient_coords();
    c.alpha.interior(&r).map_coeffs(|q| q.map(|v| v.reduce()))
}

fn jet_values(f: &Form<Quat<Jet>>) -> QValue {
    f.map_coeffs(|c| c.value_at())
}

/// Flat `R^8` codifferential `-sum_k (d_k alpha_k + [A_k, alpha_k])` at `x`.
pub fn ambient_codifferential(a: &GaugeConnection, alpha: &QForm, x: &[Rational]) -> Result<Quat<Rational>> {
    let q = Jet::coordinates(x, 1);
    let ja = a.form.try_map_coeffs(|c| c.expand(&q))?;
    let jal = alpha.try_map_coeffs(|c| c.expand(&q))?;
    let mut out = Quat::<Rational>::zero();
    for k in 0..NVARS {
        let ak = ja.coefficient(1 << k);
        let alk = jal.coefficient(1 << k);
        let term = alk.partial(k).add(&ak.bracket(&alk)).value_at();
        out = out.sub(&term);
    }
    Ok(out)
}

/// `-sum_{ik} M_ik F_ik` at `x`.
pub fn coulomb_closed_form(m: &Matrix, f: &QValue) -> Quat<Rational> {
    let mut out = Quat::<Rational>::zero();
    for i in 0..NVARS {
        for k in (i + 1)..NVARS {
            let c = &m[(i, k)] - &m[(k, i)];
            if !c.is_zero() {
                out = out.sub(&f.component(&[i, k]).scalar_mul(&c));
            }
        }
    }
    out
}

/// Both routes to the `R^8` Coulomb residual of a linear candidate at `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoulombResidual {
    pub direct: Quat<Rational>,
    pub closed: Quat<Rational>,
}

pub fn coulomb_residual(
    a: &GaugeConnection,
    f: &QForm,
    cand: &DeformCandidate,
    x: &[Rational],
) -> Result<CoulombResidual> {
    let m = cand
        .matrix
        .as_ref()
        .filter(|_| cand.image.is_none())
        .ok_or_else(|| Error::Invalid(format!("{} is not a linear candidate", cand.label)))?;
    Ok(CoulombResidual {
        direct: ambient_codifferential(a, &cand.alpha, x)?,
        closed: coulomb_closed_form(m, &f.eval(x)?),
    })
}

/// The two Coulomb routes agree at every point.
pub fn coulomb_routes_check(a: &GaugeConnection, f: &QForm, cand: &DeformCandidate, points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        let r = coulomb_residual(a, f, cand, p.coords())?;
        Ok((r.direct != r.closed).then(|| {
            format!("direct residual {} but closed form {}", r.direct.render(), r.closed.render())
        }))
    })
}

/// Value of the deformation operator on `(0, alpha)` at a point: the
/// sphere codifferential and `phi _| D_A alpha`, restricted.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorValue {
    pub scalar: Quat<Rational>,
    pub one_form: QValue,
}

impl OperatorValue {
    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero_elem() && self.one_form.is_zero()
    }
}

/// Jets of a connection and its curvature at one point, shared by every
/// candidate evaluated there.
pub struct PointJets<'a> {
    pub pc: PointCalculus<'a>,
    /// Connection value.
    pub a: QValue,
    /// Curvature, first order.
    pub f: Form<Quat<Jet>>,
    /// Round `phi` restricted to the tangent space.
    pub phi: Form<Rational>,
}

impl<'a> PointJets<'a> {
    pub fn new(a: &GaugeConnection, p: &'a SpherePoint) -> Result<Self> {
        let pc = PointCalculus::new(p, 1);
        let q2 = Jet::coordinates(p.coords(), 2);
        let a2 = a.form.try_map_coeffs(|c| c.expand(&q2))?;
        let a1 = pc.jet_form(&a.form)?;
        let f = a2.d().add(&a1.wedge(&a1));
        let a = jet_values(&a1);
        let phi = restrict(&phi_std(p.coords()), p);
        Ok(PointJets { pc, a, f, phi })
    }

    /// First-order jets of a candidate built from this connection.
    pub fn candidate(&self, c: &DeformCandidate) -> Result<Form<Quat<Jet>>> {
        let mut alpha = match &c.matrix {
            Some(m) => {
                let x: Vec<Jet> = (0..NVARS)
                    .map(|i| {
                        (0..NVARS).fold(Jet::constant(int(0)), |acc, j| {
                            if m[(i, j)].is_zero() {
                                acc
                            } else {
                                acc.add(&self.pc.q[j].scale(&m[(i, j)]))
                            }
                        })
                    })
                    .collect();
                self.f.interior(&x)
            }
            None => self.pc.jet_form(&c.alpha)?,
        };
        if let (Some(i), Some(_)) = (c.image, &c.matrix) {
            alpha = alpha.linear_transform(&complex_structure_r8(i));
        }
        Ok(alpha)
    }

    /// `D_A alpha = d alpha + A ^ alpha + alpha ^ A` at the point.
    pub fn exterior_derivative(&self, alpha: &Form<Quat<Jet>>) -> QValue {
        let v = jet_values(alpha);
        jet_values(&alpha.d()).add(&self.a.wedge(&v)).add(&v.wedge(&self.a))
    }

    /// Sphere codifferential `D_A^* alpha = -tr P (nabla alpha)` at the point,
    /// with `nabla_z alpha_x = d_z alpha_x - delta_zx (q . alpha) + [A_z, alpha_x]`.
    pub fn codifferential(&self, alpha: &Form<Quat<Jet>>) -> Quat<Rational> {
        let p = self.pc.point.coords();
        let proj = &self.pc.frame.projector;
        let vals: Vec<Quat<Rational>> = (0..NVARS).map(|x| alpha.coefficient(1 << x).value_at()).collect();
        let radial = (0..NVARS).fold(Quat::zero(), |s, m| s.plus(&vals[m].scalar_mul(&p[m])));
        let mut out = Quat::zero();
        for z in 0..NVARS {
            let az = self.a.coefficient(1 << z);
            for x in 0..NVARS {
                let w = &proj[(z, x)];
                if w.is_zero() {
                    continue;
                }
                let mut t = alpha.coefficient(1 << x).partial(z).value_at();
                if x == z {
                    t = t.minus(&radial);
                }
                t = t.plus(&az.times(&vals[x])).minus(&vals[x].times(&az));
                out = out.minus(&t.scalar_mul(w));
            }
        }
        out
    }

    /// Deformation operator on `(0, alpha)` for the round structure.
    pub fn operator(&self, alpha: &Form<Quat<Jet>>) -> OperatorValue {
        // tangential forms need no raising: `P` is the identity on them
        let beta = self.exterior_derivative(alpha).linear_transform(&self.pc.frame.projector);
        let mut one_form = QValue::zero();
        for (k, part) in quat_components(&beta).iter().enumerate() {
            let c = Form::contract_first(part, &self.phi);
            one_form = one_form.add(&c.map_coeffs(|r| Quat::basis(k).scalar_mul(r)));
        }
        OperatorValue {
            scalar: self.codifferential(alpha),
            one_form,
        }
    }
}

/// `phi _| beta` restricted, for each component of a quaternion-valued 2-form.
pub fn phi_contraction(beta: &QValue, phi: &Form<Rational>, inverse: &Matrix, p: &SpherePoint) -> QValue {
    let parts = quat_components(beta);
    let mut out = QValue::zero();
    for (k, part) in parts.iter().enumerate() {
        let c = restrict(&Form::contract_metric(&restrict(part, p), phi, inverse), p);
        out = out.add(&c.map_coeffs(|r| Quat::basis(k).scalar_mul(r)));
    }
    out
}

/// `(D_A^* alpha, phi _| D_A alpha)` at `p`. Only the round structure is
/// supported, since the codifferential uses the round metric.
pub fn deform_operator_eval(
    a: &GaugeConnection,
    cand: &DeformCandidate,
    s: &G2Structure,
    p: &SpherePoint,
) -> Result<OperatorValue> {
    if s.kind != StructureKind::Standard {
        return Err(Error::UnsupportedMetric(format!(
            "deformation operator is implemented for the round metric, not {}",
            s.label
        )));
    }
    let pj = PointJets::new(a, p)?;
    Ok(pj.operator(&pj.candidate(cand)?))
}

fn describe_value(v: &OperatorValue) -> String {
    if !v.scalar.is_zero_elem() {
        return format!("d^* alpha = {}", v.scalar.render());
    }
    v.one_form
        .sorted_terms()
        .first()
        .map(|(b, c)| format!("phi _| D alpha has {} on {:?}", c.render(), blade_indices(*b)))
        .unwrap_or_default()
}

/// Every candidate is annihilated by the deformation operator at every
/// point. Candidates must have been built from `a`.
pub fn kernel_check(a: &GaugeConnection, cands: &[DeformCandidate], points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        let pj = PointJets::new(a, p)?;
        for c in cands {
            let v = pj.operator(&pj.candidate(c)?);
            if !v.is_zero() {
                return Ok(Some(format!("{}: {}", c.label, describe_value(&v))));
            }
        }
        Ok(None)
    })
}

/// Some point where each candidate has nonzero sphere codifferential.
pub fn coulomb_failure_check(a: &GaugeConnection, cands: &[DeformCandidate], points: &[SpherePoint]) -> CheckOutcome {
    let mut pending: Vec<&DeformCandidate> = cands.iter().collect();
    for p in points {
        let pj = match PointJets::new(a, p) {
            Ok(pj) => pj,
            Err(e) => return CheckOutcome::fail(points.len(), None, e.to_string()),
        };
        let mut still = Vec::new();
        for c in pending {
            match pj.candidate(c) {
                Ok(alpha) if pj.codifferential(&alpha).is_zero_elem() => still.push(c),
                Ok(_) => {}
                Err(e) => return CheckOutcome::fail(points.len(), None, e.to_string()),
            }
        }
        pending = still;
        if pending.is_empty() {
            return CheckOutcome::pass(points.len());
        }
    }
    CheckOutcome::fail(
        points.len(),
        None,
        format!("{} has zero codifferential at every point", pending[0].label),
    )
}

/// Rank of the matrix whose rows are candidate values at the points,
/// flattened over tangent direction and algebra component.
pub fn independence_rank(cands: &[DeformCandidate], points: &[SpherePoint]) -> Result<usize> {
    let mut rows = Vec::with_capacity(cands.len());
    for c in cands {
        let mut row = Vec::with_capacity(points.len() * NVARS * 4);
        for p in points {
            let v = c.alpha.eval(p.coords())?;
            for k in 0..NVARS {
                let q = v.coefficient(1 << k);
                row.extend(q.c.iter().cloned());
            }
        }
        rows.push(row);
    }
    let dim = points.len() * NVARS * 4;
    Ok(LinearFamily::from_vectors(dim, rows).rank())
}

/// `alpha o I_i`, the pointwise action of a complex structure on 1-forms.
pub fn complex_image(c: &DeformCandidate, i: usize) -> DeformCandidate {
    DeformCandidate {
        alpha: c.alpha.linear_transform(&complex_structure_r8(i)),
        matrix: c.matrix.clone().filter(|_| c.image.is_none()),
        image: if c.image.is_none() && c.matrix.is_some() { Some(i) } else { None },
        label: format!("I{i}({})", c.label),
    }
}

/// The fifteen linear deformations of `A0`.
pub fn fifteen_candidates() -> Vec<DeformCandidate> {
    let f = a0_curvature_closed_form();
    fifteen_basis().iter().map(|m| linear_deformation(m, &f)).collect()
}

pub fn sp2_candidates() -> Vec<DeformCandidate> {
    let f = a0_curvature_closed_form();
    sp2_lie_basis().iter().map(|m| linear_deformation(m, &f)).collect()
}

/// The `W` deformations and their `I1`, `I2` images.
pub fn complex_family() -> Vec<DeformCandidate> {
    let f = a0_curvature_closed_form();
    let w: Vec<DeformCandidate> = w_basis().iter().map(|m| linear_deformation(m, &f)).collect();
    let mut out = w.clone();
    for i in [1, 2] {
        out.extend(w.iter().map(|c| complex_image(c, i)));
    }
    out
}

/// `ebar^j = dy^j - sum_i (dy^j _| zeta_i) zeta_i`, a horizontal frame near `y = 0`.
pub fn ebar(j: usize) -> Form<RatFn> {
    let r = ambient_coords();
    let mut f = Form::<RatFn>::dx(4 + j);
    for i in 1..=3 {
        let z = zeta(i, &r);
        let c = z.coefficient(1 << (4 + j));
        f = f.sub(&z.mul_scalar(&c));
    }
    f
}

/// `x^i L_ij ebar^j`.
pub fn fueter_section(l: &Matrix) -> Form<RatFn> {
    let mut f = Form::zero();
    for i in 0..4 {
        for j in 0..4 {
            if !l[(i, j)].is_zero() {
                f = f.add(&ebar(j).mul_scalar(&RatFn::var(i).scale(&l[(i, j)])));
            }
        }
    }
    f
}

/// `(phi _| db)^h` at a point of the fiber `y = 0`.
pub fn horiz_op_apply(b: &Form<RatFn>, p: &SpherePoint) -> Result<Form<Rational>> {
    if !p.y_is_zero() {
        return Err(Error::Invalid("horizontal operator is evaluated on y = 0".into()));
    }
    let frame = TangentFrame::at(p);
    let phi = restrict(&phi_std(p.coords()), p);
    let db = restrict(&b.d().eval(p.coords())?, p);
    let c = Form::contract_metric(&db, &phi, &frame.projector);
    Ok(c.linear_transform(&frame.horizontal_projector))
}

/// Solves `phi_0(x^i L_ij ebar^j) = 0` over all 4x4 matrices `L` using the
/// given points of `y = 0`; vectors are row-major entries of `L`.
pub fn fueter_kernel_solve(points: &[SpherePoint]) -> Result<LinearFamily> {
    let mut columns = Vec::with_capacity(16);
    for k in 0..16 {
        let mut l = Matrix::zeros(4, 4);
        l[(k / 4, k % 4)] = int(1);
        let sec = fueter_section(&l);
        let mut col = Vec::new();
        for p in points {
            let v = horiz_op_apply(&sec, p)?;
            col.extend((0..NVARS).map(|i| v.coefficient(1 << i)));
        }
        columns.push(col);
    }
    let op = Matrix::from_fn(columns[0].len(), 16, |r, c| columns[c][r].clone());
    Ok(LinearFamily::from_vectors(16, op.nullspace()))
}

/// Span of the Fueter maps as row-major entry vectors.
pub fn fueter_span() -> LinearFamily {
    LinearFamily::from_matrices(&fueter_basis())
}

/// `3 (8 kappa - 3)`.
pub fn dimension_formula(kappa: u64) -> u64 {
    assert!(kappa >= 1, "charge must be positive");
    3 * (8 * kappa - 3)
}

/// `phi_0(ebar^j) = ebar^j` on the given points of `y = 0`.
pub fn ebar_eigen_check(points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        for j in 0..4 {
            let lhs = horiz_op_apply(&ebar(j), p)?;
            let rhs = restrict(&ebar(j).eval(p.coords())?, p);
            if lhs != rhs {
                return Ok(Some(format!(
                    "phi_0(ebar^{j}) - ebar^{j} = {}",
                    lhs.sub(&rhs).render()
                )));
            }
        }
        Ok(None)
    })
}

/// Kernel membership of the `W` deformations and their `I1`, `I2` images,
/// plus the rank of those fifteen together with the fifteen linear ones.
pub fn ker_phi_decomposition_check(a: &GaugeConnection, points: &[SpherePoint]) -> CheckOutcome {
    let family = complex_family();
    let kernel = kernel_check(a, &family, points);
    if !kernel.passed {
        return kernel;
    }
    let mut all = fifteen_candidates();
    all.extend(family);
    match independence_rank(&all, points) {
        Ok(15) => CheckOutcome::pass(points.len()),
        Ok(r) => CheckOutcome::fail(points.len(), None, format!("combined family has rank {r}, not 15")),
        Err(e) => CheckOutcome::fail(points.len(), None, e.to_string()),
    }
}

/// Some `I3` image of a `W` deformation leaves the kernel.
pub fn i3_control_check(a: &GaugeConnection, points: &[SpherePoint]) -> CheckOutcome {
    let f = a0_curvature_closed_form();
    let cands: Vec<DeformCandidate> = w_basis()
        .iter()
        .map(|m| complex_image(&linear_deformation(m, &f), 3))
        .collect();
    for p in points {
        let found = PointJets::new(a, p).and_then(|pj| {
            for c in &cands {
                if !pj.operator(&pj.candidate(c)?).is_zero() {
                    return Ok(true);
                }
            }
            Ok(false)
        });
        match found {
            Ok(true) => return CheckOutcome::pass(points.len()),
            Ok(false) => {}
            Err(e) => return CheckOutcome::fail(points.len(), Some(format_point(p.coords())), e.to_string()),
        }
    }
    CheckOutcome::fail(points.len(), None, "every I3 image is in the kernel at every point")
}

/// `[F _| alpha]_i = sum_j [F_ij, alpha_j]`, restricted.
pub fn curvature_bracket(f: &QValue, alpha: &QValue, p: &SpherePoint) -> QValue {
    let mut out = QValue::zero();
    for i in 0..NVARS {
        let mut c = Quat::<Rational>::zero();
        for j in 0..NVARS {
            if i != j {
                c = c.add(&f.component(&[i, j]).bracket(&alpha.coefficient(1 << j)));
            }
        }
        out = out.add(&Form::<Rational>::dx(i).map_coeffs(|r| c.scalar_mul(r)));
    }
    out.linear_transform(&p.projector())
}

/// `2 phi _| D_A alpha + nabla^* nabla alpha + 6 alpha - 2 [F _| alpha]` at `p`,
/// the round-sphere Weitzenboeck expression for the square of the operator.
pub fn weitzenbock_rhs(a: &GaugeConnection, cand: &DeformCandidate, p: &SpherePoint) -> Result<QValue> {
    let pj = PointJets::new(a, p)?;
    let op = pj.operator(&pj.candidate(cand)?);
    let pc = PointCalculus::new(p, 2);
    let lap = pc.rough_laplacian(&cand.alpha, 1, Trace::Full, Some(&a.form))?;
    let alpha = cand.alpha.eval(p.coords())?.linear_transform(&p.projector());
    let f = jet_values(&pj.f);
    let br = curvature_bracket(&f, &alpha, p);
    let two = int(2);
    Ok(op
        .one_form
        .map_coeffs(|q| q.scalar_mul(&two))
        .add(&lap)
        .add(&alpha.map_coeffs(|q| q.scalar_mul(&int(6))))
        .sub(&br.map_coeffs(|q| q.scalar_mul(&two))))
}

/// For candidates in the kernel the square of the operator vanishes, so the
/// Weitzenboeck expression must vanish too.
pub fn weitzenbock_check(a: &GaugeConnection, cands: &[DeformCandidate], points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        for c in cands {
            let r = weitzenbock_rhs(a, c, p)?;
            if !r.is_zero() {
                return Ok(Some(format!("{}: Weitzenboeck expression {}", c.label, r.render())));
            }
        }
        Ok(None)
    })
}

/// Looks up a candidate: `15fam:k`, `sp2:k`.
pub fn candidate(label: &str) -> Result<DeformCandidate> {
    let parse = |rest: &str, n: usize| -> Result<usize> {
        rest.parse::<usize>()
            .ok()
            .filter(|k| *k < n)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    };
    if let Some(rest) = label.strip_prefix("15fam:") {
        let k = parse(rest, 15)?;
        return Ok(fifteen_candidates().swap_remove(k));
    }
    if let Some(rest) = label.strip_prefix("sp2:") {
        let k = parse(rest, 10)?;
        return Ok(sp2_candidates().swap_remove(k));
    }
    Err(Error::UnknownLabel(label.into()))
}

/// Every curvature value of `A0` at the points lies in the span of Lie(Sp(2)).
pub fn curvature_in_sp2_check(points: &[SpherePoint]) -> CheckOutcome {
    let f = a0_curvature_closed_form();
    let span = LinearFamily::from_vectors(
        256,
        sp2_lie_basis()
            .iter()
            .map(|d| form_vector(&matrix_two_form(&d.m)))
            .collect(),
    );
    over_points(points, |p| {
        let v = f.eval(p.coords())?;
        for (k, part) in quat_components(&v).iter().enumerate() {
            if !span.span_contains(&form_vector(part)) {
                return Ok(Some(format!("e{k} part of F is outside Lie(Sp(2))")));
            }
        }
        Ok(None)
    })
}

fn form_vector(f: &Form<Rational>) -> Vec<Rational> {
    (0..=255u8).map(|b| f.coefficient(b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instanton::{a0, a0_regular_at_y_zero, coordinate, ProjectiveGauge};
    use crate::sphere::{s3_zero_points, s7_points};
    use proptest::prelude::*;

    fn points(n: usize) -> Vec<SpherePoint> {
        s7_points(n, 3, true).unwrap()
    }

    #[test]
    fn matrix_families() {
        let sp2 = sp2_lie_basis();
        assert_eq!(sp2.len(), 10);
        for d in &sp2 {
            assert!(d.m.is_antisymmetric());
            assert!(d.m.commutator(&complex_structure_r8(3)).is_zero());
        }
        assert_eq!(matrix_rank(&w_basis()), 5);
        assert!(w_basis().iter().all(|d| d.m.is_symmetric() && d.m.trace().is_zero()));
        let fifteen = fifteen_basis();
        assert_eq!(matrix_rank(&fifteen), 15);
        assert!(fifteen.iter().filter(|d| d.kind != DeformKind::W).all(|d| in_spin7(&d.m)));
    }

    #[test]
    fn linear_deformations_are_tangential() {
        let f = a0_curvature_closed_form();
        let zero = DeformMatrix { m: Matrix::zeros(8, 8), kind: DeformKind::Other, label: "0".into() };
        assert!(linear_deformation(&zero, &f).alpha.is_zero());
        let id = DeformMatrix { m: Matrix::identity(8), kind: DeformKind::Other, label: "id".into() };
        assert!(radial_contraction(&linear_deformation(&id, &f)).is_zero());
        let fam = fifteen_candidates();
        assert!(!fam[0].alpha.is_zero());
        for c in &fam {
            assert!(radial_contraction(c).is_zero(), "{}", c.label);
        }
    }

    #[test]
    fn coulomb_residuals() {
        let a = a0();
        let f = a0_curvature_closed_form();
        let pts = points(2);
        for c in fifteen_candidates() {
            let r = coulomb_residual(&a, &f, &c, pts[0].coords()).unwrap();
            assert!(r.direct.is_zero_elem() && r.closed.is_zero_elem(), "{}", c.label);
        }
        for c in sp2_candidates().iter().take(3) {
            assert!(coulomb_routes_check(&a, &f, c, &pts).passed);
            let r = coulomb_residual(&a, &f, c, pts[0].coords()).unwrap();
            assert!(!r.direct.is_zero_elem(), "{}", c.label);
        }
        assert!(coulomb_failure_check(&a, &sp2_candidates(), &pts).passed);
        let image = complex_image(&fifteen_candidates()[0], 3);
        assert!(matches!(coulomb_residual(&a, &f, &image, pts[0].coords()), Err(Error::Invalid(_))));
    }

    #[test]
    fn jets_match_symbolic_candidates() {
        let a = a0();
        let p = &points(1)[0];
        let pj = PointJets::new(&a, p).unwrap();
        let c = complex_image(&fifteen_candidates()[6], 1);
        let symbolic = DeformCandidate { matrix: None, image: None, ..c.clone() };
        assert_eq!(
            jet_values(&pj.candidate(&c).unwrap()),
            jet_values(&pj.candidate(&symbolic).unwrap())
        );
    }

    #[test]
    fn fifteen_family_in_kernel() {
        let a = a0();
        let pts = points(3);
        assert!(kernel_check(&a, &fifteen_candidates(), &pts).passed);
        let v = deform_operator_eval(&a, &sp2_candidates()[0], &G2Structure::standard(), &pts[0]).unwrap();
        assert!(!v.scalar.is_zero_elem());
        let sq = G2Structure::squashed();
        assert!(matches!(
            deform_operator_eval(&a, &fifteen_candidates()[0], &sq, &pts[0]),
            Err(Error::UnsupportedMetric(_))
        ));
    }

    #[test]
    fn independence_ranks() {
        let pts = points(8);
        let fam = fifteen_candidates();
        assert_eq!(independence_rank(&fam, &pts).unwrap(), 15);
        let mut doubled = fam.clone();
        doubled.extend(fam.iter().cloned());
        assert_eq!(independence_rank(&doubled, &pts).unwrap(), 15);
        assert!(independence_rank(&fam, &pts[..3]).unwrap() <= 15);
        assert!(independence_rank(&sp2_candidates(), &pts).unwrap() > 0);
        assert_eq!(dimension_formula(1), 15);
        assert_eq!(dimension_formula(2), 39);
    }

    #[test]
    fn complex_images() {
        let a = a0();
        assert!(ker_phi_decomposition_check(&a, &points(8)).passed);
        assert!(i3_control_check(&a, &points(2)).passed);
    }

    #[test]
    fn gauge_covariance_of_kernel() {
        let g = a0_regular_at_y_zero().unwrap();
        let q = ProjectiveGauge::new(coordinate(4)).unwrap();
        let cands: Vec<DeformCandidate> = fifteen_candidates()
            .iter()
            .take(2)
            .map(|c| DeformCandidate {
                alpha: q.conjugate(&c.alpha).unwrap(),
                matrix: None,
                image: None,
                label: format!("g({})", c.label),
            })
            .collect();
        assert!(kernel_check(&g, &cands, &points(1)).passed);
    }

    #[test]
    fn weitzenbock_consequence() {
        let a = a0();
        let fam = fifteen_candidates();
        assert!(weitzenbock_check(&a, &[fam[0].clone(), fam[7].clone()], &points(1)).passed);
        let zero = DeformCandidate { alpha: QForm::zero(), matrix: None, image: None, label: "0".into() };
        assert!(weitzenbock_check(&a, &[zero], &points(1)).passed);
    }

    #[test]
    fn fueter_kernel() {
        let s3 = s3_zero_points(4, 1).unwrap();
        assert!(ebar_eigen_check(&s3).passed);
        let k = fueter_kernel_solve(&s3).unwrap();
        assert_eq!(k.rank(), 12);
        assert!(k.same_span(&fueter_span()));
        let mut with_i3 = fueter_span();
        with_i3.push(LinearFamily::from_matrices(&[crate::quaternion::complex_structure(3)]).members()[0].clone());
        assert_eq!(with_i3.rank(), 13);
        let p = &s3[0];
        assert!(!horiz_op_apply(&fueter_section(&crate::quaternion::complex_structure(3)), p).unwrap().is_zero());
        assert!(horiz_op_apply(&fueter_section(&Matrix::identity(4)), p).unwrap().is_zero());
        assert!(matches!(horiz_op_apply(&ebar(0), &points(1)[0]), Err(Error::Invalid(_))));
    }

    #[test]
    fn curvature_lies_in_sp2() {
        assert!(curvature_in_sp2_check(&points(3)).passed);
    }

    #[test]
    fn candidate_registry() {
        assert_eq!(candidate("15fam:3").unwrap().label, fifteen_candidates()[3].label);
        assert!(candidate("sp2:9").is_ok());
        assert!(matches!(candidate("sp2:10"), Err(Error::UnknownLabel(_))));
        assert!(matches!(candidate("nope"), Err(Error::UnknownLabel(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn symmetric_matrices_have_no_coulomb_term(entries in prop::collection::vec(-5i64..5, 36)) {
            let mut m = Matrix::zeros(8, 8);
            let mut it = entries.iter();
            for i in 0..8 {
                for j in i..8 {
                    if let Some(v) = it.next() {
                        m[(i, j)] = int(*v);
                        m[(j, i)] = int(*v);
                    }
                }
            }
            let f = a0_curvature_closed_form().eval(points(1)[0].coords()).unwrap();
            prop_assert!(coulomb_closed_form(&m, &f).is_zero_elem());
        }
    }
}

//! Model Spin(7) and G2 forms, their Lie algebras, and G2-structures on `S^7`
//! built from the Hopf-invariant frames.

use num_traits::{Signed, Zero};

use crate::check::{over_points, CheckOutcome};
use crate::error::{Error, Result};
use crate::exact::{int, rat, rational_cbrt, LinearFamily, Matrix, RatFn, Rational, Scalar, NVARS};
use crate::exterior::{blade_degree, contraction_weight, Blade, Form, MetricSpec, R7, R8};
use crate::quaternion::fueter_basis;
use crate::sphere::{restrict, restricted_difference, SpherePoint, TangentFrame};

type F = Form<Rational>;

/// Self-dual 2-form `omega_i` on the x block (`offset = 0`) or y block (`offset = 4`).
pub fn omega_block(i: usize, offset: usize) -> F {
    let o = offset;
    match i {
        1 => F::basis(&[o, o + 1]).add(&F::basis(&[o + 2, o + 3])),
        2 => F::basis(&[o, o + 2]).sub(&F::basis(&[o + 1, o + 3])),
        3 => F::basis(&[o, o + 3]).add(&F::basis(&[o + 1, o + 2])),
        _ => panic!("omega index must be 1, 2 or 3"),
    }
}

pub fn omega_x(i: usize) -> F {
    omega_block(i, 0)
}

pub fn omega_y(i: usize) -> F {
    omega_block(i, 4)
}

/// Anti-self-dual partner of `omega_i` on a block.
pub fn anti_self_dual(i: usize, offset: usize) -> F {
    let o = offset;
    match i {
        1 => F::basis(&[o, o + 1]).sub(&F::basis(&[o + 2, o + 3])),
        2 => F::basis(&[o, o + 2]).add(&F::basis(&[o + 1, o + 3])),
        3 => F::basis(&[o, o + 3]).sub(&F::basis(&[o + 1, o + 2])),
        _ => panic!("omega index must be 1, 2 or 3"),
    }
}

/// `omega_i^x + omega_i^y`.
pub fn omega_circ(i: usize) -> F {
    omega_x(i).add(&omega_y(i))
}

/// The Spin(7) 4-form `dx^0123 + dy^0123 + w1x w1y + w2x w2y - w3x w3y`.
pub fn spin7_form() -> F {
    F::basis(&[0, 1, 2, 3])
        .add(&F::basis(&[4, 5, 6, 7]))
        .add(&omega_x(1).wedge(&omega_y(1)))
        .add(&omega_x(2).wedge(&omega_y(2)))
        .sub(&omega_x(3).wedge(&omega_y(3)))
}

/// `d/dx^0 _| Psi_0`, the model 3-form on `R^7 = {x1, x2, x3, y0..y3}`.
pub fn model_phi() -> F {
    spin7_form().insert_basis(0)
}

/// `*_{R^7} phi_0`.
pub fn model_psi() -> F {
    model_phi().hodge(&MetricSpec::euclidean(R7))
}

/// The closed-form expression `dx^123 + dx^1 w1y + dx^2 w2y - dx^3 w3y`.
pub fn model_phi_expanded() -> F {
    F::basis(&[1, 2, 3])
        .add(&F::basis(&[1]).wedge(&omega_y(1)))
        .add(&F::basis(&[2]).wedge(&omega_y(2)))
        .sub(&F::basis(&[3]).wedge(&omega_y(3)))
}

/// `dy^0123 + dx^23 w1y - dx^13 w2y - dx^12 w3y`.
pub fn model_psi_expanded() -> F {
    F::basis(&[4, 5, 6, 7])
        .add(&F::basis(&[2, 3]).wedge(&omega_y(1)))
        .sub(&F::basis(&[1, 3]).wedge(&omega_y(2)))
        .sub(&F::basis(&[1, 2]).wedge(&omega_y(3)))
}

/// Kähler form `omega_1^x + omega_1^y` of `C^4` with `z = (x0 + i x1, x2 + i x3, y0 + i y1, y2 + i y3)`.
pub fn kahler_form() -> F {
    omega_x(1).add(&omega_y(1))
}

/// `Re(dz^1 ^ dz^2 ^ dz^3 ^ dz^4)`.
pub fn re_holomorphic_volume() -> F {
    // expand the product of (dx^{2k} + i dx^{2k+1}); even numbers of i survive
    let mut out = F::zero();
    for mask in 0u8..16 {
        let imaginary = mask.count_ones() as usize;
        if imaginary % 2 == 1 {
            continue;
        }
        let idx: Vec<usize> = (0..4)
            .map(|k| 2 * k + ((mask >> k) & 1) as usize)
            .collect();
        let term = F::basis(&idx);
        out = if (imaginary / 2) % 2 == 0 {
            out.add(&term)
        } else {
            out.sub(&term)
        };
    }
    out
}

fn blades_of_degree(k: usize, mask: Blade) -> Vec<Blade> {
    (0..=255u8)
        .filter(|b| blade_degree(*b) == k && b & !mask == 0)
        .collect()
}

/// Matrix of a linear map on forms, in the basis of `domain` blades, as
/// columns of coefficients over all blades of the image.
fn linear_map_matrix(domain: &[Blade], f: impl Fn(&F) -> F) -> Matrix {
    let images: Vec<F> = domain.iter().map(|b| f(&F::term(*b, int(1)))).collect();
    Matrix::from_fn(256, domain.len(), |r, c| images[c].coefficient(r as u8))
}

fn family_from_blades(domain: &[Blade], vectors: Vec<Vec<Rational>>) -> Vec<F> {
    vectors
        .into_iter()
        .map(|v| F::from_terms(domain.iter().copied().zip(v)))
        .collect()
}

/// `eta + *(Psi_0 ^ eta)`; zero exactly on Lie(Spin(7)).
pub fn spin7_defect(eta: &F) -> F {
    eta.add(&spin7_form().wedge(eta).hodge(&MetricSpec::euclidean(R8)))
}

pub fn is_spin7(eta: &F) -> bool {
    spin7_defect(eta).is_zero()
}

/// Basis of Lie(Spin(7)) as the kernel of the defect map on 2-forms.
pub fn spin7_algebra() -> Vec<F> {
    let domain = blades_of_degree(2, R8);
    let m = linear_map_matrix(&domain, spin7_defect);
    family_from_blades(&domain, m.nullspace())
}

/// `psi_0 ^ xi = 0`.
pub fn is_g2(xi: &F) -> bool {
    model_psi().wedge(xi).is_zero()
}

/// `xi + *(phi_0 ^ xi)` on `R^7`.
pub fn g2_defect(xi: &F) -> F {
    xi.add(&model_phi().wedge(xi).hodge(&MetricSpec::euclidean(R7)))
}

/// Basis of Lie(G2) as the kernel of `xi -> psi_0 ^ xi` on 2-forms of `R^7`.
pub fn g2_algebra() -> Vec<F> {
    let domain = blades_of_degree(2, R7);
    let psi = model_psi();
    let m = linear_map_matrix(&domain, |xi| psi.wedge(xi));
    family_from_blades(&domain, m.nullspace())
}

/// The four summands of Lie(Spin(7)) in order: anti-self-dual on x,
/// anti-self-dual on y, diagonal self-dual, and Fueter maps `L_ij dy^i ^ dx^j`.
pub fn spin7_summands() -> [Vec<F>; 4] {
    let asd_x = (1..=3).map(|i| anti_self_dual(i, 0)).collect();
    let asd_y = (1..=3).map(|i| anti_self_dual(i, 4)).collect();
    let diag = vec![
        omega_x(1).sub(&omega_y(1)),
        omega_x(2).sub(&omega_y(2)),
        omega_x(3).add(&omega_y(3)),
    ];
    let fueter = fueter_basis().iter().map(fueter_two_form).collect();
    [asd_x, asd_y, diag, fueter]
}

/// `L_ij dy^i ^ dx^j`.
pub fn fueter_two_form(l: &Matrix) -> F {
    let mut f = F::zero();
    for i in 0..4 {
        for j in 0..4 {
            f = f.add(&F::basis(&[4 + i, j]).scale(&l[(i, j)]));
        }
    }
    f
}

/// Splits a member of Lie(Spin(7)) into its four summands.
pub fn spin7_decompose(eta: &F) -> Result<[F; 4]> {
    if !is_spin7(eta) {
        return Err(Error::Invalid("2-form is not in Lie(Spin(7))".into()));
    }
    let summands = spin7_summands();
    let all: Vec<&F> = summands.iter().flatten().collect();
    let domain = blades_of_degree(2, R8);
    // solve sum c_k basis_k = eta by elimination on the augmented system
    let m = Matrix::from_fn(domain.len(), all.len() + 1, |r, c| {
        if c < all.len() {
            all[c].coefficient(domain[r])
        } else {
            -eta.coefficient(domain[r])
        }
    });
    let kernel = m.nullspace();
    let sol = kernel
        .iter()
        .find(|v| !v[all.len()].is_zero())
        .ok_or_else(|| Error::Invalid("2-form is outside the span of the summands".into()))?;
    let scale = sol[all.len()].clone();
    let coeffs: Vec<Rational> = sol[..all.len()].iter().map(|c| c / &scale).collect();
    let mut out: [F; 4] = Default::default();
    let mut k = 0;
    for (s, basis) in summands.iter().enumerate() {
        for b in basis {
            out[s] = out[s].add(&b.scale(&coeffs[k]));
            k += 1;
        }
    }
    Ok(out)
}

/// Dimensions of the four summands as computed by exact rank.
pub fn spin7_summand_dims() -> [usize; 4] {
    let summands = spin7_summands();
    std::array::from_fn(|s| form_rank(&summands[s]))
}

/// Rank of a list of forms.
pub fn form_rank(forms: &[F]) -> usize {
    LinearFamily::from_vectors(
        256,
        forms
            .iter()
            .map(|f| (0..=255u8).map(|b| f.coefficient(b)).collect())
            .collect(),
    )
    .rank()
}

/// Checks `6 g(v,v) vol = (v _| phi)^2 ^ phi` on `vectors`. When a projector
/// is given the 7-forms are compared after restriction to its image.
pub fn verify_metric(
    phi: &F,
    g: &Matrix,
    vol: &F,
    vectors: &[Vec<Rational>],
    projector: Option<&Matrix>,
) -> std::result::Result<(), Vec<Rational>> {
    for v in vectors {
        let lhs = vol.scale(&(int(6) * quadratic(g, v)));
        let rhs = g_phi(phi, v);
        let diff = lhs.sub(&rhs);
        let diff = match projector {
            Some(p) => diff.linear_transform(p),
            None => diff,
        };
        if !diff.is_zero() {
            return Err(v.clone());
        }
    }
    Ok(())
}

/// `G_phi(v) = (v _| phi) ^ (v _| phi) ^ phi`.
pub fn g_phi(phi: &F, v: &[Rational]) -> F {
    let vp = phi.interior(v);
    vp.wedge(&vp).wedge(phi)
}

fn quadratic(g: &Matrix, v: &[Rational]) -> Rational {
    let gv = g.apply(v);
    v.iter().zip(&gv).fold(int(0), |s, (a, b)| s + a * b)
}

/// Standard basis vectors together with all pairwise sums.
pub fn spanning_vectors(mask: Blade) -> Vec<Vec<Rational>> {
    let idx: Vec<usize> = (0..NVARS).filter(|i| mask & (1 << i) != 0).collect();
    let e = |i: usize| {
        let mut v = vec![int(0); NVARS];
        v[i] = int(1);
        v
    };
    let mut out: Vec<Vec<Rational>> = idx.iter().map(|&i| e(i)).collect();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            let mut v = e(i);
            v[j] = int(1);
            out.push(v);
        }
    }
    out
}

// Frames. All builders take the ambient coordinates so the same code yields
// symbolic forms (RatFn) and Taylor jets.

fn lift<S: Scalar>(f: &F) -> Form<S> {
    f.map_coeffs(|c| S::from_rational(c.clone()))
}

/// Position vector field `r` applied by first-slot insertion.
pub fn zeta<S: Scalar>(i: usize, r: &[S]) -> Form<S> {
    lift::<S>(&omega_circ(i)).interior(r)
}

pub fn zeta_x<S: Scalar>(i: usize, r: &[S]) -> Form<S> {
    lift::<S>(&omega_x(i)).interior(r)
}

pub fn zeta_y<S: Scalar>(i: usize, r: &[S]) -> Form<S> {
    lift::<S>(&omega_y(i)).interior(r)
}

/// `r _| Vol_{R^4_x}`.
pub fn nu_x<S: Scalar>(r: &[S]) -> Form<S> {
    lift::<S>(&F::basis(&[0, 1, 2, 3])).interior(r)
}

pub fn nu_y<S: Scalar>(r: &[S]) -> Form<S> {
    lift::<S>(&F::basis(&[4, 5, 6, 7])).interior(r)
}

/// Cyclic successors `(j, k)` of `i`.
pub fn cyclic(i: usize) -> (usize, usize) {
    match i {
        1 => (2, 3),
        2 => (3, 1),
        3 => (1, 2),
        _ => panic!("frame index must be 1, 2 or 3"),
    }
}

/// `omega_bar_i = omega_i^circ - zeta_j ^ zeta_k` for cyclic `(i, j, k)`.
pub fn omega_bar<S: Scalar>(i: usize, r: &[S]) -> Form<S> {
    let (j, k) = cyclic(i);
    lift::<S>(&omega_circ(i)).sub(&zeta(j, r).wedge(&zeta(k, r)))
}

/// `zeta_1 ^ zeta_2 ^ zeta_3`.
pub fn nu<S: Scalar>(r: &[S]) -> Form<S> {
    zeta(1, r).wedge(&zeta(2, r)).wedge(&zeta(3, r))
}

/// `r _| Psi_0`.
pub fn phi_std<S: Scalar>(r: &[S]) -> Form<S> {
    lift::<S>(&spin7_form()).interior(r)
}

/// Expansion of `phi_std` in the blockwise frames.
pub fn phi_std_blockwise<S: Scalar>(r: &[S]) -> Form<S> {
    let mut f = nu_x(r).add(&nu_y(r));
    for i in 1..=3 {
        let t = zeta_x(i, r)
            .wedge(&lift(&omega_y(i)))
            .add(&zeta_y(i, r).wedge(&lift(&omega_x(i))));
        f = if i == 3 { f.sub(&t) } else { f.add(&t) };
    }
    f
}

/// `nu + zeta_1 omega_bar_1 + zeta_2 omega_bar_2 - zeta_3 omega_bar_3`.
pub fn phi_std_frame<S: Scalar>(r: &[S]) -> Form<S> {
    let mut f = nu(r);
    for i in 1..=3 {
        let t = zeta(i, r).wedge(&omega_bar(i, r));
        f = if i == 3 { f.sub(&t) } else { f.add(&t) };
    }
    f
}

/// `sum_i zeta_i ^ omega_bar_i`.
pub fn zeta_omega_bar<S: Scalar>(r: &[S]) -> Form<S> {
    (1..=3).fold(Form::zero(), |f, i| f.add(&zeta(i, r).wedge(&omega_bar(i, r))))
}

/// `phi_{a,b} = a nu - b sum_i zeta_i ^ omega_bar_i`.
pub fn phi_family<S: Scalar>(a: &Rational, b: &Rational, r: &[S]) -> Form<S> {
    nu(r).scale(a).sub(&zeta_omega_bar(r).scale(b))
}

/// Coordinates `x0..y3` as rational functions.
pub fn ambient_coords() -> Vec<RatFn> {
    (0..NVARS).map(RatFn::var).collect()
}

/// `U_i`, the Euclidean dual of `zeta_i` at `p`.
pub fn vertical_field(i: usize, p: &[Rational]) -> Vec<Rational> {
    let z = zeta(i, p);
    (0..NVARS).map(|j| z.coefficient(1 << j)).collect()
}

/// Which G2-structure on `S^7`.
#[derive(Clone, Debug, PartialEq)]
pub enum StructureKind {
    /// `r _| Psi_0`.
    Standard,
    /// `a nu - b zeta_i omega_bar_i`.
    Family { a: Rational, b: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub struct G2Structure {
    pub label: String,
    pub kind: StructureKind,
    /// Declared nearly-parallel constant, if any.
    pub tau0: Option<Rational>,
}

/// Metric data of a structure at a point.
#[derive(Clone, Debug)]
pub struct PointMetric {
    pub g: Matrix,
    pub spec: MetricSpec,
}

impl G2Structure {
    pub fn standard() -> Self {
        G2Structure {
            label: "std".into(),
            kind: StructureKind::Standard,
            tau0: Some(int(4)),
        }
    }

    /// `phi_{27/125, 27/25} = (3/5)^3 phi_{1,5}`.
    pub fn squashed() -> Self {
        G2Structure {
            label: "sq".into(),
            kind: StructureKind::Family {
                a: rat(27, 125),
                b: rat(27, 25),
            },
            tau0: Some(int(-4)),
        }
    }

    pub fn family(a: Rational, b: Rational) -> Self {
        G2Structure {
            label: format!(
                "ab:{},{}",
                crate::exact::rat_to_string(&a),
                crate::exact::rat_to_string(&b)
            ),
            kind: StructureKind::Family { a, b },
            tau0: None,
        }
    }

    /// Parses `std`, `sq` or `ab:a,b`.
    pub fn parse(label: &str) -> Result<Self> {
        match label {
            "std" => Ok(G2Structure::standard()),
            "sq" => Ok(G2Structure::squashed()),
            _ => {
                let rest = label
                    .strip_prefix("ab:")
                    .ok_or_else(|| Error::UnknownLabel(label.into()))?;
                let (a, b) = rest
                    .split_once(',')
                    .ok_or_else(|| Error::UnknownLabel(label.into()))?;
                let parse = |s: &str| {
                    s.trim()
                        .parse::<Rational>()
                        .map_err(|_| Error::UnknownLabel(label.into()))
                };
                let (a, b) = (parse(a)?, parse(b)?);
                if !a.is_positive() || !b.is_positive() {
                    return Err(Error::Invalid("family parameters must be positive".into()));
                }
                Ok(G2Structure::family(a, b))
            }
        }
    }

    /// The 3-form in ambient coordinates `r`.
    pub fn phi<S: Scalar>(&self, r: &[S]) -> Form<S> {
        match &self.kind {
            StructureKind::Standard => phi_std(r),
            StructureKind::Family { a, b } => phi_family(a, b, r),
        }
    }

    pub fn phi_ambient(&self) -> Form<RatFn> {
        self.phi(&ambient_coords())
    }

    pub fn phi_at(&self, p: &SpherePoint) -> F {
        self.phi(p.coords())
    }

    /// Metric, inverse metric and oriented volume form at `p`. The
    /// orientation is the one making `G_phi` positive.
    pub fn metric_at(&self, p: &SpherePoint) -> Result<PointMetric> {
        let frame = TangentFrame::at(p);
        let (g, inverse, vol_scale) = match &self.kind {
            StructureKind::Standard => (frame.projector.clone(), frame.projector.clone(), int(1)),
            StructureKind::Family { a, b } => {
                let c = rational_cbrt(a).ok_or_else(|| {
                    Error::Irrational(format!("cube root of {}", crate::exact::rat_to_string(a)))
                })?;
                let g = &frame.vertical_projector.scale(&(a / &c))
                    + &frame.horizontal_projector.scale(&(b / &c));
                let inverse = &frame.vertical_projector.scale(&(&c / a))
                    + &frame.horizontal_projector.scale(&(&c / b));
                (g, inverse, c * b * b)
            }
        };
        let round = p.round_volume();
        let sign = orientation_sign(&self.phi_at(p), &round, &frame.vertical[0], p);
        Ok(PointMetric {
            g,
            spec: MetricSpec {
                inverse,
                volume: round.scale(&(vol_scale * int(sign))),
            },
        })
    }

    /// `psi = *phi` at `p`.
    pub fn psi_at(&self, p: &SpherePoint) -> Result<F> {
        Ok(self.phi_at(p).hodge(&self.metric_at(p)?.spec))
    }
}

/// Value of a top-degree tangential form relative to `p^flat` completion.
fn top_value(f: &F, p: &SpherePoint) -> Rational {
    f.wedge(&Form::one_form(p.coords())).coefficient(R8)
}

fn orientation_sign(phi: &F, round: &F, v: &[Rational], p: &SpherePoint) -> i64 {
    let ratio = top_value(&g_phi(phi, v), p) / top_value(round, p);
    if ratio.is_negative() {
        -1
    } else {
        1
    }
}

/// Checks the declared metric of `s` at every point via `G_phi`.
pub fn verify_structure_metric(s: &G2Structure, points: &[SpherePoint]) -> CheckOutcome {
    over_points(points, |p| {
        let m = s.metric_at(p)?;
        let proj = p.projector();
        let vectors: Vec<Vec<Rational>> = (0..NVARS).map(|j| proj.column(j)).collect();
        Ok(verify_metric(&s.phi_at(p), &m.g, &m.spec.volume, &vectors, Some(&proj))
            .err()
            .map(|v| format!("6 g(v,v) vol differs from G_phi(v) at v = {}", crate::exact::format_point(&v))))
    })
}

/// Result of testing `d phi = tau psi` on a point set.
#[derive(Clone, Debug)]
pub struct NearlyParallelReport {
    pub outcome: CheckOutcome,
    /// The common constant when one exists.
    pub tau: Option<Rational>,
}

/// `d phi = tau psi` with one constant `tau` across all points, equal to the
/// declared `tau0` when the structure has one.
pub fn nearly_parallel_check(s: &G2Structure, points: &[SpherePoint]) -> NearlyParallelReport {
    let dphi = s.phi_ambient().d();
    let per_point: Vec<Result<(F, F)>> = points
        .iter()
        .map(|p| Ok((restrict(&dphi.eval(p.coords())?, p), restrict(&s.psi_at(p)?, p))))
        .collect();
    let mut tau: Option<Rational> = s.tau0.clone();
    for (p, r) in points.iter().zip(per_point) {
        let at = Some(crate::exact::format_point(p.coords()));
        let (dp, psi) = match r {
            Ok(v) => v,
            Err(e) => {
                return NearlyParallelReport {
                    outcome: CheckOutcome::fail(points.len(), at, e.to_string()),
                    tau: None,
                }
            }
        };
        if tau.is_none() {
            tau = psi
                .terms()
                .iter()
                .next()
                .map(|(b, c)| dp.coefficient(*b) / c);
        }
        let t = tau.clone().unwrap_or_else(|| int(0));
        if dp != psi.scale(&t) {
            return NearlyParallelReport {
                outcome: CheckOutcome::fail(
                    points.len(),
                    at,
                    format!("d phi is not {} psi", crate::exact::rat_to_string(&t)),
                ),
                tau: None,
            };
        }
    }
    let mut outcome = CheckOutcome::pass(points.len());
    if let StructureKind::Standard = s.kind {
        outcome = outcome.and(standard_ambient_identities(points));
    }
    NearlyParallelReport { outcome, tau }
}

/// `d(r _| Psi_0) = 4 Psi_0` on `R^8` and `psi_std = Psi_0` on the sphere.
pub fn standard_ambient_identities(points: &[SpherePoint]) -> CheckOutcome {
    let psi0 = spin7_form();
    let exact = phi_std(&ambient_coords()).d() == lift::<RatFn>(&psi0).scale(&int(4));
    if !exact {
        return CheckOutcome::fail(0, None, "d(r _| Psi_0) differs from 4 Psi_0");
    }
    let s = G2Structure::standard();
    over_points(points, |p| Ok(restricted_difference(&s.psi_at(p)?, &psi0, p)))
}

fn eps_terms<S: Scalar>(f: impl Fn(usize, usize, usize) -> Form<S>) -> Form<S> {
    // sum over the six permutations with sign
    let mut out = Form::zero();
    for i in 1..=3 {
        let (j, k) = cyclic(i);
        out = out.add(&f(i, j, k)).sub(&f(i, k, j));
    }
    out
}

/// `d zeta_i = eps_ijk zeta_j zeta_k + 2 omega_bar_i`,
/// `d omega_bar_i = 2 eps_ijk zeta_j omega_bar_k` and
/// `d nu = eps_ijk omega_bar_i zeta_j zeta_k`, as restricted identities.
pub fn frame_derivative_check(points: &[SpherePoint]) -> CheckOutcome {
    let r = ambient_coords();
    let mut pairs: Vec<(String, Form<RatFn>, Form<RatFn>)> = Vec::new();
    for i in 1..=3 {
        let (j, k) = cyclic(i);
        let rhs = zeta(j, &r)
            .wedge(&zeta(k, &r))
            .scale(&int(2))
            .add(&omega_bar(i, &r).scale(&int(2)));
        pairs.push((format!("d zeta_{i}"), zeta(i, &r).d(), rhs));
        let rhs = zeta(j, &r)
            .wedge(&omega_bar(k, &r))
            .sub(&zeta(k, &r).wedge(&omega_bar(j, &r)))
            .scale(&int(2));
        pairs.push((format!("d omega_bar_{i}"), omega_bar(i, &r).d(), rhs));
    }
    let dnu_rhs = eps_terms(|i, j, k| {
        omega_bar(i, &r).wedge(&zeta(j, &r)).wedge(&zeta(k, &r))
    });
    pairs.push(("d nu".into(), nu(&r).d(), dnu_rhs));
    over_points(points, |p| {
        for (label, lhs, rhs) in &pairs {
            if let Some(w) = restricted_difference(&lhs.eval(p.coords())?, &rhs.eval(p.coords())?, p) {
                return Ok(Some(format!("{label}: {w}")));
            }
        }
        Ok(None)
    })
}

/// Outcome of the index scans for the contraction identities of a G2 triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityScan {
    pub tuples_checked: usize,
    /// First failing index tuple, if any.
    pub failure: Option<Vec<usize>>,
}

/// Scans `phi_pij phi_pkl = g_ik g_jl - g_il g_jk + psi_ijkl` over all 4-tuples
/// of the coordinates in `mask`, with Euclidean `g`.
pub fn scan_phi_phi(phi: &F, psi: &F, mask: Blade) -> IdentityScan {
    let idx: Vec<usize> = (0..NVARS).filter(|i| mask & (1 << i) != 0).collect();
    let tphi = phi.to_tensor(3);
    let tpsi = psi.to_tensor(4);
    let at3 = |a: usize, b: usize, c: usize| &tphi[(a * 8 + b) * 8 + c];
    let at4 = |a: usize, b: usize, c: usize, d: usize| &tpsi[((a * 8 + b) * 8 + c) * 8 + d];
    let delta = |a: usize, b: usize| if a == b { int(1) } else { int(0) };
    let mut n = 0;
    for &i in &idx {
        for &j in &idx {
            for &k in &idx {
                for &l in &idx {
                    n += 1;
                    let lhs = idx
                        .iter()
                        .fold(int(0), |s, &p| s + at3(p, i, j) * at3(p, k, l));
                    let rhs = delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k) + at4(i, j, k, l);
                    if lhs != rhs {
                        return IdentityScan {
                            tuples_checked: n,
                            failure: Some(vec![i, j, k, l]),
                        };
                    }
                }
            }
        }
    }
    IdentityScan {
        tuples_checked: n,
        failure: None,
    }
}

/// Scans `phi_pli psi_pljk = 2 phi_ijk` over all 3-tuples, where the double
/// contraction carries the weight of [`contraction_weight`]`(2)`.
pub fn scan_phi_psi(phi: &F, psi: &F, mask: Blade) -> IdentityScan {
    let c = int(2);
    let w = contraction_weight(2);
    let idx: Vec<usize> = (0..NVARS).filter(|i| mask & (1 << i) != 0).collect();
    let tphi = phi.to_tensor(3);
    let tpsi = psi.to_tensor(4);
    let at3 = |a: usize, b: usize, c: usize| &tphi[(a * 8 + b) * 8 + c];
    let at4 = |a: usize, b: usize, c: usize, d: usize| &tpsi[((a * 8 + b) * 8 + c) * 8 + d];
    let mut n = 0;
    for &i in &idx {
        for &j in &idx {
            for &k in &idx {
                n += 1;
                let mut lhs = int(0);
                for &p in &idx {
                    for &l in &idx {
                        lhs += at3(p, l, i) * at4(p, l, j, k);
                    }
                }
                if &w * lhs != &c * at3(i, j, k) {
                    return IdentityScan {
                        tuples_checked: n,
                        failure: Some(vec![i, j, k]),
                    };
                }
            }
        }
    }
    IdentityScan {
        tuples_checked: n,
        failure: None,
    }
}

/// `vol_s / vol_base` at `p`, when the two volume forms are proportional.
pub fn volume_ratio(s: &G2Structure, base: &G2Structure, p: &SpherePoint) -> Result<Rational> {
    let a = s.metric_at(p)?.spec.volume;
    let b = base.metric_at(p)?.spec.volume;
    let (bl, c) = b
        .terms()
        .iter()
        .next()
        .map(|(bl, c)| (*bl, c.clone()))
        .ok_or_else(|| Error::Invalid(format!("{} has a degenerate volume form", base.label)))?;
    let r = a.coefficient(bl) / c;
    if a != b.scale(&r) {
        return Err(Error::Invalid(format!("volume forms of {} and {} are not proportional", s.label, base.label)));
    }
    Ok(r)
}

/// Squared norm of a form under an inverse metric.
pub fn norm_squared(f: &F, inverse: &Matrix) -> Rational {
    f.inner(f, inverse)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::blade;
    use crate::sphere::s7_points;

    #[test]
    fn model_forms() {
        assert_eq!(model_phi(), model_phi_expanded());
        assert_eq!(model_phi().coefficient(blade(&[1, 2, 3])), int(1));
        assert_eq!(model_psi(), model_psi_expanded());
        let w = kahler_form();
        assert_eq!(spin7_form(), w.wedge(&w).scale(&rat(1, 2)).add(&re_holomorphic_volume()));
        assert_eq!(spin7_form().hodge(&MetricSpec::euclidean(R8)), spin7_form());
        // Re(Omega) ^ omega has bidegree (5,1) + (1,5) and vanishes
        assert!(re_holomorphic_volume().wedge(&w).is_zero());
    }

    #[test]
    fn lie_algebra_dimensions() {
        assert_eq!(spin7_algebra().len(), 21);
        assert_eq!(spin7_summand_dims(), [3, 3, 3, 12]);
        let all: Vec<F> = spin7_summands().into_iter().flatten().collect();
        assert!(all.iter().all(is_spin7));
        assert_eq!(form_rank(&all), 21);
        let g2 = g2_algebra();
        assert_eq!(g2.len(), 14);
        assert!(g2.iter().all(|x| g2_defect(x).is_zero()));
        assert!(is_g2(&F::zero()));
        assert!(!is_g2(&F::basis(&[1, 2])));
    }

    #[test]
    fn spin7_examples() {
        assert!(is_spin7(&omega_x(1).sub(&omega_y(1))));
        let w = kahler_form();
        assert_eq!(spin7_defect(&w), w.scale(&int(4)));
        let d = spin7_decompose(&omega_x(3).add(&omega_y(3))).unwrap();
        assert!(d[0].is_zero() && d[1].is_zero() && d[3].is_zero());
        let id = fueter_two_form(&Matrix::identity(4));
        let d = spin7_decompose(&id).unwrap();
        assert_eq!(d[3], id);
        let asd = F::basis(&[0, 1]).sub(&F::basis(&[2, 3]));
        assert_eq!(spin7_decompose(&asd).unwrap()[0], asd);
        assert!(spin7_decompose(&w).is_err());
    }

    #[test]
    fn contraction_identity_scans() {
        let (phi, psi) = (model_phi(), model_psi());
        assert_eq!(scan_phi_phi(&phi, &psi, R7), IdentityScan { tuples_checked: 2401, failure: None });
        assert_eq!(scan_phi_psi(&phi, &psi, R7), IdentityScan { tuples_checked: 343, failure: None });
        assert!(scan_phi_phi(&phi, &psi.neg(), R7).failure.is_some());
    }

    #[test]
    fn model_metric() {
        let e = MetricSpec::euclidean(R7);
        let vs = spanning_vectors(R7);
        assert!(verify_metric(&model_phi(), &e.inverse, &e.volume, &vs, None).is_ok());
        let doubled = e.inverse.scale(&int(2));
        let w = verify_metric(&model_phi(), &doubled, &e.volume, &vs, None).unwrap_err();
        assert_eq!(w, spanning_vectors(R7)[0]);
    }

    #[test]
    fn frame_expansions() {
        let r = ambient_coords();
        assert_eq!(phi_std(&r), phi_std_blockwise(&r));
        let pts = s7_points(20, 7, false).unwrap();
        let (a, b) = (phi_std(&r), phi_std_frame(&r));
        for p in &pts {
            assert_eq!(restricted_difference(&a.eval(p.coords()).unwrap(), &b.eval(p.coords()).unwrap(), p), None);
        }
        assert!(frame_derivative_check(&pts).passed);
    }

    /// Blockwise oracle for `phi_{a,b}`: expand `nu` over the eight block
    /// choices and use `sum_i zeta_i^x omega_i^x + zeta_i^y omega_i^y = 3 (nu_x + nu_y)` on the sphere.
    #[test]
    fn family_blockwise_oracle() {
        let r = ambient_coords();
        let zx: Vec<Form<RatFn>> = (1..=3).map(|i| zeta_x(i, &r)).collect();
        let zy: Vec<Form<RatFn>> = (1..=3).map(|i| zeta_y(i, &r)).collect();
        let mut all_blocks = Form::zero();
        for choice in 0u8..8 {
            let pick = |k: usize| if (choice >> k) & 1 == 1 { &zy[k] } else { &zx[k] };
            all_blocks = all_blocks.add(&pick(0).wedge(pick(1)).wedge(pick(2)));
        }
        let mut cross = Form::zero();
        for i in 1..=3 {
            cross = cross
                .add(&zx[i - 1].wedge(&lift(&omega_y(i))))
                .add(&zy[i - 1].wedge(&lift(&omega_x(i))));
        }
        let (a, b) = (rat(27, 125), rat(27, 25));
        let oracle = all_blocks
            .scale(&(&a + &b * int(3)))
            .sub(&nu_x(&r).add(&nu_y(&r)).scale(&(&b * int(3))))
            .sub(&cross.scale(&b));
        let fam = phi_family(&a, &b, &r);
        assert_eq!(fam, phi_family(&int(1), &int(5), &r).scale(&rat(27, 125)));
        for p in s7_points(10, 2, false).unwrap() {
            assert_eq!(restricted_difference(&fam.eval(p.coords()).unwrap(), &oracle.eval(p.coords()).unwrap(), &p), None);
        }
    }

    #[test]
    fn structures_on_the_sphere() {
        let pts = s7_points(8, 11, true).unwrap();
        let np = nearly_parallel_check(&G2Structure::standard(), &pts);
        assert!(np.outcome.passed);
        assert_eq!(np.tau, Some(int(4)));
        let np = nearly_parallel_check(&G2Structure::squashed(), &pts);
        assert!(np.outcome.passed);
        assert_eq!(np.tau, Some(int(-4)));
        let np = nearly_parallel_check(&G2Structure::parse("ab:1,5").unwrap(), &pts);
        assert_eq!(np.tau, Some(rat(-12, 5)));
        assert!(!nearly_parallel_check(&G2Structure::parse("ab:1,1").unwrap(), &pts).outcome.passed);
        for label in ["std", "sq", "ab:1,5", "ab:1,1", "ab:8,3"] {
            assert!(verify_structure_metric(&G2Structure::parse(label).unwrap(), &pts).passed, "{label}");
        }
        assert!(matches!(G2Structure::parse("ab:2,1").unwrap().metric_at(&pts[0]), Err(Error::Irrational(_))));
        assert!(matches!(G2Structure::parse("round"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn squashed_volume_and_norms() {
        let p = &s7_points(3, 5, true).unwrap()[0];
        let sq = G2Structure::squashed().metric_at(p).unwrap();
        let std = G2Structure::standard().metric_at(p).unwrap();
        let ratio = sq.spec.volume.coefficient(*sq.spec.volume.terms().keys().next().unwrap())
            / std.spec.volume.coefficient(*sq.spec.volume.terms().keys().next().unwrap());
        assert_eq!(ratio, rat(2187, 3125));
        let ratio = volume_ratio(&G2Structure::squashed(), &G2Structure::standard(), p).unwrap();
        assert_eq!(ratio, rat(2187, 3125));
        // |nu|^2 = a^-2 and |zeta_i omega_bar_j|^2 = 2 b^-2 for (a, b) = (1, 5)
        let m = G2Structure::family(int(1), int(5)).metric_at(p).unwrap();
        assert_eq!(norm_squared(&nu(p.coords()), &m.spec.inverse), int(1));
        for (i, j) in [(1, 1), (2, 3)] {
            let f = zeta(i, p.coords()).wedge(&omega_bar(j, p.coords()));
            assert_eq!(norm_squared(&f, &m.spec.inverse), rat(2, 25));
        }
    }

    /// `psi_{1,b} = b (b nu_bar - (1/2) eps_ijk zeta_i zeta_j omega_bar_k)` with
    /// `nu_bar = *nu` in the orientation of `phi_{1,b}`.
    #[test]
    fn family_dual_form() {
        for p in s7_points(4, 9, true).unwrap() {
            let r = p.coords();
            let b = int(5);
            let m = G2Structure::family(int(1), b.clone()).metric_at(&p).unwrap();
            let round = MetricSpec { inverse: p.projector(), volume: m.spec.volume.scale(&rat(1, 25)) };
            let nu_bar = nu(r).hodge(&round);
            let eps = eps_terms(|i, j, k| zeta(i, r).wedge(&zeta(j, r)).wedge(&omega_bar(k, r)));
            let psi = G2Structure::family(int(1), b.clone()).psi_at(&p).unwrap();
            let with_half = nu_bar.scale(&b).sub(&eps.scale(&rat(1, 2))).scale(&b);
            assert_eq!(restricted_difference(&psi, &with_half, &p), None);
            let without_half = nu_bar.scale(&b).sub(&eps).scale(&b);
            assert!(restricted_difference(&psi, &without_half, &p).is_some());
        }
    }
}

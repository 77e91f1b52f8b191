//! Catalog of named checks grouped into suites.
//!
//! Each check draws its own seeded points from the run configuration. Rank
//! and kernel-solve checks need a minimum number of points to see the full
//! rank, and the Weitzenboeck check is capped because it needs second-order
//! jets of symbolic candidates; the point count actually used is reported.

use std::fmt;
use std::str::FromStr;

use crate::check::CheckOutcome;
use crate::deformation as dm;
use crate::error::{Error, Result};
use crate::exact::{int, rat, Coeff, LinearFamily, Matrix, Rational, NVARS};
use crate::exterior::{MetricSpec, R7};
use crate::instanton::{self as inst, CrossTerm, Duality, QForm, Shifted};
use crate::quaternion::{self as quat};
use crate::sphere::{self, random_vectors, s3_zero_points, s7_points, SpherePoint};
use crate::structures::{self as st, G2Structure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Algebra,
    Structures,
    Appendix,
    Instanton,
    Deformation,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 6] = ["algebra", "structures", "appendix", "instanton", "deformation", "all"];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Structures => "structures",
            Suite::Appendix => "appendix",
            Suite::Instanton => "instanton",
            Suite::Deformation => "deformation",
            Suite::All => "all",
        }
    }

    fn contains(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "algebra" => Suite::Algebra,
            "structures" => Suite::Structures,
            "appendix" => Suite::Appendix,
            "instanton" => Suite::Instanton,
            "deformation" => Suite::Deformation,
            "all" => Suite::All,
            _ => return Err(Error::UnknownLabel(format!("suite {s}"))),
        })
    }
}

/// Point budget and sampling options shared by every check of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub points: usize,
    pub seed: u64,
    pub exclude_axes: bool,
}

impl RunConfig {
    pub fn new(points: usize, seed: u64) -> Self {
        RunConfig {
            points,
            seed,
            exclude_axes: true,
        }
    }

    fn sphere(&self, min: usize) -> Result<Vec<SpherePoint>> {
        s7_points(self.points.max(min), self.seed, self.exclude_axes)
    }

    fn sphere_capped(&self, cap: usize) -> Result<Vec<SpherePoint>> {
        s7_points(self.points.min(cap).max(1), self.seed, self.exclude_axes)
    }

    fn fiber(&self, min: usize) -> Result<Vec<SpherePoint>> {
        s3_zero_points(self.points.max(min), self.seed)
    }

    fn vectors(&self) -> Vec<Vec<Rational>> {
        random_vectors(NVARS, self.points.max(1), self.seed)
    }
}

type Runner = Box<dyn Fn(&RunConfig) -> Result<CheckOutcome> + Send + Sync>;

/// A named check. `Err` from `run` is a configuration problem (for instance
/// point exhaustion); a failing identity is an outcome with `passed = false`.
pub struct CheckDef {
    pub id: String,
    pub suite: Suite,
    /// Short statement of what is verified.
    pub anchor: String,
    run: Runner,
}

impl CheckDef {
    fn new(
        id: &str,
        suite: Suite,
        anchor: &str,
        run: impl Fn(&RunConfig) -> Result<CheckOutcome> + Send + Sync + 'static,
    ) -> Self {
        CheckDef {
            id: id.into(),
            suite,
            anchor: anchor.into(),
            run: Box::new(run),
        }
    }

    pub fn run(&self, cfg: &RunConfig) -> Result<CheckOutcome> {
        (self.run)(cfg)
    }
}

impl fmt::Debug for CheckDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CheckDef")
            .field("id", &self.id)
            .field("suite", &self.suite)
            .field("anchor", &self.anchor)
            .finish()
    }
}

fn exact(ok: bool, detail: impl FnOnce() -> String) -> Result<CheckOutcome> {
    Ok(CheckOutcome::expect(ok, 0, detail))
}

/// Passes when `inner` fails: used for negative controls.
fn control(inner: CheckOutcome, what: &str) -> CheckOutcome {
    let n = inner.points_tested;
    CheckOutcome::expect(!inner.passed, n, || format!("{what} unexpectedly passed"))
}

fn tau_check(label: &str, tau: Rational, cfg: &RunConfig) -> Result<CheckOutcome> {
    let s = G2Structure::parse(label)?;
    let r = st::nearly_parallel_check(&s, &cfg.sphere(1)?);
    let n = r.outcome.points_tested;
    Ok(match r.tau {
        Some(t) if t == tau && r.outcome.passed => r.outcome,
        Some(t) if r.outcome.passed => CheckOutcome::fail(
            n,
            None,
            format!("d phi = {} psi, expected {}", crate::exact::rat_to_string(&t), crate::exact::rat_to_string(&tau)),
        ),
        _ => r.outcome,
    })
}

fn algebra_checks() -> Vec<CheckDef> {
    use Suite::Algebra as S;
    vec![
        CheckDef::new("quaternion-complex-structures", S, "I_i^2 = -1 and I1 I2 = I3 for right multiplication", |_| {
            let id = Matrix::identity(4);
            let i: Vec<Matrix> = (1..=3).map(quat::complex_structure).collect();
            let squares = i.iter().all(|m| &(m * m) + &id == Matrix::zeros(4, 4));
            exact(squares && &i[0] * &i[1] == i[2], || "complex structure relations fail".into())
        }),
        CheckDef::new("fueter-solution-space", S, "L + I1 L I1 + I2 L I2 - I3 L I3 = 0 has dimension 12", |_| {
            let sol = quat::fueter_solution_space();
            let span = LinearFamily::from_matrices(&quat::fueter_basis());
            let i3 = quat::complex_structure(3);
            exact(
                sol.rank() == 12
                    && sol.same_span(&span)
                    && quat::fueter_basis().iter().all(quat::is_fueter)
                    && !quat::is_fueter(&i3),
                || format!("solution space has rank {}", sol.rank()),
            )
        }),
        CheckDef::new("spin7-algebra-dimensions", S, "dim Lie(Spin(7)) = 21 = 3 + 3 + 3 + 12", |_| {
            let n = st::form_rank(&st::spin7_algebra());
            let dims = st::spin7_summand_dims();
            exact(n == 21 && dims == [3, 3, 3, 12], || format!("rank {n}, summands {dims:?}"))
        }),
        CheckDef::new("g2-algebra-dimension", S, "dim Lie(G2) = 14", |_| {
            let n = st::form_rank(&st::g2_algebra());
            exact(n == 14, || format!("rank {n}"))
        }),
        CheckDef::new("sp2-algebra-dimension", S, "dim Lie(Sp(2)) = 10", |_| {
            let b = dm::sp2_lie_basis();
            let n = dm::matrix_rank(&b);
            exact(b.len() == 10 && n == 10, || format!("basis of {} with rank {n}", b.len()))
        }),
        CheckDef::new("w-representation", S, "dim W = 5, W + W I1 + W I2 has rank 15 inside Lie(Spin(7))", |_| {
            let w = dm::matrix_rank(&dm::w_basis());
            let fifteen = dm::fifteen_basis();
            let n = dm::matrix_rank(&fifteen);
            let spin7 = fifteen.iter().filter(|d| d.kind != dm::DeformKind::W).all(|d| dm::in_spin7(&d.m));
            exact(w == 5 && n == 15 && spin7, || format!("W rank {w}, family rank {n}, in spin7 {spin7}"))
        }),
        CheckDef::new("phi-phi-contraction-identity", S, "phi_pij phi_pkl = g_ik g_jl - g_il g_jk + psi_ijkl", |_| {
            let scan = st::scan_phi_phi(&st::model_phi(), &st::model_psi(), R7);
            exact(scan.failure.is_none() && scan.tuples_checked == 2401, || {
                format!("fails at {:?}", scan.failure)
            })
        }),
        CheckDef::new("phi-psi-contraction-identity", S, "phi_pli psi_pljk = 2 phi_ijk", |_| {
            let scan = st::scan_phi_psi(&st::model_phi(), &st::model_psi(), R7);
            exact(scan.failure.is_none() && scan.tuples_checked == 343, || {
                format!("fails at {:?}", scan.failure)
            })
        }),
        CheckDef::new("model-phi-metric", S, "6 g(v,v) vol = (v _| phi)^2 ^ phi for the model phi", |_| {
            let e = MetricSpec::euclidean(R7);
            let r = st::verify_metric(&st::model_phi(), &e.inverse, &e.volume, &st::spanning_vectors(R7), None);
            exact(r.is_ok(), || "metric identity fails".into())
        }),
    ]
}

fn structure_checks() -> Vec<CheckDef> {
    use Suite::Structures as S;
    vec![
        CheckDef::new("ambient-dphi-equals-4psi0", S, "d phi_std = 4 Psi_0 on R^8 and psi_std = Psi_0 on S^7", |c| {
            Ok(st::standard_ambient_identities(&c.sphere(1)?))
        }),
        CheckDef::new("standard-nearly-parallel", S, "d phi_std = 4 psi_std", |c| tau_check("std", int(4), c)),
        CheckDef::new("structure-metrics", S, "declared metrics of std and sq agree with G_phi", |c| {
            let pts = c.sphere(1)?;
            Ok(CheckOutcome::all(["std", "sq"].iter().map(|l| {
                let s = G2Structure::parse(l).expect("built-in label");
                st::verify_structure_metric(&s, &pts).labelled(l)
            })))
        }),
        CheckDef::new("vertical-frame-laplacians", S, "nabla^*nabla zeta_i = 6 zeta_i, vertical 2 zeta_i, horizontal 4 zeta_i", |c| {
            Ok(sphere::frame_laplacian_check(&c.sphere(1)?))
        }),
        CheckDef::new("vertical-laplacian-split", S, "vertical part of nabla^*nabla alpha for alpha = f_i zeta_i + b", |c| {
            let pts = c.sphere(1)?;
            let alpha = sphere::sample_one_form();
            Ok(sphere::d_split_check(&alpha, &pts)
                .and(sphere::vertical_laplacian_check(&alpha, &pts))
                .and(sphere::vertical_laplacian_check(&st::zeta(1, &st::ambient_coords()), &pts)))
        }),
        CheckDef::new("dbstar-identity-stated", S, "d(b _| phi) _| phi = d^*b - db _| psi + (tau0/2) b _| phi", |c| {
            Ok(dbstar(c, &int(2))?)
        }),
        CheckDef::new("dbstar-identity-corrected", S, "d(b _| phi) _| phi = d^*b - db _| psi + tau0 b _| phi", |c| {
            Ok(dbstar(c, &int(4))?)
        }),
    ]
}

fn dbstar(c: &RunConfig, coeff: &Rational) -> Result<CheckOutcome> {
    let pts = c.sphere(1)?;
    let x = st::ambient_coords();
    Ok(sphere::dbstar_check(&sphere::sample_two_form(), coeff, &pts)
        .and(sphere::dbstar_check(&st::omega_bar(1, &x), coeff, &pts)))
}

fn appendix_checks() -> Vec<CheckDef> {
    use Suite::Appendix as S;
    vec![
        CheckDef::new("appendix-frame-derivatives", S, "d zeta_i, d omega_bar_i and d nu in the zeta/omega_bar frame", |c| {
            Ok(st::frame_derivative_check(&c.sphere(1)?))
        }),
        CheckDef::new("appendix-family-1-5-nearly-parallel", S, "d phi_{1,5} = -(12/5) psi_{1,5}", |c| {
            tau_check("ab:1,5", rat(-12, 5), c)
        }),
        CheckDef::new("appendix-squashed-nearly-parallel", S, "d phi_sq = -4 psi_sq", |c| tau_check("sq", int(-4), c)),
        CheckDef::new("appendix-squashed-volume-ratio", S, "vol_sq / vol_std = 3^7 / 5^5", |c| {
            let (sq, std) = (G2Structure::squashed(), G2Structure::standard());
            Ok(crate::check::over_points(&c.sphere(1)?, |p| {
                let r = st::volume_ratio(&sq, &std, p)?;
                Ok((r != rat(2187, 3125)).then(|| format!("ratio {}", crate::exact::rat_to_string(&r))))
            }))
        }),
        CheckDef::new("appendix-family-1-1-not-nearly-parallel", S, "phi_{1,1} is not nearly parallel", |c| {
            let s = G2Structure::parse("ab:1,1")?;
            Ok(control(st::nearly_parallel_check(&s, &c.sphere(1)?).outcome, "nearly parallel check of phi_{1,1}"))
        }),
        CheckDef::new("appendix-family-metrics", S, "declared metrics of phi_{1,5} and phi_{1,1} agree with G_phi", |c| {
            let pts = c.sphere(1)?;
            Ok(CheckOutcome::all(["ab:1,5", "ab:1,1"].iter().map(|l| {
                let s = G2Structure::parse(l).expect("built-in label");
                st::verify_structure_metric(&s, &pts).labelled(l)
            })))
        }),
    ]
}

fn symbolic(label: &str, a: &QForm, b: &QForm) -> Option<String> {
    inst::symbolic_difference(a, b).map(|w| format!("{label}: {w}"))
}

fn g2_check(conn: &str, structure: &str, c: &RunConfig) -> Result<CheckOutcome> {
    let a = inst::connection(conn)?;
    let s = G2Structure::parse(structure)?;
    Ok(inst::g2_instanton_check(&a, &s, &c.sphere(1)?))
}

fn instanton_checks() -> Vec<CheckDef> {
    use Suite::Instanton as S;
    vec![
        CheckDef::new("b0-curvature", S, "F_B0 = dx ^ dx^bar / (1 + |x|^2)^2, anti-self-dual, Bianchi", |_| {
            let b = inst::b0();
            let f = b.curvature();
            let diff = symbolic("F_B0", &f, &inst::b0_curvature_closed_form());
            let duality = inst::asd_check(&f).duality();
            exact(diff.is_none() && duality == Duality::AntiSelfDual && b.bianchi_defect(&f).is_zero(), || {
                diff.unwrap_or_else(|| format!("measured duality {duality:?}"))
            })
        }),
        CheckDef::new("a0-pullback-route", S, "A0 equals the pullback of the left Hopf connection under the inversion swap", |_| {
            let a = inst::a0();
            let diff = symbolic("A0", &a.form, &inst::a0_by_pullback()?.form);
            exact(diff.is_none() && a.radial_contraction().is_zero(), || diff.unwrap_or_else(|| "radial part".into()))
        }),
        CheckDef::new("a0-curvature-closed-form", S, "F_A0 = dA0 + A0 ^ A0 equals the closed form, Bianchi holds", |_| {
            let a = inst::a0();
            let f = a.curvature();
            let sym = CrossTerm::Symmetrized;
            let diff = symbolic("F_A0", &f, &inst::a0_curvature_closed_form())
                .or_else(|| symbolic("dA0", &a.exterior_derivative(), &inst::a0_derivative_closed_form(sym)))
                .or_else(|| symbolic("A0 ^ A0", &a.square(), &inst::a0_square_closed_form(sym)));
            exact(diff.is_none() && a.bianchi_defect(&f).is_zero(), || diff.unwrap_or_else(|| "Bianchi defect".into()))
        }),
        CheckDef::new("a0-curvature-printed-intermediates", S, "dA0 and A0 ^ A0 with the doubled mixed term", |_| {
            let a = inst::a0();
            let dbl = CrossTerm::Doubled;
            let diff = symbolic("dA0", &a.exterior_derivative(), &inst::a0_derivative_closed_form(dbl))
                .or_else(|| symbolic("A0 ^ A0", &a.square(), &inst::a0_square_closed_form(dbl)));
            exact(diff.is_none(), || diff.unwrap_or_default())
        }),
        CheckDef::new("a0-g2-instanton-std", S, "phi_std _| F_A0 = 0 on S^7", |c| g2_check("A0", "std", c)),
        CheckDef::new("a0-g2-instanton-sq", S, "phi_sq _| F_A0 = 0 on S^7", |c| g2_check("A0", "sq", c)),
        CheckDef::new("perturbed-a0-not-instanton", S, "A0 + e1 (x0 dx1 - x1 dx0)/10 is not a G2-instanton", |c| {
            let pts = c.sphere(1)?;
            let p = inst::perturbed_a0()?;
            Ok(CheckOutcome::all(
                [G2Structure::standard(), G2Structure::squashed()]
                    .iter()
                    .map(|s| control(inst::g2_instanton_check(&p, s, &pts), &s.label)),
            ))
        }),
        CheckDef::new("hopf-pullback-equivalence", S, "pullback of an ASD connection along the Hopf map is a G2-instanton", |c| {
            let pts = c.sphere(1)?;
            let good = inst::hopf_pullback(&inst::b0())?;
            let bad = inst::hopf_pullback(&inst::perturbed_b0()?)?;
            let mut out = Vec::new();
            for s in [G2Structure::standard(), G2Structure::squashed()] {
                out.push(inst::g2_instanton_check(&good, &s, &pts).labelled(&s.label));
                out.push(control(inst::g2_instanton_check(&bad, &s, &pts), &format!("perturbed pullback, {}", s.label)));
            }
            Ok(CheckOutcome::all(out))
        }),
        CheckDef::new("a0-spin7-instanton", S, "F_A0 + *(Psi_0 ^ F_A0) = 0 on R^8", |c| {
            let vecs = c.vectors();
            let f = inst::a0_curvature_closed_form();
            let zero = QForm::zero();
            let kahler = Shifted { base: &zero, shift: inst::with_unit(&st::kahler_form(), 1) };
            Ok(inst::spin7_instanton_check(&f, &vecs).and(control(inst::spin7_instanton_check(&kahler, &vecs), "Kahler form")))
        }),
        CheckDef::new("a0-smooth-gauge", S, "A0 in the gauge q = y is (1/S) Im[y x^-1 dx y^bar + y dy^bar], regular on y = 0", |c| {
            let gx = inst::a0_regular_at_y_zero()?;
            let diff = symbolic("gauge q = y", &gx.form, &inst::a0_gauge_y_closed_form());
            if let Some(d) = diff {
                return Ok(CheckOutcome::fail(0, None, d));
            }
            let y0 = c.fiber(1)?;
            let x0 = inst::swap_factors(&y0)?;
            Ok(inst::regularity_check(&gx, &y0)
                .and(control(inst::regularity_check(&gx, &x0), "regularity on x = 0")))
        }),
        CheckDef::new("a0-hym", S, "F_A0 is of type (1,1) with vanishing I1-trace on the tangent complex planes", |c| {
            let pts = c.sphere(1)?;
            let f = inst::a0_curvature_closed_form();
            let gamma = crate::exterior::Form::<Rational>::basis(&[0, 4]);
            let twisted = gamma.sub(&gamma.linear_transform(&inst::i1_r8()));
            let injected = Shifted { base: &f, shift: inst::with_unit(&twisted, 2) };
            let zero = QForm::zero();
            let traced = Shifted { base: &zero, shift: inst::with_unit(&inst::i1_kahler_form(), 1) };
            Ok(inst::hym_check(&f, &pts)
                .and(control(inst::hym_check(&injected, &pts), "injected (2,0) term"))
                .and(control(inst::hym_check(&traced, &pts), "Kahler trace term")))
        }),
    ]
}

fn deformation_checks() -> Vec<CheckDef> {
    use Suite::Deformation as S;
    vec![
        CheckDef::new("15fam-radial-contraction", S, "r _| alpha_M = 0 for the fifteen linear deformations", |_| {
            let bad = dm::fifteen_candidates().into_iter().find(|c| !dm::radial_contraction(c).is_zero());
            exact(bad.is_none(), || format!("{} has a radial part", bad.map(|c| c.label).unwrap_or_default()))
        }),
        CheckDef::new("15fam-coulomb-gauge", S, "D_A0^* alpha_M = 0 on R^8 for the fifteen linear deformations", |c| {
            let (a, f) = (inst::a0(), inst::a0_curvature_closed_form());
            let cands = dm::fifteen_candidates();
            Ok(crate::check::over_points(&c.sphere(1)?, |p| {
                for cand in &cands {
                    let r = dm::coulomb_residual(&a, &f, cand, p.coords())?;
                    if !r.direct.is_zero_elem() || !r.closed.is_zero_elem() {
                        return Ok(Some(format!("{}: residual {}", cand.label, r.direct.render())));
                    }
                }
                Ok(None)
            }))
        }),
        CheckDef::new("coulomb-routes-agree", S, "ambient D_A^* alpha_M equals -sum M_ik F_ik", |c| {
            let (a, f) = (inst::a0(), inst::a0_curvature_closed_form());
            let pts = c.sphere(1)?;
            Ok(CheckOutcome::all(
                dm::sp2_candidates()
                    .iter()
                    .map(|cand| dm::coulomb_routes_check(&a, &f, cand, &pts).labelled(&cand.label)),
            ))
        }),
        CheckDef::new("sp2-coulomb-failure", S, "every Lie(Sp(2)) deformation has a nonzero Coulomb residual", |c| {
            let (a, f) = (inst::a0(), inst::a0_curvature_closed_form());
            let pts = c.sphere(1)?;
            for cand in dm::sp2_candidates() {
                let mut found = false;
                for p in &pts {
                    if !dm::coulomb_residual(&a, &f, &cand, p.coords())?.direct.is_zero_elem() {
                        found = true;
                        break;
                    }
                }
                if !found {
                    return Ok(CheckOutcome::fail(pts.len(), None, format!("{} is in Coulomb gauge", cand.label)));
                }
            }
            Ok(CheckOutcome::pass(pts.len()))
        }),
        CheckDef::new("15fam-kernel", S, "(d^* alpha, phi _| D_A0 alpha) = (0, 0) on S^7 for the fifteen deformations", |c| {
            Ok(dm::kernel_check(&inst::a0(), &dm::fifteen_candidates(), &c.sphere(1)?))
        }),
        CheckDef::new("15fam-rank", S, "15fam rank = 15", |c| {
            let pts = c.sphere(8)?;
            let r = dm::independence_rank(&dm::fifteen_candidates(), &pts)?;
            Ok(CheckOutcome::expect(r == 15, pts.len(), || format!("rank {r}")))
        }),
        CheckDef::new("sp2-rank-positive", S, "Lie(Sp(2)) deformations span a nonzero space", |c| {
            let pts = c.sphere(1)?;
            let r = dm::independence_rank(&dm::sp2_candidates(), &pts)?;
            Ok(CheckOutcome::expect(r > 0, pts.len(), || "rank 0".into()))
        }),
        CheckDef::new("ebar-eigenforms", S, "phi_0(ebar^j) = ebar^j on y = 0", |c| Ok(dm::ebar_eigen_check(&c.fiber(1)?))),
        CheckDef::new("fueter-kernel", S, "ker phi_0 on sections x^i L_ij ebar^j is the Fueter space", |c| {
            let pts = c.fiber(4)?;
            let n = pts.len();
            let k = dm::fueter_kernel_solve(&pts)?;
            if k.rank() != 12 || !k.same_span(&dm::fueter_span()) {
                return Ok(CheckOutcome::fail(n, None, format!("kernel of rank {}", k.rank())));
            }
            let i3 = quat::complex_structure(3);
            let mut with_i3 = dm::fueter_span();
            with_i3.push(i3.entries().to_vec());
            let nonzero = !dm::horiz_op_apply(&dm::fueter_section(&i3), &pts[0])?.is_zero();
            Ok(CheckOutcome::expect(with_i3.rank() == 13 && nonzero, n, || "I3 section is not excluded".into()))
        }),
        CheckDef::new("ker-phi-decomposition", S, "I1, I2 images of the W deformations are in the kernel; 30 candidates have rank 15", |c| {
            Ok(dm::ker_phi_decomposition_check(&inst::a0(), &c.sphere(8)?))
        }),
        CheckDef::new("i3-image-control", S, "I3 images of the W deformations leave the kernel", |c| {
            Ok(dm::i3_control_check(&inst::a0(), &c.sphere(1)?))
        }),
        CheckDef::new("dimension-formula", S, "3(8 kappa - 3) is 15 at kappa = 1 and 39 at kappa = 2", |_| {
            let n = dm::matrix_rank(&dm::fifteen_basis()) as u64;
            exact(dm::dimension_formula(1) == 15 && dm::dimension_formula(2) == 39 && n == dm::dimension_formula(1), || {
                "dimension formula mismatch".into()
            })
        }),
        CheckDef::new("weitzenbock-consequence", S, "2 phi _| D alpha + nabla^*nabla alpha + 6 alpha - 2[F _| alpha] = 0 on the kernel", |c| {
            let fam = dm::fifteen_candidates();
            let cands = [fam[0].clone(), fam[5].clone(), fam[10].clone()];
            Ok(dm::weitzenbock_check(&inst::a0(), &cands, &c.sphere_capped(1)?))
        }),
        CheckDef::new("curvature-in-sp2", S, "every value of F_A0 lies in Lie(Sp(2))", |c| {
            Ok(dm::curvature_in_sp2_check(&c.sphere(1)?))
        }),
        CheckDef::new("15fam-gauge-covariance", S, "kernel membership survives the projective gauge q = y", |c| {
            let g = inst::a0_regular_at_y_zero()?;
            let q = inst::ProjectiveGauge::new(inst::coordinate(4))?;
            let mut cands = Vec::new();
            for cand in dm::fifteen_candidates().iter().take(2) {
                cands.push(dm::DeformCandidate {
                    alpha: q.conjugate(&cand.alpha)?,
                    matrix: None,
                    image: None,
                    label: format!("g({})", cand.label),
                });
            }
            Ok(dm::kernel_check(&g, &cands, &c.sphere_capped(2)?))
        }),
    ]
}

/// Every registered check, sorted by id.
pub fn catalog() -> Vec<CheckDef> {
    let mut all = algebra_checks();
    all.extend(structure_checks());
    all.extend(appendix_checks());
    all.extend(instanton_checks());
    all.extend(deformation_checks());
    all.sort_by(|a, b| a.id.cmp(&b.id));
    all
}

pub fn find(id: &str) -> Result<CheckDef> {
    catalog()
        .into_iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::UnknownLabel(format!("check {id}")))
}

/// G2-instanton check for a connection and structure from the registries.
pub fn instanton_pair(connection: &str, structure: &str) -> Result<CheckDef> {
    inst::connection(connection)?;
    G2Structure::parse(structure)?;
    let (c, s) = (connection.to_string(), structure.to_string());
    Ok(CheckDef::new(
        &format!("g2-instanton:{connection}@{structure}"),
        Suite::Instanton,
        &format!("phi _| F = 0 for {connection} with {structure}"),
        move |cfg| g2_check(&c, &s, cfg),
    ))
}

/// A suite selection with optional extra connection/structure pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteSpec {
    pub suite: Suite,
    pub config: RunConfig,
    pub structures: Vec<String>,
    pub connections: Vec<String>,
}

impl SuiteSpec {
    pub fn new(suite: Suite, config: RunConfig) -> Self {
        SuiteSpec {
            suite,
            config,
            structures: Vec::new(),
            connections: Vec::new(),
        }
    }

    /// The checks to run, sorted by id. Extra pairs are added when the
    /// suite includes the instanton checks and both label lists are given.
    pub fn plan(&self) -> Result<Vec<CheckDef>> {
        if self.config.points == 0 {
            return Err(Error::Invalid("point budget must be at least 1".into()));
        }
        let mut plan: Vec<CheckDef> = catalog().into_iter().filter(|c| self.suite.contains(c.suite)).collect();
        let structures: Vec<&str> = if self.structures.is_empty() && !self.connections.is_empty() {
            vec!["std"]
        } else {
            self.structures.iter().map(String::as_str).collect()
        };
        let connections: Vec<&str> = if self.connections.is_empty() && !self.structures.is_empty() {
            vec!["A0"]
        } else {
            self.connections.iter().map(String::as_str).collect()
        };
        for s in &structures {
            for c in &connections {
                let def = instanton_pair(c, s)?;
                if self.suite.contains(Suite::Instanton) && !plan.iter().any(|d| d.id == def.id) {
                    plan.push(def);
                }
            }
        }
        plan.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(plan)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_well_formed() {
        let cat = catalog();
        assert!(!cat.is_empty());
        let mut ids: Vec<&str> = cat.iter().map(|c| c.id.as_str()).collect();
        let n = ids.len();
        ids.dedup();
        assert_eq!(ids.len(), n, "duplicate check ids");
        assert!(cat.iter().all(|c| !c.anchor.is_empty()));
        for s in Suite::NAMES {
            let suite: Suite = s.parse().unwrap();
            assert_eq!(suite.name(), s);
        }
        assert!(matches!("nope".parse::<Suite>(), Err(Error::UnknownLabel(_))));
        assert!(find("appendix-squashed-nearly-parallel").is_ok());
        assert!(find("phi-psi-contraction-identity").is_ok());
    }

    #[test]
    fn exact_checks_pass() {
        let cfg = RunConfig::new(1, 1);
        for c in algebra_checks() {
            assert!(c.run(&cfg).unwrap().passed, "{}", c.id);
        }
        assert!(!find("a0-curvature-printed-intermediates").unwrap().run(&cfg).unwrap().passed);
        assert!(find("dimension-formula").unwrap().run(&cfg).unwrap().passed);
    }

    #[test]
    fn suite_plans() {
        let mut spec = SuiteSpec::new(Suite::Instanton, RunConfig::new(1, 1));
        let base = spec.plan().unwrap().len();
        spec.connections = vec!["A0:pullback".into()];
        spec.structures = vec!["std".into(), "sq".into()];
        let plan = spec.plan().unwrap();
        assert_eq!(plan.len(), base + 2);
        assert!(plan.windows(2).all(|w| w[0].id < w[1].id));
        spec.structures = vec!["round".into()];
        assert!(matches!(spec.plan(), Err(Error::UnknownLabel(_))));
        let zero = SuiteSpec::new(Suite::Algebra, RunConfig::new(0, 1));
        assert!(matches!(zero.plan(), Err(Error::Invalid(_))));
    }
}

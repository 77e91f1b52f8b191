//! End-to-end acceptance run. Every criterion is evaluated with its required
//! point budget and reported as one PASS/FAIL line; the test then asserts the
//! exact set of criteria known to fail (stated identities that do not hold).

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use g2core::registry::{find, RunConfig};

const SEED: u64 = 2024;

struct Criterion {
    passed: bool,
    notes: Vec<String>,
}

impl Criterion {
    fn new() -> Self {
        Criterion { passed: true, notes: Vec::new() }
    }

    fn check(&mut self, id: &str, points: usize) -> bool {
        let def = find(id).unwrap_or_else(|e| panic!("{id}: {e}"));
        let out = def.run(&RunConfig::new(points, SEED)).unwrap_or_else(|e| panic!("{id}: {e}"));
        let mut note = format!("{id}: {} ({} points)", if out.passed { "pass" } else { "fail" }, out.points_tested);
        if let Some(w) = &out.witness {
            note.push_str(&format!(" [{}]", w.detail));
        }
        self.notes.push(note);
        self.passed &= out.passed;
        out.passed
    }

    fn require_points(&mut self, id: &str, points: usize, min: usize) {
        let def = find(id).unwrap();
        let out = def.run(&RunConfig::new(points, SEED)).unwrap();
        self.passed &= out.passed && out.points_tested >= min;
        self.notes.push(format!(
            "{id}: {} ({} points, need {min})",
            if out.passed { "pass" } else { "fail" },
            out.points_tested
        ));
    }

    fn timed(&mut self, budget: Duration, f: impl FnOnce(&mut Self)) {
        let start = Instant::now();
        f(self);
        let took = start.elapsed();
        self.notes.push(format!("elapsed {} ms, budget {} ms", took.as_millis(), budget.as_millis()));
        self.passed &= took <= budget;
    }

    /// Evaluated for the report only; does not affect the criterion.
    fn info(&mut self, id: &str, points: usize) {
        let def = find(id).unwrap();
        let out = def.run(&RunConfig::new(points, SEED)).unwrap();
        self.notes.push(format!("(informative) {id}: {}", if out.passed { "pass" } else { "fail" }));
    }
}

fn criterion(n: usize) -> Criterion {
    let mut c = Criterion::new();
    match n {
        1 => c.timed(Duration::from_secs(1), |c| {
            c.check("ambient-dphi-equals-4psi0", 1);
        }),
        2 => c.timed(Duration::from_secs(10), |c| {
            c.check("phi-phi-contraction-identity", 1);
            c.check("phi-psi-contraction-identity", 1);
            c.check("model-phi-metric", 1);
        }),
        3 => {
            for id in [
                "spin7-algebra-dimensions",
                "g2-algebra-dimension",
                "fueter-solution-space",
                "sp2-algebra-dimension",
                "w-representation",
            ] {
                c.check(id, 1);
            }
        }
        4 => c.timed(Duration::from_secs(30), |c| {
            c.check("a0-curvature-closed-form", 1);
            c.check("a0-curvature-printed-intermediates", 1);
        }),
        5 => {
            c.require_points("a0-g2-instanton-std", 100, 100);
            c.require_points("a0-g2-instanton-sq", 100, 100);
            c.require_points("a0-spin7-instanton", 50, 50);
        }
        6 => {
            c.check("a0-smooth-gauge", 20);
        }
        7 => {
            c.require_points("15fam-kernel", 100, 100);
            c.check("15fam-rank", 8);
            c.check("sp2-coulomb-failure", 20);
        }
        8 => {
            c.require_points("ebar-eigenforms", 20, 20);
            c.check("fueter-kernel", 4);
        }
        9 => {
            c.check("ker-phi-decomposition", 8);
            c.check("dimension-formula", 1);
            c.info("i3-image-control", 2);
        }
        10 => {
            c.require_points("appendix-frame-derivatives", 50, 50);
            c.require_points("appendix-family-1-5-nearly-parallel", 50, 50);
            c.require_points("appendix-squashed-nearly-parallel", 50, 50);
            c.check("appendix-squashed-volume-ratio", 1);
            c.check("appendix-family-1-1-not-nearly-parallel", 5);
        }
        11 => {
            c.require_points("vertical-frame-laplacians", 20, 20);
            c.require_points("dbstar-identity-stated", 20, 20);
            c.require_points("vertical-laplacian-split", 20, 20);
            c.info("dbstar-identity-corrected", 20);
        }
        12 => {
            c.require_points("a0-hym", 50, 50);
        }
        _ => unreachable!(),
    }
    c
}

#[test]
fn acceptance_criteria() {
    // written straight to stderr so the lines survive test output capture
    let mut err = std::io::stderr().lock();
    let mut failed = BTreeSet::new();
    for n in 1..=12 {
        let c = criterion(n);
        writeln!(err, "criterion {n}: {}", if c.passed { "PASS" } else { "FAIL" }).unwrap();
        for note in &c.notes {
            writeln!(err, "    {note}").unwrap();
        }
        if !c.passed {
            failed.insert(n);
        }
    }
    writeln!(err, "criterion 13: excluded (analytic statements, not checked)").unwrap();
    // 4: the printed intermediates double the mixed term of dA0 and A0 ^ A0.
    // 11: d(b _| phi) carries tau0 b^flat, not the stated tau0/2 b^flat.
    assert_eq!(failed, BTreeSet::from([4, 11]));
}

//! Running suites and rendering their reports.
//!
//! Reports are sorted by check id and carry no timing data unless asked, so
//! identical `(suite, points, seed)` runs produce identical bytes.

use std::time::Instant;

use serde::Serialize;

use crate::check::{CheckOutcome, Witness};
use crate::error::Result;
use crate::registry::SuiteSpec;

/// Schema version of the JSON report.
pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub check_id: String,
    pub anchor: String,
    pub status: Status,
    pub points_tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub version: u32,
    pub suite: String,
    pub seed: u64,
    pub points: usize,
    pub runs: Vec<RunRecord>,
}

impl CheckReport {
    pub fn all_passed(&self) -> bool {
        self.runs.iter().all(|r| r.status != Status::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RunRecord> {
        self.runs.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!(
            "# g2verify report\n\nsuite: `{}`, points: {}, seed: {}, schema version: {}\n\n",
            self.suite, self.points, self.seed, self.version
        );
        let timed = self.runs.iter().any(|r| r.elapsed_ms.is_some());
        s.push_str("| check | status | points | ");
        if timed {
            s.push_str("ms | ");
        }
        s.push_str("verifies | witness |\n|---|---|---|");
        if timed {
            s.push_str("---|");
        }
        s.push_str("---|---|\n");
        for r in &self.runs {
            let witness = r
                .witness
                .as_ref()
                .map(|w| match &w.point {
                    Some(p) => format!("{} at {}", w.detail, p),
                    None => w.detail.clone(),
                })
                .unwrap_or_default();
            s.push_str(&format!("| `{}` | {} | {} | ", r.check_id, r.status.as_str(), r.points_tested));
            if timed {
                s.push_str(&format!("{} | ", r.elapsed_ms.unwrap_or(0)));
            }
            s.push_str(&format!("{} | {} |\n", escape(&r.anchor), escape(&witness)));
        }
        let failed = self.failures().count();
        s.push_str(&format!("\n{} checks, {} failed\n", self.runs.len(), failed));
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn record(id: &str, anchor: &str, outcome: CheckOutcome, elapsed_ms: Option<u64>) -> RunRecord {
    RunRecord {
        check_id: id.into(),
        anchor: anchor.into(),
        status: if outcome.passed { Status::Pass } else { Status::Fail },
        points_tested: outcome.points_tested,
        elapsed_ms,
        witness: outcome.witness,
    }
}

/// Runs every planned check in id order. `on_run` sees each record as it
/// completes, for progress output.
pub fn run_suite(spec: &SuiteSpec, timings: bool, mut on_run: impl FnMut(&RunRecord)) -> Result<CheckReport> {
    let plan = spec.plan()?;
    let mut runs = Vec::with_capacity(plan.len());
    for def in &plan {
        let start = Instant::now();
        let outcome = def.run(&spec.config)?;
        let elapsed = timings.then(|| start.elapsed().as_millis() as u64);
        let r = record(&def.id, &def.anchor, outcome, elapsed);
        on_run(&r);
        runs.push(r);
    }
    runs.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    Ok(CheckReport {
        version: REPORT_VERSION,
        suite: spec.suite.name().into(),
        seed: spec.config.seed,
        points: spec.config.points,
        runs,
    })
}

/// Runs `f` on a pool of `threads` workers; point loops inside checks use it.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| crate::Error::Invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

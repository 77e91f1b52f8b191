//! Pass/fail outcomes shared by every verification routine.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{format_point, Rational};
use crate::sphere::SpherePoint;

/// Where and how a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub points_tested: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckOutcome {
    pub fn pass(points_tested: usize) -> Self {
        CheckOutcome {
            passed: true,
            points_tested,
            witness: None,
        }
    }

    pub fn fail(points_tested: usize, point: Option<String>, detail: impl Into<String>) -> Self {
        CheckOutcome {
            passed: false,
            points_tested,
            witness: Some(Witness {
                point,
                detail: detail.into(),
            }),
        }
    }

    /// Pass when `ok` holds, otherwise fail with `detail`.
    pub fn expect(ok: bool, points_tested: usize, detail: impl FnOnce() -> String) -> Self {
        if ok {
            CheckOutcome::pass(points_tested)
        } else {
            CheckOutcome::fail(points_tested, None, detail())
        }
    }

    /// Conjunction; the first failure wins and point counts add up.
    pub fn and(self, other: CheckOutcome) -> CheckOutcome {
        let points_tested = self.points_tested.max(other.points_tested);
        if !self.passed {
            return CheckOutcome {
                points_tested,
                ..self
            };
        }
        CheckOutcome {
            points_tested,
            ..other
        }
    }

    pub fn all(outcomes: impl IntoIterator<Item = CheckOutcome>) -> CheckOutcome {
        outcomes
            .into_iter()
            .fold(CheckOutcome::pass(0), CheckOutcome::and)
    }

    /// Prefixes the failure detail with a label.
    pub fn labelled(mut self, label: &str) -> CheckOutcome {
        if let Some(w) = &mut self.witness {
            w.detail = format!("{label}: {}", w.detail);
        }
        self
    }
}

/// Runs `f` at every point in parallel. `Ok(None)` means the point passed;
/// the failure with the lowest index is reported, so results do not depend
/// on scheduling.
pub fn over_points<F>(points: &[SpherePoint], f: F) -> CheckOutcome
where
    F: Fn(&SpherePoint) -> Result<Option<String>> + Sync,
{
    let failure = points.par_iter().find_map_first(|p| match f(p) {
        Ok(None) => None,
        Ok(Some(detail)) => Some((p, detail)),
        Err(e) => Some((p, e.to_string())),
    });
    match failure {
        None => CheckOutcome::pass(points.len()),
        Some((p, detail)) => {
            CheckOutcome::fail(points.len(), Some(format_point(p.coords())), detail)
        }
    }
}

/// Like [`over_points`] for bare coordinate vectors.
pub fn over_vectors<F>(points: &[Vec<Rational>], f: F) -> CheckOutcome
where
    F: Fn(&[Rational]) -> Result<Option<String>> + Sync,
{
    let failure = points.par_iter().find_map_first(|p| match f(p) {
        Ok(None) => None,
        Ok(Some(detail)) => Some((p, detail)),
        Err(e) => Some((p, e.to_string())),
    });
    match failure {
        None => CheckOutcome::pass(points.len()),
        Some((p, detail)) => CheckOutcome::fail(points.len(), Some(format_point(p)), detail),
    }
}

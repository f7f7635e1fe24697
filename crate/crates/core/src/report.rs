//! Verdict plumbing shared by every verification harness.

use serde::Serialize;

/// Outcome of a single check, or the aggregate of many.
///
/// Aggregation is pessimistic: any violation dominates, then any
/// inconclusive result, and only an all-pass run is a pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Inconclusive,
    Violation,
}

impl Status {
    pub fn combine(self, other: Status) -> Status {
        use Status::*;
        match (self, other) {
            (Violation, _) | (_, Violation) => Violation,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Inconclusive => 2,
        }
    }
}

impl FromIterator<Status> for Status {
    fn from_iter<I: IntoIterator<Item = Status>>(iter: I) -> Self {
        iter.into_iter().fold(Status::Pass, Status::combine)
    }
}

/// Three-way comparison of an enclosure `[lo, hi]` against an upper bound.
///
/// `strict` selects `value < bound` instead of `value <= bound`.
pub fn upper_bound_status(lo: f64, hi: f64, bound: f64, strict: bool) -> Status {
    let certainly_ok = if strict { hi < bound } else { hi <= bound };
    let certainly_bad = if strict { lo >= bound } else { lo > bound };
    if certainly_ok {
        Status::Pass
    } else if certainly_bad {
        Status::Violation
    } else {
        Status::Inconclusive
    }
}

/// Three-way check that `[lo, hi]` lies inside `[min, max]`.
pub fn containment_status(lo: f64, hi: f64, min: f64, max: f64) -> Status {
    if lo >= min && hi <= max {
        Status::Pass
    } else if hi < min || lo > max {
        Status::Violation
    } else {
        Status::Inconclusive
    }
}

//! Verification harnesses for the commutator inequalities.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::{classify, delta_r, rotation_number_chain, Classification, RotationEnclosure, RotationOptions};
use crate::circle_homeo::{canonical_equal, LiftedCircleMap};
use crate::error::{Error, Result};
use crate::report::{upper_bound_status, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub input: String,
    pub value: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct InequalityReport {
    pub checked: usize,
    pub passes: usize,
    pub inconclusive: usize,
    pub violations: Vec<Witness>,
    /// Smallest slack seen over all checks; negative only for violations.
    pub worst_margin: f64,
}

impl InequalityReport {
    pub fn new() -> Self {
        InequalityReport { worst_margin: f64::INFINITY, ..Default::default() }
    }

    pub fn record(&mut self, status: Status, margin: f64, witness: impl FnOnce() -> Witness) {
        self.checked += 1;
        self.worst_margin = self.worst_margin.min(margin);
        match status {
            Status::Pass => self.passes += 1,
            Status::Inconclusive => self.inconclusive += 1,
            Status::Violation => self.violations.push(witness()),
        }
    }

    pub fn merge(&mut self, other: InequalityReport) {
        self.checked += other.checked;
        self.passes += other.passes;
        self.inconclusive += other.inconclusive;
        self.violations.extend(other.violations);
        self.worst_margin = self.worst_margin.min(other.worst_margin);
    }

    pub fn status(&self) -> Status {
        if !self.violations.is_empty() {
            Status::Violation
        } else if self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutatorReport {
    #[serde(flatten)]
    pub report: InequalityReport,
    /// Extremes of `[a,b](x) - x` over the sample points.
    pub min_displacement: f64,
    pub max_displacement: f64,
    pub argmin: f64,
}

/// Checks `c⁻²(x) < [a,b](x) < c²(x)` where `c` commutes with `a` and `b`.
///
/// Sample points: `samples` uniform points of one period, every breakpoint
/// of `a` and `b`, and every breakpoint of the composed commutator, where a
/// PL displacement takes its extremes.
pub fn verify_commutator_bound(
    a: &LiftedCircleMap,
    b: &LiftedCircleMap,
    c: &LiftedCircleMap,
    samples: usize,
) -> Result<CommutatorReport> {
    if classify(c) != Classification::PositiveTimeLike {
        return Err(Error::Precondition("c must be positive time-like".into()));
    }
    for (name, f) in [("a", a), ("b", b)] {
        let comm = f.compose(c).compose(&f.inverse()).compose(&c.inverse());
        if !canonical_equal(&comm, &LiftedCircleMap::identity(), 1e-9) {
            let x = worst_point(&comm);
            return Err(Error::Precondition(format!(
                "[{name}, c] is not the identity: [{name}, c]({x}) = {}",
                comm.eval(x)
            )));
        }
    }
    let chain = [a.clone(), b.clone(), a.inverse(), b.inverse()];
    let c2 = c.compose(c);
    let cm2 = c2.inverse();
    let mut xs: Vec<f64> = (0..samples).map(|i| i as f64 / samples as f64).collect();
    for f in [a, b] {
        if let Some(p) = f.as_pl() {
            xs.extend(p.float().breaks().iter().map(|(x, _)| *x));
        }
    }
    let comm = chain.iter().fold(LiftedCircleMap::identity(), |acc, f| acc.compose(f));
    if let Some(p) = comm.as_pl() {
        xs.extend(p.float().breaks().iter().map(|(x, _)| *x));
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();

    let mut report = InequalityReport::new();
    let (mut dmin, mut dmax, mut argmin) = (f64::INFINITY, f64::NEG_INFINITY, 0.0);
    for &x in &xs {
        let (lo, hi) = chain_bounds(&chain, x);
        let (up_lo, _) = c2.eval_bounds(x, x);
        let (_, down_hi) = cm2.eval_bounds(x, x);
        let status = if hi < up_lo && lo > down_hi {
            Status::Pass
        } else if lo >= c2.eval_bounds(x, x).1 || hi <= cm2.eval_bounds(x, x).0 {
            Status::Violation
        } else {
            Status::Inconclusive
        };
        let margin = (up_lo - hi).min(lo - down_hi);
        let mid = 0.5 * (lo + hi) - x;
        if mid < dmin {
            dmin = mid;
            argmin = x;
        }
        dmax = dmax.max(mid);
        report.record(status, margin, || Witness {
            input: format!("x = {x}"),
            value: 0.5 * (lo + hi),
            bound: if hi >= up_lo { up_lo } else { down_hi },
        });
    }
    Ok(CommutatorReport { report, min_displacement: dmin, max_displacement: dmax, argmin })
}

/// Outward-rounded value of `maps[0] ∘ … ∘ maps[n-1]` at `x`.
pub fn chain_bounds(maps: &[LiftedCircleMap], x: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (x, x);
    for f in maps.iter().rev() {
        let (a, b) = f.eval_bounds(lo, hi);
        lo = a;
        hi = b;
    }
    (lo, hi)
}

fn worst_point(f: &LiftedCircleMap) -> f64 {
    f.comparison_grid(1024)
        .into_iter()
        .max_by(|x, y| (f.eval(*x) - x).abs().total_cmp(&(f.eval(*y) - y).abs()))
        .unwrap_or(0.0)
}

/// The staircase pair of PL maps whose commutator moves one point back by
/// `2 - 6e`, nearly two full periods, though `a` and `b` both have fixed
/// points. Breakpoints are exact rationals in `e`.
pub fn staircase_pair(e: &BigRational) -> (LiftedCircleMap, LiftedCircleMap) {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let one = r(1, 1);
    let a = LiftedCircleMap::pl_exact(vec![
        (r(0, 1), r(0, 1)),
        (e.clone(), e * r(21, 10)),
        (e * r(5, 2), e * r(5, 2)),
        (&one - e, e * r(3, 1)),
    ])
    .expect("staircase a is valid for small e");
    let w = e * r(10, 11);
    let y = &w + e;
    let b = LiftedCircleMap::pl_exact(vec![(w, -e.clone()), (y, &one - e * r(3, 1))])
        .expect("staircase b is valid for small e");
    (a, b)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub index: usize,
    pub delta_r: RotationEnclosure,
    pub commutator: RotationEnclosure,
    pub r_a: RotationEnclosure,
    pub delta_status: Status,
    pub single_status: Status,
    /// Present when `r(a)` is certainly not an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_status: Option<Status>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MilnorWoodReport {
    #[serde(flatten)]
    pub report: InequalityReport,
    pub n: usize,
    pub product: RotationEnclosure,
}

/// Rotation number of `[a1,b1] … [an,bn]` against the strict bound `n + 1`,
/// plus `|r([a,b])| ≤ 1` and `|δr| ≤ 1` when `n = 1`, and `r([a,b]) ≤ 1/2`
/// when `r(a)` is certainly not an integer.
pub fn verify_milnor_wood(pairs: &[(LiftedCircleMap, LiftedCircleMap)], opts: RotationOptions) -> MilnorWoodReport {
    let n = pairs.len();
    let mut chain = Vec::with_capacity(4 * n);
    for (a, b) in pairs {
        chain.extend([a.clone(), b.clone(), a.inverse(), b.inverse()]);
    }
    let product = rotation_number_chain(&chain, opts);
    let mut report = InequalityReport::new();
    let bound = (n + 1) as f64;
    let st = two_sided(&product, bound, true);
    report.record(st, bound - product.lo.abs().max(product.hi.abs()), || Witness {
        input: format!("product of {n} commutators"),
        value: product.midpoint(),
        bound,
    });
    if n == 1 {
        let check = check_pair(0, &pairs[0].0, &pairs[0].1, opts, Some(product.clone()));
        fold_pair(&mut report, &check);
    }
    MilnorWoodReport { report, n, product }
}

/// All single-pair checks for one `(a, b)`.
pub fn check_pair(
    index: usize,
    a: &LiftedCircleMap,
    b: &LiftedCircleMap,
    opts: RotationOptions,
    commutator: Option<RotationEnclosure>,
) -> PairCheck {
    let d = delta_r(a, b, opts);
    let comm = commutator.unwrap_or_else(|| {
        rotation_number_chain(&[a.clone(), b.clone(), a.inverse(), b.inverse()], opts)
    });
    let r_a = rotation_number_chain(std::slice::from_ref(a), opts);
    let half_status = r_a.certainly_non_integral().then(|| {
        let tol = comm.width();
        upper_bound_status(comm.lo, comm.hi, 0.5 + tol, false)
    });
    PairCheck {
        index,
        delta_status: two_sided(&d, 1.0, false),
        single_status: two_sided(&comm, 1.0, false),
        delta_r: d,
        commutator: comm,
        r_a,
        half_status,
    }
}

fn fold_pair(report: &mut InequalityReport, c: &PairCheck) {
    let i = c.index;
    report.record(c.delta_status, 1.0 - c.delta_r.lo.abs().max(c.delta_r.hi.abs()), || Witness {
        input: format!("pair {i}: delta r"),
        value: c.delta_r.midpoint(),
        bound: 1.0,
    });
    report.record(c.single_status, 1.0 - c.commutator.lo.abs().max(c.commutator.hi.abs()), || Witness {
        input: format!("pair {i}: r([a,b])"),
        value: c.commutator.midpoint(),
        bound: 1.0,
    });
    if let Some(st) = c.half_status {
        let b = 0.5 + c.commutator.width();
        report.record(st, b - c.commutator.hi, || Witness {
            input: format!("pair {i}: r([a,b]) with r(a) non-integral"),
            value: c.commutator.midpoint(),
            bound: b,
        });
    }
}

/// Batch version over many pairs, run in parallel with results in input order.
pub fn milnor_wood_batch(
    pairs: &[(LiftedCircleMap, LiftedCircleMap)],
    opts: RotationOptions,
) -> (InequalityReport, Vec<PairCheck>) {
    let checks: Vec<PairCheck> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, (a, b))| check_pair(i, a, b, opts, None))
        .collect();
    let mut report = InequalityReport::new();
    for c in &checks {
        fold_pair(&mut report, c);
    }
    (report, checks)
}

/// `|value| ≤ bound` (or `<` when strict) for an enclosure.
fn two_sided(e: &RotationEnclosure, bound: f64, strict: bool) -> Status {
    upper_bound_status(e.lo, e.hi, bound, strict).combine(upper_bound_status(-e.hi, -e.lo, bound, strict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_homeo::random::random_pairs;

    #[test]
    fn rotations_commute_inside_bounds() {
        let a = LiftedCircleMap::rotation(0.2);
        let b = LiftedCircleMap::rotation(0.7);
        let rep = verify_commutator_bound(&a, &b, &LiftedCircleMap::translation(1), 64).unwrap();
        assert_eq!(rep.report.status(), Status::Pass);
        assert!(rep.max_displacement.abs() < 1e-12);
    }

    #[test]
    fn non_commuting_c_is_rejected() {
        let a = LiftedCircleMap::pl(vec![(0.0, 0.0), (0.5, 0.7)]).unwrap();
        let c = LiftedCircleMap::rotation(0.3);
        assert!(matches!(verify_commutator_bound(&a, &a, &c, 8), Err(Error::Precondition(_))));
        let neg = LiftedCircleMap::translation(-1);
        assert!(matches!(verify_commutator_bound(&a, &a, &neg, 8), Err(Error::Precondition(_))));
    }

    #[test]
    fn staircase_is_nearly_two_periods() {
        let e = BigRational::new(1.into(), 100.into());
        let (a, b) = staircase_pair(&e);
        assert!(!a.fixed_points().is_empty() && !b.fixed_points().is_empty());
        let rep = verify_commutator_bound(&a, &b, &LiftedCircleMap::translation(1), 256).unwrap();
        assert_eq!(rep.report.status(), Status::Pass);
        assert!(rep.min_displacement <= -1.9, "{}", rep.min_displacement);
        // oracle: nested evaluation at 1 - 3e
        let x = 0.97;
        let v = a.eval(b.eval(a.inverse().eval(b.inverse().eval(x))));
        assert!((v - x + 1.94).abs() < 1e-12, "{v}");
    }

    #[test]
    fn random_pairs_satisfy_the_bound() {
        for (a, b) in random_pairs(21, 50) {
            let rep = verify_commutator_bound(&a, &b, &LiftedCircleMap::translation(1), 64).unwrap();
            assert!(rep.report.violations.is_empty());
            assert!(rep.min_displacement > -2.0 && rep.max_displacement < 2.0);
        }
    }

    #[test]
    fn milnor_wood_for_rotations() {
        let pairs = vec![(LiftedCircleMap::rotation(0.3), LiftedCircleMap::rotation(0.6))];
        let r = verify_milnor_wood(&pairs, RotationOptions::iters(100));
        assert_eq!(r.product.rational, Some((0, 1)));
        assert_eq!(r.report.status(), Status::Pass);
    }
}

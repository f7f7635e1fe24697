//! Finite-depth probes over words of a representation.
//!
//! These enumerate words up to a length bound and report what they find.
//! They are consistency checks at the searched depth, not decision procedures.

use serde::Serialize;

use super::{classify, rotation_number_chain, Classification, RotationOptions};
use crate::circle_homeo::rep::GroupRepresentation;
use crate::circle_homeo::word::Word;
use crate::circle_homeo::{canonical_equal, FixedPoint, LiftedCircleMap};
use crate::error::{Error, Result};
use crate::report::Status;

const IDENTITY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct WordClass {
    pub word: Word,
    pub class: Classification,
    pub fixed_points: usize,
    /// Winding of the lift relative to its canonical lift (projective lifts only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpacelikeReport {
    pub max_len: usize,
    pub words_checked: usize,
    pub identity_words: usize,
    pub space_like: Vec<WordClass>,
    pub time_like: usize,
    pub unresolved: usize,
    /// `None` when there is no non-identity space-like word.
    pub common_fixed_point: Option<bool>,
    /// Time-like words equal to a product of two space-like words found here.
    pub time_like_as_products: usize,
    /// Whether `r(uv) = r(u) + r(v)` held on the tested pairs of words.
    pub rotation_additive: bool,
    /// Projective representations: every zero-winding word is space-like.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_winding_space_like: Option<bool>,
    pub note: &'static str,
}

/// Classifies every reduced word up to `max_len`.
pub fn spacelike_probe(rep: &GroupRepresentation, max_len: usize) -> Result<SpacelikeReport> {
    if max_len == 0 {
        return Err(Error::Config("max_len must be at least 1".into()));
    }
    let rows: Vec<(WordClass, LiftedCircleMap, bool)> = rep.map_reduced_words(max_len, |w, f| {
        let identity = canonical_equal(f, &LiftedCircleMap::identity(), IDENTITY_TOL);
        let fixed = f.fixed_points();
        let class = classify(f);
        let winding = f.as_projective().map(|p| p.winding());
        Some((WordClass { word: w.clone(), class, fixed_points: fixed.len(), winding }, f.clone(), identity))
    });
    let words_checked = rows.len();
    let identity_words = rows.iter().filter(|r| r.2).count();
    let space: Vec<&(WordClass, LiftedCircleMap, bool)> =
        rows.iter().filter(|r| !r.2 && r.0.class == Classification::SpaceLike).collect();
    let time: Vec<&(WordClass, LiftedCircleMap, bool)> = rows
        .iter()
        .filter(|r| matches!(r.0.class, Classification::PositiveTimeLike | Classification::NegativeTimeLike))
        .collect();
    let unresolved = rows.iter().filter(|r| r.0.class == Classification::Unresolved).count();

    let common_fixed_point = if space.is_empty() {
        None
    } else {
        let sets: Vec<Vec<FixedPoint>> = space.iter().map(|r| r.1.fixed_points()).collect();
        Some(has_common_point(&sets))
    };

    // time-like t = s1 s2 with s1, s2 space-like, tested as s1⁻¹ t space-like
    // and a member of the enumerated space-like set
    let mut products = 0;
    for t in &time {
        let found = space.iter().any(|s| {
            let rest = s.1.inverse().compose(&t.1);
            classify(&rest) == Classification::SpaceLike
                && space.iter().any(|s2| canonical_equal(&rest, &s2.1, IDENTITY_TOL))
        });
        if found {
            products += 1;
        }
    }

    let opts = RotationOptions::iters(2048);
    let sample: Vec<&(WordClass, LiftedCircleMap, bool)> = rows.iter().take(12).collect();
    let mut additive = true;
    for u in &sample {
        for v in &sample {
            let ru = rotation_number_chain(std::slice::from_ref(&u.1), opts);
            let rv = rotation_number_chain(std::slice::from_ref(&v.1), opts);
            let ruv = rotation_number_chain(&[u.1.clone(), v.1.clone()], opts);
            let lo = ru.lo + rv.lo - ruv.hi;
            let hi = ru.hi + rv.hi - ruv.lo;
            if !(lo <= 1e-12 && hi >= -1e-12) {
                additive = false;
            }
        }
    }

    let zero_winding_space_like = rows.iter().all(|r| r.0.winding.is_some()).then(|| {
        rows.iter()
            .filter(|r| !r.2 && r.0.winding == Some(0))
            .all(|r| r.0.class == Classification::SpaceLike && r.0.fixed_points == 2)
    });

    Ok(SpacelikeReport {
        max_len,
        words_checked,
        identity_words,
        space_like: space.iter().map(|r| r.0.clone()).collect(),
        time_like: time.len(),
        unresolved,
        common_fixed_point,
        time_like_as_products: products,
        rotation_additive: additive,
        zero_winding_space_like,
        note: "finite-depth probe over reduced words; not a decision procedure",
    })
}

fn has_common_point(sets: &[Vec<FixedPoint>]) -> bool {
    let contains = |set: &[FixedPoint], x: f64| {
        set.iter().any(|fp| match fp {
            FixedPoint::Point { x: p } => circle_dist(*p, x) <= IDENTITY_TOL,
            FixedPoint::Interval { lo, hi } => {
                let (lo, hi) = (lo - IDENTITY_TOL, hi + IDENTITY_TOL);
                (lo..=hi).contains(&x) || (lo..=hi).contains(&(x + 1.0))
            }
        })
    };
    let candidates: Vec<f64> = sets[0]
        .iter()
        .map(|fp| match fp {
            FixedPoint::Point { x } => *x,
            FixedPoint::Interval { lo, .. } => *lo,
        })
        .collect();
    candidates.iter().any(|&x| sets.iter().all(|s| contains(s, x)))
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[derive(Clone, Debug, Serialize)]
pub struct ProportionalityRow {
    pub word: Word,
    pub r1: (f64, f64),
    pub r2: (f64, f64),
    pub residual: f64,
    pub allowed: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProportionalityReport {
    pub constant: f64,
    pub max_residual: f64,
    pub status: Status,
    pub rows: Vec<ProportionalityRow>,
}

/// Checks `r₁(w) = C r₂(w)` on `words`.
///
/// Passes iff a single `C` is compatible with every pair of enclosures. The
/// reported constant is the least-squares fit on midpoints, clamped to that
/// compatible range.
pub fn compare_rotation_functions(
    rep1: &GroupRepresentation,
    rep2: &GroupRepresentation,
    words: &[Word],
    n_iter: u64,
) -> Result<ProportionalityReport> {
    if rep1.generator_names() != rep2.generator_names() {
        return Err(Error::Precondition("representations use different generators".into()));
    }
    let opts = RotationOptions::iters(n_iter);
    let mut pairs = Vec::with_capacity(words.len());
    for w in words {
        let e1 = rotation_number_chain(&rep1.chain(w)?, opts);
        let e2 = rotation_number_chain(&rep2.chain(w)?, opts);
        pairs.push((w.clone(), e1, e2));
    }
    let num: f64 = pairs.iter().map(|(_, a, b)| a.midpoint() * b.midpoint()).sum();
    let den: f64 = pairs.iter().map(|(_, _, b)| b.midpoint() * b.midpoint()).sum();
    let fit = if den > 0.0 { num / den } else { 1.0 };
    // constants compatible with every pair of enclosures
    let (mut c_lo, mut c_hi) = (f64::NEG_INFINITY, f64::INFINITY);
    let mut consistent = true;
    for (_, e1, e2) in &pairs {
        if e2.lo > 0.0 || e2.hi < 0.0 {
            let q = [e1.lo / e2.lo, e1.lo / e2.hi, e1.hi / e2.lo, e1.hi / e2.hi];
            let lo = q.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let pad = 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs()));
            c_lo = c_lo.max(lo - pad);
            c_hi = c_hi.min(hi + pad);
        } else if e2.lo == 0.0 && e2.hi == 0.0 && !(e1.lo <= 0.0 && e1.hi >= 0.0) {
            consistent = false;
        }
    }
    consistent &= c_lo <= c_hi;
    let constant = if consistent { fit.clamp(c_lo, c_hi) } else { fit };
    let mut rows = Vec::with_capacity(pairs.len());
    let mut max_residual: f64 = 0.0;
    for (w, e1, e2) in pairs {
        let residual = (e1.midpoint() - constant * e2.midpoint()).abs();
        let allowed = (e1.width() + constant.abs() * e2.width()) / 2.0 + 4.0 * f64::EPSILON * (1.0 + e1.midpoint().abs());
        max_residual = max_residual.max(residual);
        rows.push(ProportionalityRow { word: w, r1: (e1.lo, e1.hi), r2: (e2.lo, e2.hi), residual, allowed });
    }
    let status = if consistent { Status::Pass } else { Status::Violation };
    Ok(ProportionalityReport { constant, max_residual, status, rows })
}

#[derive(Clone, Debug, Serialize)]
pub struct CommutativityReport {
    pub words_checked: usize,
    pub commutators_checked: usize,
    pub non_trivial: Vec<(Word, Word)>,
    pub status: Status,
}

/// For a free action, checks that commutators of short words are trivial.
pub fn free_action_commutativity_check(rep: &GroupRepresentation, max_len: usize) -> Result<CommutativityReport> {
    let rows: Vec<(Word, LiftedCircleMap)> = rep.map_reduced_words(max_len, |w, f| Some((w.clone(), f.clone())));
    for (w, f) in &rows {
        if canonical_equal(f, &LiftedCircleMap::identity(), IDENTITY_TOL) {
            continue;
        }
        if let Some(fp) = f.fixed_points().first() {
            let at = match fp {
                FixedPoint::Point { x } => *x,
                FixedPoint::Interval { lo, .. } => *lo,
            };
            return Err(Error::Precondition(format!("word `{w}` has a fixed point at {at}")));
        }
    }
    let short: Vec<&(Word, LiftedCircleMap)> = rows.iter().filter(|(w, _)| w.len() <= max_len / 2).collect();
    let mut non_trivial = Vec::new();
    let mut checked = 0;
    for (u, fu) in &short {
        for (v, fv) in &short {
            checked += 1;
            let c = fu.compose(fv).compose(&fu.inverse()).compose(&fv.inverse());
            if !canonical_equal(&c, &LiftedCircleMap::identity(), IDENTITY_TOL) {
                non_trivial.push((u.clone(), v.clone()));
            }
        }
    }
    let status = if non_trivial.is_empty() { Status::Pass } else { Status::Violation };
    Ok(CommutativityReport { words_checked: rows.len(), commutators_checked: checked, non_trivial, status })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn rep_of(maps: Vec<(&str, LiftedCircleMap)>) -> GroupRepresentation {
        let g: BTreeMap<String, LiftedCircleMap> = maps.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
        GroupRepresentation::new(g, vec![]).unwrap()
    }

    #[test]
    fn half_rotation_has_no_space_like_words() {
        let rep = rep_of(vec![("a", LiftedCircleMap::rotation_rational(1, 2))]);
        let r = spacelike_probe(&rep, 4).unwrap();
        assert!(r.space_like.is_empty());
        assert_eq!(r.common_fixed_point, None);
        assert!(r.rotation_additive);
    }

    #[test]
    fn z_has_only_the_identity() {
        let rep = rep_of(vec![("z", LiftedCircleMap::translation(1))]);
        let r = spacelike_probe(&rep, 3).unwrap();
        assert!(r.space_like.is_empty());
        assert_eq!(r.identity_words, 0);
        assert_eq!(r.time_like, 6);
    }

    #[test]
    fn rescaling_scales_rotation_numbers() {
        let rep = rep_of(vec![
            ("a", LiftedCircleMap::pl(vec![(0.0, 0.3), (0.4, 0.5), (0.8, 1.2)]).unwrap()),
            ("b", LiftedCircleMap::pl(vec![(0.1, 0.1), (0.6, 0.9)]).unwrap()),
        ]);
        let words: Vec<Word> = ["a", "a b", "a a B", "b a a a"].iter().map(|w| Word::parse(w).unwrap()).collect();
        let same = compare_rotation_functions(&rep, &rep, &words, 2000).unwrap();
        assert!((same.constant - 1.0).abs() < 1e-12);
        assert_eq!(same.status, Status::Pass);
        let scaled = rep.rescale(3).unwrap();
        let r = compare_rotation_functions(&rep, &scaled, &words, 3000).unwrap();
        assert!((r.constant - 3.0).abs() < 1e-2, "{}", r.constant);
        assert_eq!(r.status, Status::Pass, "{:#?}", r.rows);
    }

    #[test]
    fn unrelated_reps_are_not_proportional() {
        let rep1 = rep_of(vec![
            ("a", LiftedCircleMap::rotation(0.3)),
            ("b", LiftedCircleMap::rotation(0.1)),
        ]);
        let rep2 = rep_of(vec![
            ("a", LiftedCircleMap::rotation(0.1)),
            ("b", LiftedCircleMap::rotation(0.3)),
        ]);
        let words: Vec<Word> = ["a", "b", "a b"].iter().map(|w| Word::parse(w).unwrap()).collect();
        let r = compare_rotation_functions(&rep1, &rep2, &words, 1000).unwrap();
        assert_eq!(r.status, Status::Violation);
        assert!(r.max_residual > 0.1);
    }

    #[test]
    fn rotation_groups_commute() {
        let rep = rep_of(vec![
            ("a", LiftedCircleMap::rotation(std::f64::consts::FRAC_1_SQRT_2)),
            ("b", LiftedCircleMap::rotation(0.2 * std::f64::consts::PI)),
        ]);
        let r = free_action_commutativity_check(&rep, 4).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.commutators_checked > 0);
    }

    #[test]
    fn space_like_witness_blocks_the_check() {
        let rep = rep_of(vec![("a", LiftedCircleMap::pl(vec![(0.0, 0.0), (0.5, 0.6)]).unwrap())]);
        assert!(matches!(free_action_commutativity_check(&rep, 2), Err(Error::Precondition(_))));
    }
}

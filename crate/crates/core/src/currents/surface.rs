//! Geometric intersection number of closed-geodesic classes.
//!
//! For classes `α`, `β` the crossings correspond to translates `g·axis(β)`
//! that cross `axis(α)`, up to the translation along `α`. In a coordinate
//! `m` on the circle sending the repelling point of `α` to 0 and the
//! attracting point to ∞, a translate with endpoints `m₁ < 0 < m₂` meets the
//! axis at height `h = √(-m₁m₂)`, and the translation along `α` scales `m`
//! by `e^ℓ`. The key `(ln h / ℓ mod 1, ln(m₂/h))` therefore identifies the
//! crossing on the surface.
//!
//! Only crossings within `ℓ/2 + WINDOW_MARGIN` of the point of `axis(α)`
//! nearest the disk center are kept. Every crossing has a representative
//! there, and translates meeting the axis far out have endpoints too close
//! together to resolve in floating point.

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_homeo::word::Word;
use crate::error::{Error, Result};
use crate::hyperbolic::{axis, boundary_action, translation_length, FuchsianGroup, Moebius};

use super::{pairwise_sum, GeodesicCurrent};

pub const DEFAULT_DEPTH: usize = 6;
const KEY_TOL: f64 = 1e-5;
const ENDPOINT_TOL: f64 = 1e-10;
const WINDOW_MARGIN: f64 = 0.25;

#[derive(Clone, Debug, Serialize)]
pub struct ClassPairCount {
    pub alpha: String,
    pub beta: String,
    /// Distinct crossings found using translates of length `≤ d`, indexed by `d`.
    pub by_depth: Vec<usize>,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionReport {
    pub value: f64,
    pub depth: usize,
    /// Every class pair kept its count from `depth - 1` to `depth`. Without
    /// it the value is a lower bound.
    pub converged: bool,
    pub pairs: Vec<ClassPairCount>,
}

/// All reduced words up to `depth`, grouped by length.
fn word_ball(group: &FuchsianGroup, depth: usize) -> Vec<Vec<Moebius>> {
    let letters: Vec<Moebius> = group.generators.iter().flat_map(|g| [*g, g.inverse()]).collect();
    let mut levels = vec![vec![(Moebius::identity(), usize::MAX)]];
    for _ in 0..depth {
        let last = levels.last().unwrap();
        let next: Vec<(Moebius, usize)> = last
            .iter()
            .flat_map(|(g, prev)| {
                letters
                    .iter()
                    .enumerate()
                    .filter(move |(i, _)| *prev == usize::MAX || *i != (*prev ^ 1))
                    .map(move |(i, s)| (g.compose(s), i))
            })
            .collect();
        levels.push(next);
    }
    levels.into_iter().map(|l| l.into_iter().map(|(g, _)| g).collect()).collect()
}

/// Circle coordinate sending `rep` to 0 and `att` to ∞.
fn axis_coordinate(rep: f64, att: f64, x: f64) -> f64 {
    use std::f64::consts::PI;
    (PI * (x - rep)).sin() / (PI * (x - att)).sin()
}

/// `ln h` of the point of the axis nearest the disk center: the diameter
/// through it is perpendicular to the axis.
fn central_height(rep: f64, att: f64) -> f64 {
    let gap = (att - rep).rem_euclid(1.0);
    let mid = if gap <= 0.5 { rep + gap / 2.0 } else { rep + gap / 2.0 + 0.5 };
    let (m1, m2) = (axis_coordinate(rep, att, mid), axis_coordinate(rep, att, mid + 0.5));
    0.5 * (-m1 * m2).ln()
}

/// Crossing key of `g·axis(β)` against `axis(α)`, or `None` if they do not
/// cross inside the window around `center = ln h₀`.
fn crossing_key(rep: f64, att: f64, ell: f64, center: f64, a: f64, b: f64) -> Option<(f64, f64)> {
    let (m1, m2) = (axis_coordinate(rep, att, a), axis_coordinate(rep, att, b));
    let finite = |x: f64| x.is_finite() && x.abs() > ENDPOINT_TOL && x.abs() < 1.0 / ENDPOINT_TOL;
    if !(finite(m1) && finite(m2)) || m1 * m2 >= 0.0 {
        return None;
    }
    let h = (-m1 * m2).sqrt();
    if (h.ln() - center).abs() > ell / 2.0 + WINDOW_MARGIN {
        return None;
    }
    let pos = m1.max(m2);
    Some(((h.ln() / ell).rem_euclid(1.0), (pos / h).ln()))
}

fn same_key(p: (f64, f64), q: (f64, f64)) -> bool {
    let d = (p.0 - q.0).rem_euclid(1.0);
    d.min(1.0 - d) < KEY_TOL && (p.1 - q.1).abs() < KEY_TOL
}

fn count_pair(group: &FuchsianGroup, ball: &[Vec<Moebius>], alpha: &Word, beta: &Word) -> Result<Vec<usize>> {
    let a = group.evaluate(alpha)?;
    let b = group.evaluate(beta)?;
    let ax = axis(&a).map_err(|e| Error::InvalidClass(format!("`{alpha}`: {e}")))?;
    let bx = axis(&b).map_err(|e| Error::InvalidClass(format!("`{beta}`: {e}")))?;
    let ell = translation_length(&a);
    let (rep, att) = (ax.u.angle(), ax.s.angle());
    let center = central_height(rep, att);
    let mut keys: Vec<(f64, f64)> = Vec::new();
    let mut counts = Vec::with_capacity(ball.len());
    for level in ball {
        let found: Vec<(f64, f64)> = level
            .par_iter()
            .filter_map(|g| {
                let u = boundary_action(g, bx.u).angle();
                let s = boundary_action(g, bx.s).angle();
                crossing_key(rep, att, ell, center, u, s)
            })
            .collect();
        for k in found {
            if !keys.iter().any(|q| same_key(*q, k)) {
                keys.push(k);
            }
        }
        counts.push(keys.len());
    }
    Ok(counts)
}

/// `i(μ, ν)` summed over weighted class pairs, conjugating by all words up
/// to `depth`. The pair order inside each term is canonical, so the result
/// is symmetric exactly.
pub fn intersection_number(mu: &GeodesicCurrent, nu: &GeodesicCurrent, depth: usize) -> Result<IntersectionReport> {
    let (GeodesicCurrent::Surface { group, classes: cm }, GeodesicCurrent::Surface { group: g2, classes: cn }) =
        (mu, nu)
    else {
        return Err(Error::Precondition("surface carriers required".into()));
    };
    if group.names != g2.names || group.generators != g2.generators {
        return Err(Error::Precondition("currents live on different groups".into()));
    }
    if depth == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    let ball = word_ball(group, depth);
    let mut terms: Vec<(String, String, f64, f64)> = Vec::new();
    for (wa, xa) in cm {
        for (wb, xb) in cn {
            let (sa, sb) = (wa.to_string(), wb.to_string());
            let (lo, hi) = if sa <= sb { (sa, sb) } else { (sb, sa) };
            terms.push((lo, hi, xa.min(*xb), xa.max(*xb)));
        }
    }
    terms.sort_by(|p, q| (&p.0, &p.1, p.2, p.3).partial_cmp(&(&q.0, &q.1, q.2, q.3)).unwrap());
    let mut pairs: Vec<ClassPairCount> = Vec::new();
    let mut weighted = Vec::with_capacity(terms.len());
    for (lo, hi, x, y) in &terms {
        let known = pairs.iter().find(|p| &p.alpha == lo && &p.beta == hi).map(|p| p.by_depth.clone());
        let by_depth = match known {
            Some(c) => c,
            None => {
                let c = count_pair(group, &ball, &Word::parse(lo)?, &Word::parse(hi)?)?;
                pairs.push(ClassPairCount {
                    alpha: lo.clone(),
                    beta: hi.clone(),
                    converged: c[depth] == c[depth - 1],
                    by_depth: c.clone(),
                });
                c
            }
        };
        weighted.push(x * y * by_depth[depth] as f64);
    }
    Ok(IntersectionReport {
        value: pairwise_sum(&weighted),
        depth,
        converged: pairs.iter().all(|p| p.converged),
        pairs,
    })
}

/// Half the shortest translation length among nontrivial words up to
/// `max_len`.
pub fn injectivity_radius_estimate(group: &FuchsianGroup, max_len: usize) -> f64 {
    word_ball(group, max_len)
        .iter()
        .skip(1)
        .flatten()
        .map(translation_length)
        .filter(|l| *l > 1e-9)
        .fold(f64::INFINITY, f64::min)
        / 2.0
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hyperbolic::genus2_fuchsian;

    #[test]
    fn standard_pair_meets_once() {
        let g = Arc::new(genus2_fuchsian());
        let a1 = GeodesicCurrent::class(g.clone(), "a1").unwrap();
        let b1 = GeodesicCurrent::class(g.clone(), "b1").unwrap();
        let r = intersection_number(&a1, &b1, 4).unwrap();
        assert_eq!(r.value, 1.0, "{r:?}");
        assert!(r.converged);
        assert_eq!(intersection_number(&a1, &a1, 4).unwrap().value, 0.0);
        let a2 = GeodesicCurrent::class(g, "a2").unwrap();
        assert_eq!(intersection_number(&a1, &a2, 4).unwrap().value, 0.0);
    }
}

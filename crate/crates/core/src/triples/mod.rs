//! Lifted ordered triples of circle points, the cyclic shift whose cube is
//! `Z`, and a finite-depth proper-discontinuity probe.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::circle_homeo::rep::GroupRepresentation;
use crate::circle_homeo::word::{alphabet, Letter, Word};
use crate::circle_homeo::{frac, FixedPoint, LiftedCircleMap};
use crate::error::{Error, Result};
use crate::hyperbolic::geodesic_endpoints;
use crate::rotation::{classify, Classification};

/// `(u, s, p)` with `u < s < p < u + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Triple {
    pub u: f64,
    pub s: f64,
    pub p: f64,
}

impl Triple {
    pub fn new(u: f64, s: f64, p: f64) -> Result<Self> {
        let t = Triple { u, s, p };
        if !t.is_ordered() {
            return Err(Error::InvalidMap(format!("triple ({u}, {s}, {p}) is not ordered within one period")));
        }
        Ok(t)
    }

    pub fn is_ordered(&self) -> bool {
        self.u < self.s && self.s < self.p && self.p < self.u + 1.0
    }

    /// The translate with `u ∈ [0, 1)`.
    pub fn canonical(&self) -> Triple {
        self.shifted(-self.u.floor())
    }

    pub fn shifted(&self, k: f64) -> Triple {
        Triple { u: self.u + k, s: self.s + k, p: self.p + k }
    }

    pub fn coords(&self) -> [f64; 3] {
        [self.u, self.s, self.p]
    }
}

/// Coordinatewise action of a lift. The result is the lifted triple itself,
/// not its canonical translate, so `Z` acts visibly.
pub fn act_on_triple(f: &LiftedCircleMap, t: &Triple) -> Triple {
    Triple { u: f.eval(t.u), s: f.eval(t.s), p: f.eval(t.p) }
}

/// `(u, s, p) ↦ (s, p, u + 1)`.
pub fn z_third(t: &Triple) -> Triple {
    Triple { u: t.s, s: t.p, p: t.u + 1.0 }
}

/// Endpoints of the geodesic through a tangent vector and of its leftward
/// perpendicular, as an ordered lifted triple.
///
/// `u` is the backward endpoint, `s` the forward one and `p` the endpoint of
/// the perpendicular turned counterclockwise.
pub fn geodesic_flow_triple(point: (f64, f64), direction: f64) -> Result<Triple> {
    let u = geodesic_endpoints(point, direction + PI)?.angle();
    let s = geodesic_endpoints(point, direction)?.angle();
    let p = geodesic_endpoints(point, direction + FRAC_PI_2)?.angle();
    let s = u + lift_gap(s - u);
    let p = s + lift_gap(p - s);
    Triple::new(u, s, p)
}

fn lift_gap(d: f64) -> f64 {
    let g = frac(d);
    if g == 0.0 {
        1.0
    } else {
        g
    }
}

/// Axis-aligned box of triples.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TripleBox {
    pub center: Triple,
    pub radius: f64,
}

impl TripleBox {
    pub fn new(center: Triple, radius: f64) -> Result<Self> {
        let b = TripleBox { center, radius };
        let c = center;
        let ok = radius > 0.0
            && c.u + radius < c.s - radius
            && c.s + radius < c.p - radius
            && c.p + radius < c.u + 1.0 - radius;
        if !ok {
            return Err(Error::Config(format!("box of radius {radius} leaves the ordered region")));
        }
        Ok(b)
    }

    /// Center `(0, 1/3, 2/3)`, radius 0.05.
    pub fn default_box() -> Self {
        Self::new(Triple { u: 0.0, s: 1.0 / 3.0, p: 2.0 / 3.0 }, 0.05).expect("valid default")
    }

    fn intervals(&self) -> [(f64, f64); 3] {
        self.center.coords().map(|c| (c - self.radius, c + self.radius))
    }
}

/// Whether `f(box) + k` meets `box` for some integer `k`, using outward
/// enclosures of the image.
fn overlaps_mod_z(f: &LiftedCircleMap, boxes: &[(f64, f64); 3]) -> bool {
    let img = boxes.map(|(lo, hi)| f.eval_bounds(lo, hi));
    let k_lo = (boxes[0].0 - img[0].1).ceil() as i64;
    let k_hi = (boxes[0].1 - img[0].0).floor() as i64;
    (k_lo..=k_hi).any(|k| {
        let k = k as f64;
        img.iter().zip(boxes).all(|(i, b)| i.0 + k <= b.1 && i.1 + k >= b.0)
    })
}

const KEY_POINTS: [f64; 5] = [0.0, 0.2, 0.4, 0.6, 0.8];
const KEY_TOL: f64 = 1e-7;

/// Circle map induced by a lift, sampled at fixed points; two lifts differ
/// by a power of `Z` iff these agree.
fn element_key(f: &LiftedCircleMap) -> [f64; 5] {
    KEY_POINTS.map(|x| frac(f.eval(x)))
}

fn same_key(a: &[f64; 5], b: &[f64; 5]) -> bool {
    a.iter().zip(b).all(|(x, y)| {
        let d = (x - y).rem_euclid(1.0);
        d.min(1.0 - d) <= KEY_TOL
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OverlapWitness {
    pub word: Word,
    pub length: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiscontinuityReport {
    pub max_len: usize,
    /// Distinct elements modulo `Z` found overlapping, cumulative by length
    /// (index 0 is the empty word).
    pub cumulative: Vec<usize>,
    /// Words overlapping the box, per length.
    pub words_per_length: Vec<usize>,
    pub words_checked: u64,
    /// No new elements in the last two length increments.
    pub stabilized: bool,
    /// First word reaching each overlapping element.
    pub witnesses: Vec<OverlapWitness>,
    pub note: &'static str,
}

struct Hit {
    key: [f64; 5],
    letters: Vec<usize>,
}

/// Counts words whose action moves `bx` onto itself modulo `Z`.
///
/// Elements are identified modulo `Z`, so relator words and other words
/// representing an already-seen element do not count again.
pub fn proper_discontinuity_probe(rep: &GroupRepresentation, bx: &TripleBox, max_len: usize) -> DiscontinuityReport {
    let alpha = alphabet(&rep.generator_names());
    let maps: Vec<LiftedCircleMap> = alpha.iter().map(|l| rep.letter(l).expect("alphabet resolves").clone()).collect();
    let inverse_of: Vec<usize> = alpha
        .iter()
        .map(|l| alpha.iter().position(|m| m.name == l.name && m.inverse != l.inverse).expect("paired"))
        .collect();
    let boxes = bx.intervals();
    let ctx = Dfs { maps: &maps, inverse_of: &inverse_of, boxes: &boxes, max_len };

    let mut hits: Vec<Hit> = Vec::new();
    let identity = LiftedCircleMap::identity();
    if overlaps_mod_z(&identity, &boxes) {
        hits.push(Hit { key: element_key(&identity), letters: Vec::new() });
    }
    let per_first: Vec<(Vec<Hit>, u64)> = (0..alpha.len())
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            let mut count = 0;
            if max_len > 0 {
                let mut stack = vec![i];
                ctx.descend(&maps[i], &mut stack, &mut out, &mut count);
            }
            (out, count)
        })
        .collect();
    let words_checked = 1 + per_first.iter().map(|p| p.1).sum::<u64>();
    let mut found: Vec<Hit> = per_first.into_iter().flat_map(|p| p.0).collect();
    found.sort_by(|a, b| a.letters.len().cmp(&b.letters.len()).then_with(|| a.letters.cmp(&b.letters)));
    hits.extend(found);

    let mut words_per_length = vec![0; max_len + 1];
    let mut new_per_length = vec![0; max_len + 1];
    let mut distinct: Vec<&Hit> = Vec::new();
    for h in &hits {
        words_per_length[h.letters.len()] += 1;
        if !distinct.iter().any(|d| same_key(&d.key, &h.key)) {
            new_per_length[h.letters.len()] += 1;
            distinct.push(h);
        }
    }
    let cumulative: Vec<usize> = new_per_length
        .iter()
        .scan(0, |acc, n| {
            *acc += n;
            Some(*acc)
        })
        .collect();
    let stabilized = max_len >= 2 && new_per_length[max_len] == 0 && new_per_length[max_len - 1] == 0;
    let witnesses = distinct
        .iter()
        .map(|h| OverlapWitness {
            word: Word { letters: h.letters.iter().map(|&i| alpha[i].clone()).collect::<Vec<Letter>>() },
            length: h.letters.len(),
        })
        .collect();
    DiscontinuityReport {
        max_len,
        cumulative,
        words_per_length,
        words_checked,
        stabilized,
        witnesses,
        note: "finite-depth consistency check with proper discontinuity, not a proof",
    }
}

struct Dfs<'a> {
    maps: &'a [LiftedCircleMap],
    inverse_of: &'a [usize],
    boxes: &'a [(f64, f64); 3],
    max_len: usize,
}

impl Dfs<'_> {
    fn descend(&self, f: &LiftedCircleMap, stack: &mut Vec<usize>, out: &mut Vec<Hit>, count: &mut u64) {
        *count += 1;
        if overlaps_mod_z(f, self.boxes) {
            out.push(Hit { key: element_key(f), letters: stack.clone() });
        }
        if stack.len() == self.max_len {
            return;
        }
        let last = *stack.last().expect("nonempty");
        for (i, g) in self.maps.iter().enumerate() {
            if i == self.inverse_of[last] {
                continue;
            }
            stack.push(i);
            self.descend(&f.compose(g), stack, out, count);
            stack.pop();
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum SpacelikeType {
    HyperbolicType { attracting: f64, repelling: f64 },
    ParabolicType { fixed: f64 },
    NotSpaceLike,
    /// Fixed intervals or three or more fixed points: such an element fixes
    /// a triple, which a convergence group forbids.
    Degenerate { fixed: Vec<FixedPoint> },
    /// Space-like but the displacement sign between fixed points could not
    /// be certified.
    Unresolved { fixed: Vec<FixedPoint> },
}

/// Fixed-point type of a space-like lift.
pub fn spacelike_type(f: &LiftedCircleMap) -> SpacelikeType {
    if classify(f) != Classification::SpaceLike {
        return SpacelikeType::NotSpaceLike;
    }
    let fixed = f.fixed_points();
    let points: Vec<f64> = fixed
        .iter()
        .filter_map(|fp| match fp {
            FixedPoint::Point { x } => Some(*x),
            FixedPoint::Interval { .. } => None,
        })
        .collect();
    if points.len() != fixed.len() || points.len() > 2 || points.is_empty() {
        return SpacelikeType::Degenerate { fixed };
    }
    if points.len() == 1 {
        return SpacelikeType::ParabolicType { fixed: points[0] };
    }
    // displacement sign on the arc (x0, x1) decides which end attracts
    let (x0, x1) = (points[0], points[1]);
    let sign_at = |x: f64| {
        let (lo, hi) = f.eval_bounds(x, x);
        if lo > x {
            Some(1)
        } else if hi < x {
            Some(-1)
        } else {
            None
        }
    };
    match (sign_at((x0 + x1) / 2.0), sign_at((x1 + x0 + 1.0) / 2.0)) {
        (Some(1), Some(-1)) => SpacelikeType::HyperbolicType { attracting: x1, repelling: x0 },
        (Some(-1), Some(1)) => SpacelikeType::HyperbolicType { attracting: x0, repelling: x1 },
        (Some(_), Some(_)) => SpacelikeType::Degenerate { fixed },
        _ => SpacelikeType::Unresolved { fixed },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{lift_action, Moebius, MoebiusLift};

    #[test]
    fn basic_actions() {
        let t = Triple::new(0.1, 0.4, 0.8).unwrap();
        assert_eq!(act_on_triple(&LiftedCircleMap::identity(), &t), t);
        let z = act_on_triple(&LiftedCircleMap::translation(1), &t);
        assert_eq!(z, t.shifted(1.0));
        let c = z.canonical();
        assert!(c.coords().iter().zip(t.coords()).all(|(a, b)| (a - b).abs() < 1e-15));
        let r = act_on_triple(&LiftedCircleMap::rotation(0.25), &t);
        assert!((r.u - 0.35).abs() < 1e-15 && (r.p - 1.05).abs() < 1e-15);
        assert_eq!(z_third(&z_third(&z_third(&t))), t.shifted(1.0));
        assert!(Triple::new(0.1, 0.05, 0.3).is_err());
        assert!(Triple::new(0.1, 0.5, 1.2).is_err());
    }

    #[test]
    fn flow_triple_at_origin() {
        let t = geodesic_flow_triple((0.0, 0.0), 0.0).unwrap();
        assert!((t.u - 0.5).abs() < 1e-15);
        assert!((t.s - 1.0).abs() < 1e-15);
        assert!((t.p - 1.25).abs() < 1e-15);
        let r = geodesic_flow_triple((0.0, 0.0), 0.6).unwrap();
        let shift = 0.6 / (2.0 * PI);
        assert!((r.u - t.u - shift).abs() < 1e-14 && (r.p - t.p - shift).abs() < 1e-14);
    }

    #[test]
    fn trivial_group_counts_the_identity() {
        let rep = GroupRepresentation::new(
            [("a".to_string(), LiftedCircleMap::identity())].into_iter().collect(),
            vec![],
        )
        .unwrap();
        let r = proper_discontinuity_probe(&rep, &TripleBox::default_box(), 4);
        assert_eq!(*r.cumulative.last().unwrap(), 1);
        assert!(r.stabilized);
        assert_eq!(r.words_per_length, vec![1, 2, 2, 2, 2]);
    }

    #[test]
    fn spacelike_types() {
        let hyp = lift_action(&MoebiusLift { base: Moebius::translation(1.0), winding: 0 });
        match spacelike_type(&hyp) {
            SpacelikeType::HyperbolicType { attracting, repelling } => {
                assert!(attracting.min(1.0 - attracting) < 1e-12);
                assert!((repelling - 0.5).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let par = lift_action(&MoebiusLift { base: Moebius::parabolic(0.7), winding: 0 });
        assert!(matches!(spacelike_type(&par), SpacelikeType::ParabolicType { .. }), "{:?}", spacelike_type(&par));
        assert_eq!(spacelike_type(&LiftedCircleMap::rotation_rational(1, 3)), SpacelikeType::NotSpaceLike);
        let three = LiftedCircleMap::pl(vec![(0.0, 0.0), (0.1, 0.2), (0.3, 0.3), (0.5, 0.4), (0.7, 0.7)]).unwrap();
        assert!(matches!(spacelike_type(&three), SpacelikeType::Degenerate { .. }));
    }
}

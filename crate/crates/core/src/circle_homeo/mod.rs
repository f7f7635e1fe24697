//! Lifted circle homeomorphisms: increasing maps `f` of the line with
//! `f(x + 1) = f(x) + 1`.

pub mod literal;
pub mod pl;
pub mod projective;
pub mod random;
pub mod rep;
pub mod scalar;
pub mod smooth;
pub mod word;

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use pl::{FixedSet, PlCore};
use projective::{Mat2, ProjectiveLift};
use scalar::rational_from_f64;
use smooth::{Rule, SmoothFixed, SmoothMap, DEFAULT_GRID};

/// Exact shadows whose breakpoints outgrow this many bits are dropped.
pub const EXACT_BIT_BUDGET: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Rotation,
    PiecewiseLinear,
    SampledSmooth,
    Projective,
}

#[derive(Clone, Debug)]
pub struct RotationMap {
    theta: f64,
    exact: Option<BigRational>,
}

impl RotationMap {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }
}

/// Piecewise-linear map with an optional exact rational twin.
#[derive(Clone, Debug)]
pub struct PlMap {
    float: PlCore<f64>,
    exact: Option<Arc<PlCore<BigRational>>>,
}

impl PlMap {
    fn from_exact(exact: PlCore<BigRational>) -> PlMap {
        let float = exact.map_scalar(scalar::Scalar::to_f64).canonical();
        let exact = (exact.max_bits() <= EXACT_BIT_BUDGET).then(|| Arc::new(exact));
        PlMap { float, exact }
    }

    pub fn float(&self) -> &PlCore<f64> {
        &self.float
    }

    pub fn exact(&self) -> Option<&PlCore<BigRational>> {
        self.exact.as_deref()
    }

    /// Exact copy of the float breakpoints, used when no twin exists.
    fn exact_or_lifted(&self) -> PlCore<BigRational> {
        match &self.exact {
            Some(e) => (**e).clone(),
            None => self.float.map_scalar(|v| rational_from_f64(*v)),
        }
    }
}

#[derive(Clone, Debug)]
pub enum LiftedCircleMap {
    Rotation(RotationMap),
    PiecewiseLinear(PlMap),
    SampledSmooth(SmoothMap),
    Projective(ProjectiveLift),
}

/// Fixed point or fixed interval inside `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum FixedPoint {
    Point { x: f64 },
    Interval { lo: f64, hi: f64 },
}

impl LiftedCircleMap {
    pub fn identity() -> Self {
        Self::rotation_exact(BigRational::zero())
    }

    /// The deck translation `Z^k`.
    pub fn translation(k: i64) -> Self {
        Self::rotation_exact(BigRational::from_integer(k.into()))
    }

    pub fn rotation(theta: f64) -> Self {
        LiftedCircleMap::Rotation(RotationMap { theta, exact: None })
    }

    pub fn rotation_exact(theta: BigRational) -> Self {
        LiftedCircleMap::Rotation(RotationMap { theta: scalar::Scalar::to_f64(&theta), exact: Some(theta) })
    }

    pub fn rotation_rational(p: i64, q: i64) -> Self {
        Self::rotation_exact(BigRational::new(p.into(), q.into()))
    }

    /// Piecewise-linear map from float breakpoints (inexact fallback).
    pub fn pl(breaks: Vec<(f64, f64)>) -> Result<Self> {
        if breaks.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidMap("breakpoints must be finite".into()));
        }
        let float = PlCore::new(breaks)?;
        Ok(LiftedCircleMap::PiecewiseLinear(PlMap { float, exact: None }))
    }

    /// Piecewise-linear map with exact rational breakpoints.
    pub fn pl_exact(breaks: Vec<(BigRational, BigRational)>) -> Result<Self> {
        let exact = PlCore::new(breaks)?;
        Ok(LiftedCircleMap::PiecewiseLinear(PlMap::from_exact(exact)))
    }

    /// Sampled-smooth map from a rule on `[0, 1]` with the default grid.
    pub fn smooth<F>(rule: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(LiftedCircleMap::SampledSmooth(SmoothMap::from_unit_rule(rule, DEFAULT_GRID)?))
    }

    pub fn smooth_with_grid<F>(rule: F, grid: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Ok(LiftedCircleMap::SampledSmooth(SmoothMap::from_unit_rule(rule, grid)?))
    }

    /// Lift of the projective action of `m` with the given winding.
    pub fn projective(m: Mat2, winding: i64) -> Self {
        LiftedCircleMap::Projective(ProjectiveLift::with_winding(m, winding))
    }

    pub fn kind(&self) -> MapKind {
        match self {
            LiftedCircleMap::Rotation(_) => MapKind::Rotation,
            LiftedCircleMap::PiecewiseLinear(_) => MapKind::PiecewiseLinear,
            LiftedCircleMap::SampledSmooth(_) => MapKind::SampledSmooth,
            LiftedCircleMap::Projective(_) => MapKind::Projective,
        }
    }

    /// True when evaluation carries an exact arithmetic twin.
    pub fn is_exact(&self) -> bool {
        match self {
            LiftedCircleMap::Rotation(r) => r.exact.is_some(),
            LiftedCircleMap::PiecewiseLinear(p) => p.exact.is_some(),
            _ => false,
        }
    }

    /// True when [`eval_bounds`](Self::eval_bounds) is a rigorous enclosure.
    pub fn is_rigorous(&self) -> bool {
        matches!(self, LiftedCircleMap::Rotation(_) | LiftedCircleMap::PiecewiseLinear(_))
    }

    pub fn as_pl(&self) -> Option<&PlMap> {
        match self {
            LiftedCircleMap::PiecewiseLinear(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_projective(&self) -> Option<&ProjectiveLift> {
        match self {
            LiftedCircleMap::Projective(p) => Some(p),
            _ => None,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LiftedCircleMap::Rotation(r) => x + r.theta,
            LiftedCircleMap::PiecewiseLinear(p) => p.float.eval(&x),
            LiftedCircleMap::SampledSmooth(s) => s.eval(x),
            LiftedCircleMap::Projective(p) => p.eval(x),
        }
    }

    /// Outward-rounded image of the interval `[lo, hi]`.
    ///
    /// Monotonicity reduces this to the two endpoints. Each endpoint value
    /// is widened by a bound on the floating error of its evaluation.
    pub fn eval_bounds(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (a, b) = (self.eval(lo), self.eval(hi));
        let pad = |v: f64, x: f64| {
            let scale = match self {
                LiftedCircleMap::Rotation(_) => 4.0 * f64::EPSILON * (1.0 + v.abs() + x.abs()),
                LiftedCircleMap::PiecewiseLinear(p) => {
                    let slope = p.float.slope_at(&x);
                    8.0 * f64::EPSILON * (2.0 + v.abs() + x.abs()) * (1.0 + slope)
                }
                LiftedCircleMap::SampledSmooth(_) => 1e-12 * (1.0 + v.abs()),
                LiftedCircleMap::Projective(p) => {
                    let norm = p.matrix().iter().fold(0.0f64, |m, e| m.max(e.abs()));
                    64.0 * f64::EPSILON * (1.0 + norm * norm) * (1.0 + v.abs())
                }
            };
            scale.max(f64::MIN_POSITIVE)
        };
        (a - pad(a, lo), b + pad(b, hi))
    }

    /// `Z^k ∘ self`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        LiftedCircleMap::translation(k).compose(self)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LiftedCircleMap) -> LiftedCircleMap {
        use LiftedCircleMap::*;
        if self.is_exact_identity() {
            return inner.clone();
        }
        if inner.is_exact_identity() {
            return self.clone();
        }
        match (self, inner) {
            (Rotation(a), Rotation(b)) => Rotation(RotationMap {
                theta: a.theta + b.theta,
                exact: match (&a.exact, &b.exact) {
                    (Some(x), Some(y)) => Some(x + y),
                    _ => None,
                },
            }),
            (Projective(a), Projective(b)) => Projective(a.compose(b)),
            (Projective(a), Rotation(r)) => Projective(a.compose(&rotation_as_projective(r.theta))),
            (Rotation(r), Projective(b)) => Projective(rotation_as_projective(r.theta).compose(b)),
            (PiecewiseLinear(_) | Rotation(_), PiecewiseLinear(_) | Rotation(_)) => {
                compose_pl(&self.to_pl(), &inner.to_pl())
            }
            _ => {
                let (f, g) = (self.clone(), inner.clone());
                let rule: Rule = Arc::new(move |x| f.eval(g.eval(x)));
                SampledSmooth(SmoothMap::from_rule(rule, self.grid_hint().max(inner.grid_hint())).expect(
                    "composition of valid lifted maps is a valid lifted map",
                ))
            }
        }
    }

    pub fn inverse(&self) -> LiftedCircleMap {
        match self {
            LiftedCircleMap::Rotation(r) => LiftedCircleMap::Rotation(RotationMap {
                theta: -r.theta,
                exact: r.exact.as_ref().map(|e| -e.clone()),
            }),
            LiftedCircleMap::PiecewiseLinear(p) => match &p.exact {
                Some(e) => LiftedCircleMap::PiecewiseLinear(PlMap::from_exact(e.inverse())),
                None => LiftedCircleMap::PiecewiseLinear(PlMap { float: p.float.inverse(), exact: None }),
            },
            LiftedCircleMap::SampledSmooth(s) => LiftedCircleMap::SampledSmooth(
                s.inverse().expect("inverse of a valid lifted map is a valid lifted map"),
            ),
            LiftedCircleMap::Projective(p) => LiftedCircleMap::Projective(p.inverse()),
        }
    }

    /// `self^n` for any integer `n`, by repeated squaring.
    pub fn power(&self, n: i64) -> LiftedCircleMap {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = LiftedCircleMap::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }

    /// The `n ×` rescaling `x ↦ f(n x) / n`, which commutes with `Z^(1/n)`.
    pub fn rescale(&self, n: u32) -> LiftedCircleMap {
        assert!(n >= 1, "rescaling factor must be positive");
        let nf = n as f64;
        match self {
            LiftedCircleMap::Rotation(r) => LiftedCircleMap::Rotation(RotationMap {
                theta: r.theta / nf,
                exact: r.exact.as_ref().map(|e| e / BigRational::from_integer(n.into())),
            }),
            LiftedCircleMap::PiecewiseLinear(p) => match &p.exact {
                Some(e) => LiftedCircleMap::PiecewiseLinear(PlMap::from_exact(e.rescale(n))),
                None => LiftedCircleMap::PiecewiseLinear(PlMap { float: p.float.rescale(n), exact: None }),
            },
            _ => {
                let f = self.clone();
                let rule: Rule = Arc::new(move |x| f.eval(nf * x) / nf);
                LiftedCircleMap::SampledSmooth(
                    SmoothMap::from_rule(rule, self.grid_hint() * n as usize)
                        .expect("rescaling preserves validity"),
                )
            }
        }
    }

    /// Fixed points and fixed intervals in `[0, 1)`.
    pub fn fixed_points(&self) -> Vec<FixedPoint> {
        match self {
            LiftedCircleMap::Rotation(r) => {
                let zero = match &r.exact {
                    Some(e) => e.is_zero(),
                    None => r.theta == 0.0,
                };
                if zero {
                    vec![FixedPoint::Interval { lo: 0.0, hi: 1.0 }]
                } else {
                    Vec::new()
                }
            }
            LiftedCircleMap::PiecewiseLinear(p) => {
                let sets = p.exact_or_lifted().fixed_sets();
                sets.into_iter()
                    .map(|s| match s {
                        FixedSet::Point(x) => FixedPoint::Point { x: scalar::Scalar::to_f64(&x) },
                        FixedSet::Interval(a, b) => FixedPoint::Interval {
                            lo: scalar::Scalar::to_f64(&a),
                            hi: scalar::Scalar::to_f64(&b),
                        },
                    })
                    .collect()
            }
            LiftedCircleMap::SampledSmooth(s) => match s.fixed_points() {
                SmoothFixed::Everything => vec![FixedPoint::Interval { lo: 0.0, hi: 1.0 }],
                SmoothFixed::Points(p) => p.into_iter().map(|x| FixedPoint::Point { x }).collect(),
            },
            LiftedCircleMap::Projective(p) => {
                if p.is_identity(1e-14) {
                    vec![FixedPoint::Interval { lo: 0.0, hi: 1.0 }]
                } else {
                    p.fixed_points().into_iter().map(|x| FixedPoint::Point { x }).collect()
                }
            }
        }
    }

    /// Sign of the displacement `f(x) - x` when it is certainly one-signed:
    /// `Some(1)` or `Some(-1)`, `Some(0)` when it certainly vanishes
    /// somewhere, `None` when the grid cannot decide.
    pub fn displacement_sign(&self) -> Option<i8> {
        match self {
            LiftedCircleMap::Rotation(r) => Some(match &r.exact {
                Some(e) => sign_of(e),
                None => sign_f64(r.theta),
            }),
            LiftedCircleMap::PiecewiseLinear(p) => {
                // comparisons of float breakpoints are exact
                let breaks = p.float.breaks();
                let above = breaks.iter().all(|(x, y)| y > x);
                let below = breaks.iter().all(|(x, y)| y < x);
                Some(if above {
                    1
                } else if below {
                    -1
                } else {
                    0
                })
            }
            LiftedCircleMap::SampledSmooth(s) => match s.fixed_points() {
                SmoothFixed::Everything => Some(0),
                SmoothFixed::Points(p) if !p.is_empty() => Some(0),
                SmoothFixed::Points(_) => {
                    let (lo, hi) = s.grid_displacement();
                    if lo > 1e-9 {
                        Some(1)
                    } else if hi < -1e-9 {
                        Some(-1)
                    } else {
                        None
                    }
                }
            },
            LiftedCircleMap::Projective(p) => {
                if p.is_elliptic() {
                    let (r, _) = p.rotation_number();
                    Some(sign_f64(r))
                } else {
                    Some(sign_f64(p.shift() as f64))
                }
            }
        }
    }

    /// Comparison points: all breakpoints plus a uniform grid of `grid` points.
    pub fn comparison_grid(&self, grid: usize) -> Vec<f64> {
        let mut xs: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
        if let LiftedCircleMap::PiecewiseLinear(p) = self {
            xs.extend(p.float.breaks().iter().map(|(x, _)| *x));
        }
        xs
    }

    fn grid_hint(&self) -> usize {
        match self {
            LiftedCircleMap::SampledSmooth(s) => s.grid(),
            _ => DEFAULT_GRID,
        }
    }

    fn is_exact_identity(&self) -> bool {
        matches!(self, LiftedCircleMap::Rotation(RotationMap { exact: Some(e), .. }) if e.is_zero())
    }

    fn to_pl(&self) -> PlMap {
        match self {
            LiftedCircleMap::PiecewiseLinear(p) => p.clone(),
            LiftedCircleMap::Rotation(r) => match &r.exact {
                Some(e) => PlMap::from_exact(PlCore::from_unchecked(vec![(BigRational::zero(), e.clone())])),
                None => PlMap { float: PlCore::from_unchecked(vec![(0.0, r.theta)]), exact: None },
            },
            _ => unreachable!("only rotations and PL maps convert to PL"),
        }
    }
}

fn compose_pl(outer: &PlMap, inner: &PlMap) -> LiftedCircleMap {
    let out = match (&outer.exact, &inner.exact) {
        (Some(a), Some(b)) => PlMap::from_exact(a.compose(b)),
        _ => PlMap { float: outer.float.compose(&inner.float), exact: None },
    };
    LiftedCircleMap::PiecewiseLinear(out)
}

fn rotation_as_projective(theta: f64) -> ProjectiveLift {
    let (s, c) = (std::f64::consts::PI * theta).sin_cos();
    let m = [c, s, -s, c];
    let base = ProjectiveLift::new(m, 0);
    let shift = (theta - base.eval(0.0)).round() as i64;
    ProjectiveLift::new(m, shift)
}

fn sign_of(r: &BigRational) -> i8 {
    if r.is_zero() {
        0
    } else if *r > BigRational::zero() {
        1
    } else {
        -1
    }
}

fn sign_f64(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// Whether `f` and `g` agree to within `tol` on breakpoints plus a uniform grid.
///
/// Two maps with exact twins are compared exactly, so `tol = 0` is meaningful.
pub fn canonical_equal(f: &LiftedCircleMap, g: &LiftedCircleMap, tol: f64) -> bool {
    if let (Some(a), Some(b)) = (exact_pl(f), exact_pl(g)) {
        if tol == 0.0 {
            // two PL maps agree iff they agree at every breakpoint of either
            return a.breaks().iter().chain(b.breaks()).all(|(x, _)| a.eval(x) == b.eval(x));
        }
    }
    let mut xs = f.comparison_grid(1024);
    xs.extend(g.comparison_grid(0));
    xs.iter().all(|&x| (f.eval(x) - g.eval(x)).abs() <= tol)
}

/// Exact PL form of a rotation or exact PL map.
fn exact_pl(f: &LiftedCircleMap) -> Option<PlCore<BigRational>> {
    match f {
        LiftedCircleMap::Rotation(r) => r
            .exact
            .as_ref()
            .map(|e| PlCore::from_unchecked(vec![(BigRational::zero(), e.clone())])),
        LiftedCircleMap::PiecewiseLinear(p) => p.exact.as_deref().cloned(),
        _ => None,
    }
}

/// `x` rounded into `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sample_pl() -> LiftedCircleMap {
        LiftedCircleMap::pl_exact(vec![(q(0, 1), q(1, 10)), (q(1, 3), q(1, 2)), (q(3, 4), q(4, 5))]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let r = LiftedCircleMap::rotation_rational(1, 3);
        assert!((r.eval(0.5) - 0.833_333_333_333_333_4).abs() < 1e-15);
        assert_eq!(LiftedCircleMap::translation(1).eval(0.25), 1.25);
        let p = LiftedCircleMap::pl(vec![(0.0, 0.0), (0.5, 0.25)]).unwrap();
        assert_eq!(p.eval(0.25), 0.125);
    }

    #[test]
    fn compose_with_inverse_is_identity() {
        let f = sample_pl();
        let id = f.compose(&f.inverse());
        assert!(canonical_equal(&id, &LiftedCircleMap::identity(), 0.0));
        let g = LiftedCircleMap::pl(vec![(0.1, 0.3), (0.4, 0.45), (0.9, 1.2)]).unwrap();
        assert!(canonical_equal(&g.compose(&g.inverse()), &LiftedCircleMap::identity(), 1e-12));
    }

    #[test]
    fn z_equals_rotation_by_one() {
        let z = LiftedCircleMap::translation(1);
        let r = LiftedCircleMap::rotation_exact(q(1, 1));
        assert!(canonical_equal(&z, &r, 0.0));
    }

    #[test]
    fn mixed_kind_composition_matches_nested_evaluation() {
        let p = sample_pl();
        let r = LiftedCircleMap::rotation(0.37);
        let s = LiftedCircleMap::smooth(|x| x + 0.05 * (std::f64::consts::TAU * x).sin()).unwrap();
        let m = LiftedCircleMap::projective([2.0, 1.0, 1.0, 1.0], 0);
        let maps = [p, r, s, m];
        for f in &maps {
            for g in &maps {
                let fg = f.compose(g);
                for k in 0..40 {
                    let x = -1.0 + 0.077 * k as f64;
                    assert!((fg.eval(x) - f.eval(g.eval(x))).abs() < 1e-11, "{:?}∘{:?}", f.kind(), g.kind());
                }
            }
        }
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(
            LiftedCircleMap::identity().fixed_points(),
            vec![FixedPoint::Interval { lo: 0.0, hi: 1.0 }]
        );
        assert!(LiftedCircleMap::rotation_rational(1, 2).fixed_points().is_empty());
        let s = LiftedCircleMap::smooth(|x| x + 0.1 * (std::f64::consts::TAU * x).sin()).unwrap();
        let fp = s.fixed_points();
        assert_eq!(fp.len(), 2);
    }

    #[test]
    fn detects_a_perturbed_breakpoint() {
        let f = LiftedCircleMap::pl(vec![(0.0, 0.1), (0.5, 0.6), (0.7, 0.75)]).unwrap();
        let g = LiftedCircleMap::pl(vec![(0.0, 0.1), (0.5, 0.601), (0.7, 0.75)]).unwrap();
        assert!(canonical_equal(&f, &f, 0.0));
        assert!(!canonical_equal(&f, &g, 1e-6));
    }

    #[test]
    fn power_matches_iteration() {
        let f = sample_pl();
        let f5 = f.power(5);
        let fm3 = f.power(-3);
        for k in 0..20 {
            let x = 0.05 * k as f64;
            let mut y = x;
            for _ in 0..5 {
                y = f.eval(y);
            }
            assert!((f5.eval(x) - y).abs() < 1e-12);
            assert!((f.power(3).eval(fm3.eval(x)) - x).abs() < 1e-12);
        }
    }

    #[test]
    fn rescaling_commutes_with_fractional_translation() {
        let f = sample_pl().rescale(3);
        for k in 0..20 {
            let x = 0.05 * k as f64;
            assert!((f.eval(x + 1.0 / 3.0) - f.eval(x) - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}

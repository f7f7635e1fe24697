//! Slithering models, the leaf height function `z`, and desk-scale checks
//! of the bundle-automorphism property and of leaf separation.
//!
//! Fiber coordinates are rescaled to period 1: the torus model's fibration
//! is `(x, y) ↦ y / 2π`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::circle_homeo::{frac, LiftedCircleMap};
use crate::error::{Error, Result};
use crate::hyperbolic::{geodesic_endpoints, lift_action, FuchsianGroup, Moebius, MoebiusLift};
use crate::report::Status;

pub type PointMap = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type Fibration = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
/// Points on the fiber with the given (period-1) value.
pub type FiberSampler = Arc<dyn Fn(f64, usize) -> Vec<Vec<f64>> + Send + Sync>;

#[derive(Clone)]
pub struct DeckGenerator {
    pub name: String,
    pub apply: PointMap,
    /// The map this generator induces on fiber values.
    pub induced: LiftedCircleMap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PathMetric {
    /// Euclidean metric on the plane covering the torus.
    Euclidean,
}

#[derive(Clone)]
pub struct SlitheringModel {
    pub name: String,
    /// Fiber period in the model's own coordinates; fibration values are
    /// already divided by it.
    pub fiber_period: f64,
    pub dim: usize,
    pub fibration: Fibration,
    pub deck: Vec<DeckGenerator>,
    pub fiber_points: FiberSampler,
    pub metric: Option<PathMetric>,
}

impl std::fmt::Debug for SlitheringModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SlitheringModel")
            .field("name", &self.name)
            .field("fiber_period", &self.fiber_period)
            .field("dim", &self.dim)
            .field("deck", &self.deck.iter().map(|d| d.name.as_str()).collect::<Vec<_>>())
            .field("metric", &self.metric)
            .finish()
    }
}

/// `y ↦ y + 0.5 sin y`, the fiber dynamics of the torus example.
pub fn torus_fiber_map(y: f64) -> f64 {
    y + 0.5 * y.sin()
}

/// Inverse of [`torus_fiber_map`] by Newton's method (the derivative is at
/// least 1/2).
pub fn torus_fiber_map_inverse(v: f64) -> f64 {
    let mut y = v;
    for _ in 0..60 {
        let step = (torus_fiber_map(y) - v) / (1.0 + 0.5 * y.cos());
        y -= step;
        if step.abs() <= 1e-16 * (1.0 + v.abs()) {
            break;
        }
    }
    y
}

/// The plane with horizontal leaves and deck group generated by
/// `φ(x, y) = (x + 1, y + 0.5 sin y)` and `ψ(x, y) = (x, y + 2π)`.
pub fn torus_slithering() -> SlitheringModel {
    let phi: PointMap = Arc::new(|p: &[f64]| vec![p[0] + 1.0, torus_fiber_map(p[1])]);
    let psi: PointMap = Arc::new(|p: &[f64]| vec![p[0], p[1] + TAU]);
    let induced_phi = LiftedCircleMap::smooth(|t| torus_fiber_map(TAU * t) / TAU).expect("valid lift");
    SlitheringModel {
        name: "torus".into(),
        fiber_period: TAU,
        dim: 2,
        fibration: Arc::new(|p: &[f64]| p[1] / TAU),
        deck: vec![
            DeckGenerator { name: "phi".into(), apply: phi, induced: induced_phi },
            DeckGenerator { name: "psi".into(), apply: psi, induced: LiftedCircleMap::translation(1) },
        ],
        fiber_points: Arc::new(|c: f64, n: usize| {
            (0..n.max(2)).map(|i| vec![-3.0 + 6.0 * i as f64 / (n.max(2) - 1) as f64, TAU * c]).collect()
        }),
        metric: Some(PathMetric::Euclidean),
    }
}

/// Fiber value of a unit tangent vector `(x, y, φ̃)` of the disk with lifted
/// direction angle: the lift of its forward endpoint nearest `φ̃ / 2π`.
pub fn tangent_fibration(p: &[f64]) -> f64 {
    let base = p[2] / TAU;
    let end = geodesic_endpoints((p[0], p[1]), p[2]).map(|b| b.angle()).unwrap_or(f64::NAN);
    base + wrap_half(end - base)
}

fn wrap_half(d: f64) -> f64 {
    d - d.round()
}

/// Derivative action of `g` on lifted unit tangent vectors, with the
/// direction lift offset by `2π m`.
fn tangent_action(g: Moebius, m: f64) -> PointMap {
    Arc::new(move |p: &[f64]| {
        let z = Complex64::new(p[0], p[1]);
        let w = g.apply_disk(z);
        vec![w.re, w.im, p[2] + g.derivative_arg(z) + TAU * m]
    })
}

/// Unit tangent bundle of the disk, fibered by forward endpoints, with the
/// group acting by derivatives.
///
/// Each deck map's direction lift is chosen so that its induced fiber map is
/// the winding-zero lift of the boundary action.
pub fn tangent_bundle_slithering(group: &FuchsianGroup) -> SlitheringModel {
    let deck = group
        .names
        .iter()
        .zip(&group.generators)
        .map(|(name, g)| {
            let induced = lift_action(&MoebiusLift { base: *g, winding: 0 });
            let trial = tangent_fibration(&tangent_action(*g, 0.0)(&[0.0, 0.0, 0.0]));
            let m = (induced.eval(0.0) - trial).round();
            DeckGenerator { name: name.clone(), apply: tangent_action(*g, m), induced }
        })
        .collect();
    SlitheringModel {
        name: "tangent-bundle".into(),
        fiber_period: 1.0,
        dim: 3,
        fibration: Arc::new(tangent_fibration),
        deck,
        fiber_points: Arc::new(tangent_fiber_points),
        metric: None,
    }
}

/// Vectors at points of a fixed spiral pointing at the boundary point `c`.
fn tangent_fiber_points(c: f64, n: usize) -> Vec<Vec<f64>> {
    let target = Complex64::from_polar(1.0, TAU * c);
    (0..n.max(1))
        .map(|i| {
            let rad = 0.8 * ((i as f64 + 0.5) / n.max(1) as f64).sqrt();
            let p = Complex64::from_polar(rad, 2.399_963 * i as f64);
            // direction at p whose ray ends at the target
            let at_origin = (target - p) / (Complex64::new(1.0, 0.0) - p.conj() * target);
            let phi = at_origin.arg();
            let phi = phi + TAU * ((TAU * c - phi) / TAU).round();
            vec![p.re, p.im, phi]
        })
        .collect()
}

/// Rough height difference between the leaves at fiber values `r` and `t`:
/// `2(t - r)` when `t - r` is an integer, `2⌊t - r⌋ + 1` otherwise.
pub fn z_value(r: f64, t: f64) -> i64 {
    let d = t - r;
    let fl = d.floor();
    if d == fl {
        2 * fl as i64
    } else {
        2 * fl as i64 + 1
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleWitness {
    pub generator: String,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub fiber: f64,
    pub image_a: f64,
    pub image_b: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleReport {
    pub model: String,
    pub fibers: usize,
    pub points_checked: usize,
    /// Largest spread of image fiber values over one source fiber.
    pub max_spread: f64,
    /// Largest gap between image fiber values and the induced map.
    pub max_induced_error: f64,
    pub status: Status,
    pub witness: Option<BundleWitness>,
}

pub const BUNDLE_TOL: f64 = 1e-9;

/// Checks that every deck generator maps each sampled fiber into a single
/// fiber, namely the one given by its induced map.
pub fn verify_bundle_automorphism(model: &SlitheringModel, samples: usize) -> BundleReport {
    let samples = samples.max(2);
    let mut report = BundleReport {
        model: model.name.clone(),
        fibers: 0,
        points_checked: 0,
        max_spread: 0.0,
        max_induced_error: 0.0,
        status: Status::Pass,
        witness: None,
    };
    for k in 0..samples {
        let c = -1.5 + 3.0 * (k as f64 + 0.37) / samples as f64;
        let pts = (model.fiber_points)(c, samples);
        report.fibers += 1;
        for gen in &model.deck {
            let values: Vec<f64> = pts.iter().map(|p| (model.fibration)(&(gen.apply)(p))).collect();
            report.points_checked += values.len();
            let (imin, imax) = extreme_indices(&values);
            let spread = values[imax] - values[imin];
            let expected = gen.induced.eval(c);
            let err = values.iter().fold(0.0f64, |m, v| m.max((v - expected).abs()));
            report.max_spread = report.max_spread.max(spread);
            report.max_induced_error = report.max_induced_error.max(err);
            if (spread > BUNDLE_TOL || err > BUNDLE_TOL) && report.witness.is_none() {
                report.status = Status::Violation;
                report.witness = Some(BundleWitness {
                    generator: gen.name.clone(),
                    a: pts[imin].clone(),
                    b: pts[imax].clone(),
                    fiber: c,
                    image_a: values[imin],
                    image_b: values[imax],
                });
            }
        }
    }
    report
}

fn extreme_indices(v: &[f64]) -> (usize, usize) {
    let mut lo = 0;
    let mut hi = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[lo] {
            lo = i;
        }
        if *x > v[hi] {
            hi = i;
        }
    }
    (lo, hi)
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationRow {
    pub r: f64,
    pub t: f64,
    pub z: i64,
    pub separation: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparationReport {
    pub rows: Vec<SeparationRow>,
    /// `max sep / |z|`.
    pub c1: f64,
    /// `min sep / (|z| - 1)` over pairs with `|z| > 1`.
    pub c2: Option<f64>,
    /// Least-squares slope of separation against `|z|`.
    pub slope: f64,
    /// Relative RMS residual of that linear fit.
    pub residual: f64,
    pub mesh: f64,
    pub status: Status,
}

/// Mesh cells per fiber period at refinement 1.
pub const MESH_CELLS: usize = 32;
pub const MAX_RESIDUAL: f64 = 0.2;

pub fn leaf_separation_bound(model: &SlitheringModel, pairs: &[(f64, f64)], samples: usize) -> Result<SeparationReport> {
    leaf_separation_bound_refined(model, pairs, samples, 1)
}

/// Separation of leaf pairs by shortest paths on a 16-neighbour mesh whose
/// rows are leaves, refined `refine` times.
pub fn leaf_separation_bound_refined(
    model: &SlitheringModel,
    pairs: &[(f64, f64)],
    samples: usize,
    refine: usize,
) -> Result<SeparationReport> {
    if model.metric != Some(PathMetric::Euclidean) || model.dim != 2 {
        return Err(Error::Unsupported(format!("model `{}` has no planar path metric", model.name)));
    }
    let cells = MESH_CELLS * refine.max(1);
    let delta = 1.0 / cells as f64;
    let h = model.fiber_period * delta;
    let mut rows = Vec::with_capacity(pairs.len());
    for &(r, t) in pairs {
        let z = z_value(r, t);
        let separation = if r == t { 0.0 } else { mesh_separation(model, r, t, delta, samples)? };
        rows.push(SeparationRow { r, t, z, separation });
    }
    let nonzero: Vec<&SeparationRow> = rows.iter().filter(|row| row.z != 0).collect();
    if let Some(min) = nonzero.iter().map(|row| row.separation).reduce(f64::min) {
        if h > 0.25 * min {
            return Err(Error::Resolution(format!("mesh spacing {h} is too coarse for separation {min}; refine")));
        }
    }
    let c1 = nonzero.iter().map(|row| row.separation / row.z.abs() as f64).fold(0.0, f64::max);
    let c2 = nonzero
        .iter()
        .filter(|row| row.z.abs() > 1)
        .map(|row| row.separation / (row.z.abs() - 1) as f64)
        .reduce(f64::min);
    let sz: f64 = nonzero.iter().map(|row| row.separation * row.z.abs() as f64).sum();
    let zz: f64 = nonzero.iter().map(|row| (row.z * row.z) as f64).sum();
    let slope = if zz > 0.0 { sz / zz } else { 0.0 };
    let ss: f64 = nonzero.iter().map(|row| row.separation * row.separation).sum();
    let rr: f64 = nonzero.iter().map(|row| (row.separation - slope * row.z.abs() as f64).powi(2)).sum();
    let residual = if ss > 0.0 { (rr / ss).sqrt() } else { 0.0 };
    let status = if residual <= MAX_RESIDUAL { Status::Pass } else { Status::Violation };
    Ok(SeparationReport { rows, c1, c2, slope, residual, mesh: h, status })
}

#[derive(Clone, Copy, PartialEq)]
struct Node(f64, usize);

impl Eq for Node {}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const STENCIL: [(i64, i64); 16] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
    (1, 2),
    (2, 1),
    (-1, 2),
    (-2, 1),
    (1, -2),
    (2, -1),
    (-1, -2),
    (-2, -1),
];

/// Sup over sampled mesh points of leaf `r` of the mesh distance to leaf `t`.
fn mesh_separation(model: &SlitheringModel, r: f64, t: f64, delta: f64, samples: usize) -> Result<f64> {
    let h = model.fiber_period * delta;
    let (lo, hi) = (r.min(t) - 4.0 * delta, r.max(t) + 4.0 * delta);
    let ny = ((hi - lo) / delta).round() as usize + 1;
    let half_width = 2.0 + (hi - lo) * model.fiber_period;
    let nx = (2.0 * half_width / h).ceil() as usize + 1;
    let at = |i: usize, j: usize| vec![-half_width + i as f64 * h, model.fiber_period * (lo + j as f64 * delta)];
    let row_of = |v: f64| -> Result<usize> {
        (0..ny)
            .find(|&j| ((model.fibration)(&at(0, j)) - v).abs() <= 1e-9)
            .ok_or_else(|| Error::Resolution(format!("fiber value {v} is not on the mesh; use multiples of {delta}")))
    };
    let (row_r, row_t) = (row_of(r)?, row_of(t)?);
    let idx = |i: usize, j: usize| j * nx + i;
    let mut dist = vec![f64::INFINITY; nx * ny];
    let mut heap = BinaryHeap::new();
    for i in 0..nx {
        dist[idx(i, row_t)] = 0.0;
        heap.push(Node(0.0, idx(i, row_t)));
    }
    while let Some(Node(d, k)) = heap.pop() {
        if d > dist[k] {
            continue;
        }
        let (i, j) = ((k % nx) as i64, (k / nx) as i64);
        let p = at(i as usize, j as usize);
        for (di, dj) in STENCIL {
            let (a, b) = (i + di, j + dj);
            if a < 0 || b < 0 || a >= nx as i64 || b >= ny as i64 {
                continue;
            }
            let q = at(a as usize, b as usize);
            let nd = d + ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt();
            let m = idx(a as usize, b as usize);
            if nd < dist[m] {
                dist[m] = nd;
                heap.push(Node(nd, m));
            }
        }
    }
    // sample leaf r over the middle third of the mesh, away from its edges
    let first = nx / 3;
    let span = nx / 3;
    let n = samples.clamp(1, span.max(1));
    let sup = (0..n)
        .map(|s| dist[idx(first + s * span / n, row_r)])
        .fold(0.0, f64::max);
    Ok(sup)
}

/// Largest over sampled leaf pairs of the least positive `z` to a leaf of
/// the same orbit, for the torus model.
///
/// Orbits of fiber values under the induced deck maps are explored to word
/// length `depth`.
pub fn torus_z_diameter(grid: usize, depth: usize) -> i64 {
    let f = |t: f64| torus_fiber_map(TAU * t) / TAU;
    let finv = |t: f64| torus_fiber_map_inverse(TAU * t) / TAU;
    let mut values: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
    values.push(0.5);
    let mut worst = 0;
    for &r in &values {
        for &t in &values {
            let mut orbit = vec![t];
            let (mut up, mut down) = (t, t);
            for _ in 0..depth {
                up = f(up);
                down = finv(down);
                orbit.push(up);
                orbit.push(down);
            }
            let best = orbit
                .iter()
                .map(|&s| {
                    // the deck translation moves s to (r, r + 1]
                    let shifted = s - (s - r).ceil() + 1.0;
                    let shifted = if shifted - r > 1.0 { shifted - 1.0 } else { shifted };
                    z_value(r, shifted)
                })
                .filter(|&z| z > 0)
                .min()
                .unwrap_or(i64::MAX);
            worst = worst.max(best);
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniformityModel {
    TorusSlither,
    LinearAnosovStable,
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub model: UniformityModel,
    pub arc_len: f64,
    /// Image length after each leaf-path step, starting with the arc itself.
    pub lengths: Vec<f64>,
    pub max_length: f64,
    pub bounded: bool,
    /// Last successive ratio of image lengths (Anosov model only).
    pub growth_rate: Option<f64>,
}

/// Anosov gluing matrix `[[2, 1], [1, 1]]`.
pub const ANOSOV: [[f64; 2]; 2] = [[2.0, 1.0], [1.0, 1.0]];

/// Holonomy images of a transverse arc along leaf paths.
///
/// The torus model pushes the vertical arc `[0, arc_len]` around the torus
/// once per unit of path length, in both directions. The Anosov model
/// stretches an arc along `(1, 0)` by the gluing matrix once per unit.
pub fn uniformity_probe(model: UniformityModel, arc_len: f64, path_budget: f64) -> Result<UniformityReport> {
    if !(arc_len >= 0.0) || !(path_budget >= 0.0) {
        return Err(Error::Config("arc length and path budget must be non-negative".into()));
    }
    let steps = path_budget.floor() as usize;
    let mut lengths = vec![arc_len];
    let mut growth_rate = None;
    match model {
        UniformityModel::TorusSlither => {
            let (mut fwd, mut back) = ((0.0, arc_len), (0.0, arc_len));
            for _ in 0..steps {
                fwd = (torus_fiber_map(fwd.0), torus_fiber_map(fwd.1));
                back = (torus_fiber_map_inverse(back.0), torus_fiber_map_inverse(back.1));
                lengths.push((fwd.1 - fwd.0).max(back.1 - back.0));
            }
        }
        UniformityModel::LinearAnosovStable => {
            let mut v = [arc_len, 0.0];
            for _ in 0..steps {
                v = [ANOSOV[0][0] * v[0] + ANOSOV[0][1] * v[1], ANOSOV[1][0] * v[0] + ANOSOV[1][1] * v[1]];
                lengths.push(v[0].hypot(v[1]));
            }
            let n = lengths.len();
            if n >= 2 && lengths[n - 2] > 0.0 {
                growth_rate = Some(lengths[n - 1] / lengths[n - 2]);
            }
        }
    }
    let max_length = lengths.iter().copied().fold(0.0, f64::max);
    let bounded = match model {
        UniformityModel::TorusSlither => max_length < TAU,
        UniformityModel::LinearAnosovStable => growth_rate.is_none_or(|g| g <= 1.0),
    };
    Ok(UniformityReport { model, arc_len, lengths, max_length, bounded, growth_rate })
}

/// Fixed leaves of the torus model: zeros of `sin` in one period.
pub fn torus_closed_leaves() -> Vec<f64> {
    vec![0.0, PI]
}

/// Canonical fiber value of a covering point, reduced to `[0, 1)`.
pub fn fiber_class(model: &SlitheringModel, p: &[f64]) -> f64 {
    frac((model.fibration)(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_homeo::FixedPoint;
    use crate::hyperbolic::genus2_fuchsian;
    use crate::rotation::{classify, rotation_number, Classification};

    #[test]
    fn z_examples() {
        assert_eq!(z_value(0.0, 1.0), 2);
        assert_eq!(z_value(0.0, 0.5), 1);
        assert_eq!(z_value(0.0, -0.5), -1);
        assert_eq!(z_value(0.5, 0.0), -1);
        assert_eq!(z_value(0.3, 0.3), 0);
    }

    #[test]
    fn torus_generators() {
        let m = torus_slithering();
        let (phi, psi) = (&m.deck[0], &m.deck[1]);
        // equal up to rounding of sin at shifted arguments
        for p in [[0.3, 1.1], [-2.0, 5.5], [7.0, -3.3]] {
            let (a, b) = ((phi.apply)(&(psi.apply)(&p)), (psi.apply)(&(phi.apply)(&p)));
            assert_eq!(a[0], b[0]);
            assert!((a[1] - b[1]).abs() < 1e-14);
        }
        assert_eq!(classify(&phi.induced), Classification::SpaceLike);
        assert_eq!(rotation_number(&phi.induced, 1000).rational, Some((0, 1)));
        let fixed: Vec<f64> = phi
            .induced
            .fixed_points()
            .iter()
            .map(|f| match f {
                FixedPoint::Point { x } => *x,
                other => panic!("{other:?}"),
            })
            .collect();
        assert_eq!(fixed.len(), 2);
        assert!(fixed[0].abs() < 1e-12 && (fixed[1] - 0.5).abs() < 1e-12, "{fixed:?}");
        assert_eq!(torus_closed_leaves()[1] / TAU, 0.5);
        assert!((torus_fiber_map_inverse(torus_fiber_map(2.3)) - 2.3).abs() < 1e-15);
    }

    #[test]
    fn torus_is_a_bundle_automorphism() {
        let m = torus_slithering();
        let r = verify_bundle_automorphism(&m, 16);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        let psi = &m.deck[1];
        assert_eq!((m.fibration)(&(psi.apply)(&[0.4, TAU * 0.3])), 1.3);
    }

    #[test]
    fn corrupted_generator_is_caught() {
        let mut m = torus_slithering();
        m.deck[0].apply = Arc::new(|p: &[f64]| vec![p[0] + 1.0, p[1] + 0.5 * p[1].sin() + 0.1 * p[0].sin()]);
        let r = verify_bundle_automorphism(&m, 8);
        assert_eq!(r.status, Status::Violation);
        let w = r.witness.unwrap();
        assert_eq!(w.generator, "phi");
        assert!(w.image_b - w.image_a > 1e-3);
    }

    #[test]
    fn tangent_bundle_model() {
        let m = tangent_bundle_slithering(&genus2_fuchsian());
        let r = verify_bundle_automorphism(&m, 12);
        assert_eq!(r.status, Status::Pass, "{r:?}");
        for gen in &m.deck {
            assert_eq!(classify(&gen.induced), Classification::SpaceLike);
            assert_eq!(gen.induced.fixed_points().len(), 2);
        }
    }

    #[test]
    fn separation_examples() {
        let m = torus_slithering();
        let pairs = [(0.0, 0.0), (0.0, 0.25), (0.0, 1.0), (0.0, 1.25), (0.0, 2.0), (0.0, 2.25), (0.0, 3.0)];
        let r = leaf_separation_bound(&m, &pairs, 16).unwrap();
        assert_eq!(r.rows[0].separation, 0.0);
        assert_eq!(r.rows[0].z, 0);
        assert!(r.rows[4].separation > r.rows[1].separation);
        assert!(r.residual <= MAX_RESIDUAL, "{}", r.residual);
        assert_eq!(r.status, Status::Pass);
        for row in &r.rows[1..] {
            assert!(row.separation <= r.c1 * row.z.abs() as f64 + 1e-12);
            assert!(r.c2.unwrap() * (row.z.abs() - 1) as f64 <= row.separation + 1e-12);
        }
        assert!(leaf_separation_bound(&m, &[(0.0, 0.1)], 4).is_err());
        let tb = tangent_bundle_slithering(&genus2_fuchsian());
        assert!(matches!(leaf_separation_bound(&tb, &pairs, 4), Err(Error::Unsupported(_))));
    }

    #[test]
    fn z_diameter_of_torus() {
        assert_eq!(torus_z_diameter(16, 8), 2);
    }

    #[test]
    fn uniformity() {
        let t = uniformity_probe(UniformityModel::TorusSlither, 0.1, 50.0).unwrap();
        assert!(t.bounded && t.max_length < TAU);
        let a = uniformity_probe(UniformityModel::LinearAnosovStable, 0.1, 20.0).unwrap();
        let lambda = (3.0 + 5f64.sqrt()) / 2.0;
        assert!((a.growth_rate.unwrap() - lambda).abs() / lambda < 0.01);
        assert!(!a.bounded);
        for kind in [UniformityModel::TorusSlither, UniformityModel::LinearAnosovStable] {
            let z = uniformity_probe(kind, 0.0, 30.0).unwrap();
            assert!(z.lengths.iter().all(|l| *l == 0.0));
        }
    }
}

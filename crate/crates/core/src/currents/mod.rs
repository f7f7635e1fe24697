//! Geodesic currents: mass, crossings, the linking series, growth factor and
//! the weighted-average eigenmeasure.
//!
//! Two carriers are supported. Surface currents are weighted closed-geodesic
//! classes on a Fuchsian group. Torus currents are weighted slope classes on
//! the suspension of a linear map, where the crossing count of two slope
//! vectors `u`, `v` is `|det[u v]|`.

mod quad;
mod surface;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::circle_homeo::scalar::rational_from_f64;
use crate::circle_homeo::word::Word;
use crate::error::{Error, Result};
use crate::hyperbolic::{translation_length, FuchsianGroup, GeodesicH2};

pub use quad::Quad;
pub use surface::{
    injectivity_radius_estimate, intersection_number, ClassPairCount, IntersectionReport, DEFAULT_DEPTH,
};

/// Torus slope vector.
pub type Slope = [Quad; 2];

#[derive(Clone, Debug)]
pub enum GeodesicCurrent {
    Surface { group: Arc<FuchsianGroup>, classes: Vec<(Word, f64)> },
    Torus(Slope),
}

impl GeodesicCurrent {
    /// Weighted closed-geodesic classes. Words must be cyclically reduced
    /// and weights positive.
    pub fn surface(group: Arc<FuchsianGroup>, classes: Vec<(Word, f64)>) -> Result<Self> {
        for (w, weight) in &classes {
            if !(*weight > 0.0 && weight.is_finite()) {
                return Err(Error::InvalidMap(format!("weight {weight} on `{w}` must be positive")));
            }
            if !w.is_cyclically_reduced() {
                return Err(Error::InvalidMap(format!("`{w}` is not cyclically reduced")));
            }
            group.evaluate(w)?;
        }
        Ok(GeodesicCurrent::Surface { group, classes })
    }

    /// A single class of weight one.
    pub fn class(group: Arc<FuchsianGroup>, word: &str) -> Result<Self> {
        Self::surface(group, vec![(Word::parse(word)?, 1.0)])
    }

    pub fn torus(v: Slope) -> Self {
        GeodesicCurrent::Torus(v)
    }

    pub fn torus_int(x: i64, y: i64) -> Self {
        GeodesicCurrent::Torus([Quad::int(x), Quad::int(y)])
    }

    /// Exact dyadic copy of a floating slope vector.
    pub fn torus_f64(v: [f64; 2]) -> Self {
        GeodesicCurrent::Torus([Quad::rational(rational_from_f64(v[0])), Quad::rational(rational_from_f64(v[1]))])
    }

    /// Multiplies every weight by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Precondition(format!("scale {c} must be positive")));
        }
        Ok(match self {
            GeodesicCurrent::Surface { group, classes } => GeodesicCurrent::Surface {
                group: group.clone(),
                classes: classes.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
            },
            GeodesicCurrent::Torus(v) => {
                let k = Quad::rational(rational_from_f64(c));
                GeodesicCurrent::Torus([&v[0] * &k, &v[1] * &k])
            }
        })
    }

    pub fn slope(&self) -> Result<&Slope> {
        match self {
            GeodesicCurrent::Torus(v) => Ok(v),
            _ => Err(Error::Precondition("torus carrier required".into())),
        }
    }

    pub fn slope_f64(&self) -> Result<[f64; 2]> {
        let v = self.slope()?;
        Ok([v[0].to_f64(), v[1].to_f64()])
    }
}

/// Sum by recursive halving.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// `true` iff the endpoint pairs link on the circle. Shared endpoints do not
/// cross.
pub fn cross(g1: &GeodesicH2, g2: &GeodesicH2) -> bool {
    let (u, s) = (g1.u.angle(), g1.s.angle());
    let inside = |x: f64| {
        let len = (s - u).rem_euclid(1.0);
        let off = (x - u).rem_euclid(1.0);
        off > 0.0 && off < len
    };
    let (a, b) = (g2.u.angle(), g2.s.angle());
    if [a, b].iter().any(|x| *x == u || *x == s) {
        return false;
    }
    inside(a) != inside(b)
}

/// `Σ weight × length`: hyperbolic length from the trace on surfaces,
/// Euclidean length of the slope vector on the torus.
pub fn mass(mu: &GeodesicCurrent) -> Result<f64> {
    match mu {
        GeodesicCurrent::Surface { group, classes } => {
            let terms = classes
                .iter()
                .map(|(w, x)| Ok(x * translation_length(&group.evaluate(w)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(pairwise_sum(&terms))
        }
        GeodesicCurrent::Torus(v) => Ok(v[0].to_f64().hypot(v[1].to_f64())),
    }
}

/// The structure map `Z` acting on torus currents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MonodromyAction {
    Identity,
    Linear([[i64; 2]; 2]),
}

/// An eigenvalue with an exact eigenvector.
#[derive(Clone, Debug, Serialize)]
pub struct EigenPair {
    pub value: Quad,
    pub vector: Slope,
}

impl MonodromyAction {
    pub fn linear(m: [[i64; 2]; 2]) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() != 1 {
            return Err(Error::InvalidMap(format!("determinant {det} is not ±1")));
        }
        Ok(MonodromyAction::Linear(m))
    }

    pub fn matrix(&self) -> [[i64; 2]; 2] {
        match self {
            MonodromyAction::Identity => [[1, 0], [0, 1]],
            MonodromyAction::Linear(m) => *m,
        }
    }

    pub fn det(&self) -> i64 {
        let m = self.matrix();
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn inverse(&self) -> MonodromyAction {
        match self {
            MonodromyAction::Identity => MonodromyAction::Identity,
            MonodromyAction::Linear(m) => {
                let d = self.det();
                MonodromyAction::Linear([[d * m[1][1], -d * m[0][1]], [-d * m[1][0], d * m[0][0]]])
            }
        }
    }

    pub fn apply(&self, v: &Slope) -> Slope {
        let m = self.matrix();
        let (a, b, c, d) = (Quad::int(m[0][0]), Quad::int(m[0][1]), Quad::int(m[1][0]), Quad::int(m[1][1]));
        [&(&a * &v[0]) + &(&b * &v[1]), &(&c * &v[0]) + &(&d * &v[1])]
    }

    pub fn apply_f64(&self, v: [f64; 2]) -> [f64; 2] {
        let m = self.matrix().map(|r| r.map(|x| x as f64));
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    /// `Z^k`, with negative `k` using the inverse.
    pub fn power_apply(&self, k: i64, v: &Slope) -> Slope {
        let step = if k >= 0 { *self } else { self.inverse() };
        let mut out = v.clone();
        for _ in 0..k.unsigned_abs() {
            out = step.apply(&out);
        }
        out
    }

    /// Expanding and contracting eigenpairs of a hyperbolic matrix.
    pub fn eigenpairs(&self) -> Result<(EigenPair, EigenPair)> {
        let m = self.matrix();
        let tr = m[0][0] + m[1][1];
        let disc = tr * tr - 4 * self.det();
        if disc <= 0 || tr.abs() < 2 {
            return Err(Error::Unsupported(format!("matrix {m:?} has no real distinct eigenvalues")));
        }
        let half = num_rational::BigRational::new(1.into(), 2.into());
        let root = Quad::sqrt(disc as u64);
        let pair = |sign: i64| {
            let value = &(&Quad::int(tr) + &(&Quad::int(sign) * &root)) * &Quad::rational(half.clone());
            let vector = if m[0][1] != 0 {
                [Quad::int(m[0][1]), &value - &Quad::int(m[0][0])]
            } else {
                [&value - &Quad::int(m[1][1]), Quad::int(m[1][0])]
            };
            EigenPair { value, vector }
        };
        let (p, q) = (pair(1), pair(-1));
        if p.value.to_f64().abs() >= q.value.to_f64().abs() {
            Ok((p, q))
        } else {
            Ok((q, p))
        }
    }
}

pub fn det(u: &Slope, v: &Slope) -> Quad {
    &(&u[0] * &v[1]) - &(&u[1] * &v[0])
}

/// Angle between two slope classes, in `[0, π/2]`.
pub fn slope_angle(u: [f64; 2], v: [f64; 2]) -> f64 {
    let cross = u[0] * v[1] - u[1] * v[0];
    let dot = u[0] * v[0] + u[1] * v[1];
    cross.abs().atan2(dot.abs())
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    /// Successive mass ratio `|Z^k μ| / |Z^(k-1) μ|` at `k = k_max`.
    pub factor: f64,
    /// `(|Z^k μ| / |μ|)^(1/k)` at `k = k_max`, for comparison.
    pub root_estimate: f64,
    pub ratios: Vec<f64>,
    /// The last few ratio changes shrink monotonically.
    pub converged: bool,
}

/// Growth (or decay) rate of the mass of `Z^k μ`.
pub fn growth_factor(z: &MonodromyAction, mu: &GeodesicCurrent, k_max: usize) -> Result<GrowthReport> {
    if k_max < 8 {
        return Err(Error::Precondition(format!("k_max = {k_max} must be at least 8")));
    }
    let seed = mu.slope()?;
    if seed.iter().all(Quad::is_zero) {
        return Err(Error::Precondition("zero seed vector".into()));
    }
    let norm = |v: &Slope| v[0].to_f64().hypot(v[1].to_f64());
    let mut v = seed.clone();
    let mut masses = vec![norm(&v)];
    for _ in 0..k_max {
        v = z.apply(&v);
        masses.push(norm(&v));
    }
    let ratios: Vec<f64> = masses.windows(2).map(|w| w[1] / w[0]).collect();
    let diffs: Vec<f64> = ratios.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let tail = &diffs[diffs.len() - 4..];
    let converged = tail.windows(2).all(|w| w[1] <= w[0]) || tail.iter().all(|d| *d <= 1e-14 * ratios[0].abs());
    Ok(GrowthReport {
        factor: *ratios.last().unwrap(),
        root_estimate: (masses[k_max] / masses[0]).powf(1.0 / k_max as f64),
        ratios,
        converged,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenmeasureReport {
    /// Normalized to unit mass.
    pub direction: [f64; 2],
    pub growth: f64,
    /// Angle between the result and its image under `Z`.
    pub residual: f64,
    pub n: usize,
}

impl EigenmeasureReport {
    pub fn current(&self) -> GeodesicCurrent {
        GeodesicCurrent::torus_f64(self.direction)
    }
}

/// Weighted average of `Z^l μ₀` over `2N` iterates. Weights rise by
/// `(1+ε)/g` per step for the first `N` terms and by `(1-ε)/g` for the last
/// `N`, with `ε = 1/N` and `g` the growth factor of `μ₀`.
pub fn eigenmeasure(z: &MonodromyAction, mu0: &GeodesicCurrent, n: usize) -> Result<EigenmeasureReport> {
    if n == 0 {
        return Err(Error::Precondition("N must be positive".into()));
    }
    let g = growth_factor(z, mu0, (2 * n).max(8))?.factor;
    let eps = 1.0 / n as f64;
    // u_l = Z^l μ₀ / g^l keeps every term of unit order
    let mut u = mu0.slope_f64()?;
    let mut weight = 1.0;
    let mut sum = [0.0, 0.0];
    for l in 0..2 * n {
        if l > 0 {
            let zu = z.apply_f64(u);
            u = [zu[0] / g, zu[1] / g];
            weight *= if l < n { 1.0 + eps } else { 1.0 - eps };
        }
        sum[0] += weight * u[0];
        sum[1] += weight * u[1];
    }
    let m = sum[0].hypot(sum[1]);
    let direction = [sum[0] / m, sum[1] / m];
    Ok(EigenmeasureReport { direction, growth: g, residual: slope_angle(direction, z.apply_f64(direction)), n })
}

/// Formal Laurent series in `t`; only even exponents occur in the torus
/// model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinkingSeries {
    /// Inclusive range of `k`; coefficients are stored at exponent `2k`.
    pub window: (i64, i64),
    pub coefficients: BTreeMap<i64, Quad>,
}

impl LinkingSeries {
    /// Coefficient of `t^e`; `None` outside the window.
    pub fn coefficient(&self, e: i64) -> Option<Quad> {
        let k = e.div_euclid(2);
        if k < self.window.0 || k > self.window.1 {
            return None;
        }
        Some(self.coefficients.get(&e).cloned().unwrap_or_else(Quad::zero))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(Quad::is_zero)
    }
}

/// `Λ(μ, ν)`: the coefficient of `t^(2k)` is `|det[Z^k μ, ν]|`, exactly.
pub fn linking_series(
    mu: &GeodesicCurrent,
    nu: &GeodesicCurrent,
    z: &MonodromyAction,
    window: (i64, i64),
) -> Result<LinkingSeries> {
    if window.0 > window.1 {
        return Err(Error::Precondition(format!("empty window {window:?}")));
    }
    let (m, n) = (mu.slope()?, nu.slope()?);
    let mut v = z.power_apply(window.0, m);
    let mut coefficients = BTreeMap::new();
    for k in window.0..=window.1 {
        coefficients.insert(2 * k, det(&v, n).abs());
        v = z.apply(&v);
    }
    Ok(LinkingSeries { window, coefficients })
}

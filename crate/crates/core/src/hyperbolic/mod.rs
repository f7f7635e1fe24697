//! Hyperbolic plane geometry in the disk model, Möbius boundary actions and
//! their lifts, and a genus-2 Fuchsian group.
//!
//! A boundary angle `θ` (period 1) is the disk point `e^{2πiθ}`. Under the
//! Cayley map `w = (z - i)/(z + i)` it is the half-plane point
//! `z = -cot(πθ)`, which is also the ray at angle `-πθ` used by
//! [`ProjectiveLift`]. Matrices are stored in that real half-plane form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::circle_homeo::projective::{mat_inv, mat_mul, normalize, ray_action, trace, Mat2, ProjectiveLift};
use crate::circle_homeo::rep::GroupRepresentation;
use crate::circle_homeo::word::Word;
use crate::circle_homeo::LiftedCircleMap;
use crate::error::{Error, Result};

/// Orientation-preserving isometry of the hyperbolic plane, as a determinant
/// one real matrix acting on the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Moebius {
    m: Mat2,
}

type CMat = [Complex64; 4];

fn cmul(p: &CMat, q: &CMat) -> CMat {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

/// Cayley matrix sending the upper half-plane to the disk, and its inverse
/// (up to scale).
fn cayley() -> (CMat, CMat) {
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let k = [one, -i, one, i];
    let k_inv = [i, i, -one, one];
    (k, k_inv)
}

impl Moebius {
    pub fn identity() -> Self {
        Moebius { m: [1.0, 0.0, 0.0, 1.0] }
    }

    /// From a real half-plane matrix with positive determinant.
    pub fn from_halfplane(m: Mat2) -> Result<Self> {
        let det = m[0] * m[3] - m[1] * m[2];
        if !(det > 0.0) || m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMap(format!("half-plane matrix must have positive determinant, got {det}")));
        }
        Ok(Moebius { m: normalize(&m) })
    }

    /// From `w ↦ (αw + β)/(β̄w + ᾱ)` with `|α| > |β|`.
    pub fn from_disk(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let det = alpha.norm_sqr() - beta.norm_sqr();
        if !(det > 0.0) {
            return Err(Error::InvalidMap("disk Möbius map needs |α| > |β|".into()));
        }
        let d = [alpha, beta, beta.conj(), alpha.conj()];
        let (k, k_inv) = cayley();
        let h = cmul(&k_inv, &cmul(&d, &k));
        // h is a real matrix times the scalar 2i
        let s = Complex64::new(0.0, 2.0);
        let real: Mat2 = [(h[0] / s).re, (h[1] / s).re, (h[2] / s).re, (h[3] / s).re];
        Self::from_halfplane(real)
    }

    /// Rotation by `angle` (period 1) about the disk center.
    pub fn rotation(angle: f64) -> Self {
        let (s, c) = (PI * angle).sin_cos();
        Moebius { m: normalize(&[c, s, -s, c]) }
    }

    /// Translation by hyperbolic distance `len` along the real diameter,
    /// from `-1` towards `1`.
    pub fn translation(len: f64) -> Self {
        let (c, s) = ((len / 2.0).cosh(), (len / 2.0).sinh());
        Self::from_disk(Complex64::new(c, 0.0), Complex64::new(s, 0.0)).expect("cosh > sinh")
    }

    /// Parabolic element fixing the boundary angle 0 (half-plane `∞`).
    pub fn parabolic(shift: f64) -> Self {
        Moebius { m: [1.0, shift, 0.0, 1.0] }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        trace(&self.m)
    }

    /// Disk coefficients `(α, β)` of `w ↦ (αw + β)/(β̄w + ᾱ)`.
    pub fn disk(&self) -> (Complex64, Complex64) {
        let (k, k_inv) = cayley();
        let h = self.m.map(|v| Complex64::new(v, 0.0));
        let d = cmul(&k, &cmul(&h, &k_inv));
        // K H K⁻¹ is 2i times the SU(1,1) matrix
        let s = Complex64::new(0.0, 2.0);
        (d[0] / s, d[1] / s)
    }

    pub fn compose(&self, inner: &Moebius) -> Moebius {
        Moebius { m: normalize(&mat_mul(&self.m, &inner.m)) }
    }

    pub fn inverse(&self) -> Moebius {
        Moebius { m: normalize(&mat_inv(&self.m)) }
    }

    /// Action on a point of the open disk.
    pub fn apply_disk(&self, w: Complex64) -> Complex64 {
        let (a, b) = self.disk();
        (a * w + b) / (b.conj() * w + a.conj())
    }

    /// Argument of the complex derivative at a disk point.
    pub fn derivative_arg(&self, w: Complex64) -> f64 {
        let (a, b) = self.disk();
        // g' = 1/(β̄w + ᾱ)²; factoring ᾱ keeps the branch continuous in w
        let conj_a = a.conj();
        -2.0 * (conj_a.arg() + (Complex64::new(1.0, 0.0) + b.conj() * w / conj_a).arg())
    }

    /// Sup-norm distance of the normalized matrix to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        let m = &self.m;
        (m[0] - 1.0).abs().max((m[3] - 1.0).abs()).max(m[1].abs()).max(m[2].abs())
    }
}

/// A point of the circle at infinity, reduced to `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize)]
pub struct BoundaryPoint(f64);

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        let a = angle.rem_euclid(1.0);
        BoundaryPoint(if a >= 1.0 { 0.0 } else { a })
    }

    pub fn angle(&self) -> f64 {
        self.0
    }

    pub fn to_disk(&self) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * self.0)
    }

    pub fn from_disk(w: Complex64) -> Self {
        Self::new(w.arg() / (2.0 * PI))
    }
}

/// Oriented geodesic from `u` (backward) to `s` (forward).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeodesicH2 {
    pub u: BoundaryPoint,
    pub s: BoundaryPoint,
}

impl GeodesicH2 {
    pub fn new(u: BoundaryPoint, s: BoundaryPoint) -> Result<Self> {
        if u == s {
            return Err(Error::InvalidMap("geodesic endpoints must differ".into()));
        }
        Ok(GeodesicH2 { u, s })
    }
}

/// A lift to the line of the boundary action of `base`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MoebiusLift {
    pub base: Moebius,
    /// Offset from the canonical lift (the one with a fixed point when the
    /// base has real eigenvalues, displacement in `(0, 1)` when elliptic).
    pub winding: i64,
}

pub fn boundary_action(g: &Moebius, p: BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint::new(ray_action(&g.m, p.0))
}

/// The continuous lift of the boundary action with the given winding.
///
/// The lift is represented in closed form (a projective lift), so branch
/// tracking is exact rather than sampled.
pub fn lift_action(g: &MoebiusLift) -> LiftedCircleMap {
    LiftedCircleMap::Projective(ProjectiveLift::with_winding(g.base.m, g.winding))
}

/// Forward endpoint of the geodesic ray from `point` in direction
/// `direction` (radians, measured in the disk).
pub fn geodesic_endpoints(point: (f64, f64), direction: f64) -> Result<BoundaryPoint> {
    let p = Complex64::new(point.0, point.1);
    if !(p.norm() < 1.0) {
        return Err(Error::Precondition(format!("point {point:?} is not inside the unit disk")));
    }
    // w ↦ (w + p)/(1 + p̄w) carries 0 to p with positive real derivative
    let w = Complex64::from_polar(1.0, direction);
    Ok(BoundaryPoint::from_disk((w + p) / (Complex64::new(1.0, 0.0) + p.conj() * w)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum MoebiusClass {
    Identity,
    Elliptic,
    Parabolic { fixed: BoundaryPoint },
    Hyperbolic { attracting: BoundaryPoint, repelling: BoundaryPoint },
}

const PARABOLIC_TOL: f64 = 1e-10;

pub fn classify_moebius(g: &Moebius) -> MoebiusClass {
    let m = &g.m;
    let tr = trace(m).abs();
    if (tr - 2.0).abs() <= PARABOLIC_TOL {
        if g.distance_to_identity() <= PARABOLIC_TOL {
            return MoebiusClass::Identity;
        }
        let v = eigenvector(m, 1.0);
        return MoebiusClass::Parabolic { fixed: vector_angle(v) };
    }
    if tr < 2.0 {
        return MoebiusClass::Elliptic;
    }
    let disc = (tr * tr / 4.0 - 1.0).sqrt();
    let big = tr / 2.0 + disc;
    MoebiusClass::Hyperbolic {
        attracting: vector_angle(eigenvector(m, big)),
        repelling: vector_angle(eigenvector(m, 1.0 / big)),
    }
}

/// Axis of a hyperbolic element, oriented from repelling to attracting.
pub fn axis(g: &Moebius) -> Result<GeodesicH2> {
    match classify_moebius(g) {
        MoebiusClass::Hyperbolic { attracting, repelling } => Ok(GeodesicH2 { u: repelling, s: attracting }),
        other => Err(Error::InvalidClass(format!("no axis: element is {other:?}"))),
    }
}

/// Translation length `2 arccosh(|tr|/2)` of a hyperbolic element.
pub fn translation_length(g: &Moebius) -> f64 {
    2.0 * (g.trace().abs() / 2.0).max(1.0).acosh()
}

fn eigenvector(m: &Mat2, lambda: f64) -> (f64, f64) {
    let (a, b, c, d) = (m[0] - lambda, m[1], m[2], m[3] - lambda);
    if a.abs() + b.abs() >= c.abs() + d.abs() {
        (-b, a)
    } else {
        (-d, c)
    }
}

fn vector_angle(v: (f64, f64)) -> BoundaryPoint {
    BoundaryPoint::new(-v.1.atan2(v.0) / PI)
}

/// Named generators, the surface relator and the genus.
#[derive(Clone, Debug, Serialize)]
pub struct FuchsianGroup {
    pub names: Vec<String>,
    pub generators: Vec<Moebius>,
    pub relator: Word,
    pub genus: u32,
}

impl FuchsianGroup {
    pub fn generator(&self, name: &str) -> Option<&Moebius> {
        self.names.iter().position(|n| n == name).map(|i| &self.generators[i])
    }

    /// Matrix product along a word, composed right to left.
    pub fn evaluate(&self, w: &Word) -> Result<Moebius> {
        let mut acc = Moebius::identity();
        for l in &w.letters {
            let g = self.generator(&l.name).ok_or_else(|| Error::UnknownGenerator(l.name.clone()))?;
            acc = acc.compose(&if l.inverse { g.inverse() } else { *g });
        }
        Ok(acc)
    }

    /// Winding-zero lifts of the generators with the relator attached.
    pub fn to_representation(&self) -> Result<GroupRepresentation> {
        let gens = self
            .names
            .iter()
            .zip(&self.generators)
            .map(|(n, g)| (n.clone(), lift_action(&MoebiusLift { base: *g, winding: 0 })))
            .collect();
        GroupRepresentation::new(gens, vec![self.relator.clone()])
    }

    /// Inverse of [`to_representation`](Self::to_representation): every
    /// generator must be a winding-zero projective lift, and the first
    /// relator is taken as the surface relator.
    pub fn from_representation(rep: &GroupRepresentation) -> Result<Self> {
        let mut names = Vec::new();
        let mut generators = Vec::new();
        for (name, f) in rep.generators() {
            let p = f
                .as_projective()
                .filter(|p| p.winding() == 0)
                .ok_or_else(|| Error::Unsupported(format!("generator `{name}` is not a winding-zero Möbius lift")))?;
            names.push(name.clone());
            generators.push(Moebius::from_halfplane(*p.matrix())?);
        }
        let relator = rep
            .relators()
            .first()
            .cloned()
            .ok_or_else(|| Error::Unsupported("representation has no relator".into()))?;
        let genus = (relator.len() / 4) as u32;
        Ok(FuchsianGroup { names, generators, relator, genus })
    }
}

/// Inradius of the regular octagon with interior angles `π/4`:
/// `cosh d = cot(π/8) = 1 + √2`.
pub fn octagon_inradius() -> f64 {
    (1.0 + 2f64.sqrt()).acosh()
}

/// Side pairing of the regular octagon carrying side `i` onto side `j`,
/// with the interior sent across side `j`. Side `k` has its midpoint at
/// disk angle `kπ/4`.
fn side_pairing(i: usize, j: usize) -> Moebius {
    let d = octagon_inradius();
    let turn = |radians: f64| Moebius::rotation(radians / (2.0 * PI));
    let theta = |k: usize| k as f64 * PI / 4.0;
    turn(theta(j)).compose(&Moebius::translation(2.0 * d)).compose(&turn(PI - theta(i)))
}

/// The genus-2 surface group from the regular octagon with side word
/// `a1 b1 a1⁻¹ b1⁻¹ a2 b2 a2⁻¹ b2⁻¹`.
pub fn genus2_fuchsian() -> FuchsianGroup {
    let generators = vec![side_pairing(2, 0), side_pairing(1, 3), side_pairing(6, 4), side_pairing(5, 7)];
    FuchsianGroup {
        names: ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect(),
        generators,
        relator: Word::parse("a1 b1 A1 B1 a2 b2 A2 B2").expect("valid word"),
        genus: 2,
    }
}

/// Integer translation of the relator evaluated on winding-zero lifts.
///
/// Sign convention: boundary angles increase counterclockwise and lifts
/// compose right to left. With that convention the octagon group gives
/// `+2 = -χ`, the relator lift being `Z²`.
pub fn relator_winding(group: &FuchsianGroup) -> Result<i64> {
    let mut acc = LiftedCircleMap::identity();
    for l in &group.relator.letters {
        let g = group.generator(&l.name).ok_or_else(|| Error::UnknownGenerator(l.name.clone()))?;
        let lift = lift_action(&MoebiusLift { base: *g, winding: 0 });
        acc = acc.compose(&if l.inverse { lift.inverse() } else { lift });
    }
    let p = acc
        .as_projective()
        .ok_or_else(|| Error::Resolution("relator lift left the projective family".into()))?;
    let m = Moebius { m: *p.matrix() };
    if m.distance_to_identity() > 1e-9 {
        return Err(Error::Precondition(format!(
            "relator is not the identity (distance {})",
            m.distance_to_identity()
        )));
    }
    Ok(p.shift())
}

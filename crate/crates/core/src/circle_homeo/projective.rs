//! Lifts of the projective action of `SL(2, R)` on rays of the plane.
//!
//! A circle coordinate `t` (period 1) corresponds to the ray at angle
//! `-π t`. A matrix moves each ray by a signed angle `δ ∈ (-π, π)`, and the
//! base lift is `t ↦ t - δ / π`. That angle never reaches `±π` once the
//! matrix is sign-normalized to have non-negative trace, so the base lift is
//! continuous and every other lift differs from it by an integer.

use std::f64::consts::PI;

/// Matrix entries `[a, b, c, d]` of `[[a, b], [c, d]]`.
pub type Mat2 = [f64; 4];

pub fn mat_mul(p: &Mat2, q: &Mat2) -> Mat2 {
    [
        p[0] * q[0] + p[1] * q[2],
        p[0] * q[1] + p[1] * q[3],
        p[2] * q[0] + p[3] * q[2],
        p[2] * q[1] + p[3] * q[3],
    ]
}

pub fn mat_inv(m: &Mat2) -> Mat2 {
    let det = m[0] * m[3] - m[1] * m[2];
    [m[3] / det, -m[1] / det, -m[2] / det, m[0] / det]
}

pub fn trace(m: &Mat2) -> f64 {
    m[0] + m[3]
}

/// Scales to determinant one and flips sign so the trace is non-negative.
pub fn normalize(m: &Mat2) -> Mat2 {
    let det = m[0] * m[3] - m[1] * m[2];
    assert!(det > 0.0, "matrix must have positive determinant, got {det}");
    let s = det.sqrt();
    let mut n = [m[0] / s, m[1] / s, m[2] / s, m[3] / s];
    if trace(&n) < 0.0 {
        n.iter_mut().for_each(|v| *v = -*v);
    }
    n
}

/// Signed angle by which `m` turns the unit vector at angle `alpha`.
fn turn_angle(m: &Mat2, alpha: f64) -> f64 {
    let (s, c) = alpha.sin_cos();
    let w0 = m[0] * c + m[1] * s;
    let w1 = m[2] * c + m[3] * s;
    let cross = c * w1 - s * w0;
    let dot = c * w0 + s * w1;
    cross.atan2(dot)
}

/// Base-lift displacement `f(t) - t` for `t ∈ [0, 1)`.
fn base_displacement(m: &Mat2, t: f64) -> f64 {
    -turn_angle(m, -PI * t) / PI
}

/// Ray image of a circle coordinate, reduced to `[0, 1)`.
pub fn ray_action(m: &Mat2, t: f64) -> f64 {
    let alpha = -PI * t;
    let (s, c) = alpha.sin_cos();
    let w0 = m[0] * c + m[1] * s;
    let w1 = m[2] * c + m[3] * s;
    let out = -w1.atan2(w0) / PI;
    out.rem_euclid(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveLift {
    m: Mat2,
    shift: i64,
}

impl ProjectiveLift {
    /// Lift `base + shift` of the (normalized) matrix.
    pub fn new(m: Mat2, shift: i64) -> Self {
        ProjectiveLift { m: normalize(&m), shift }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_elliptic(&self) -> bool {
        trace(&self.m).abs() < 2.0
    }

    /// Integer offset of the canonical lift: the lift with a fixed point when
    /// the matrix has real eigenvalues, the lift with displacement in `(0, 1)`
    /// when it is elliptic.
    pub fn canonical_offset(m: &Mat2) -> i64 {
        let m = normalize(m);
        if trace(&m).abs() < 2.0 && base_displacement(&m, 0.0) < 0.0 {
            1
        } else {
            0
        }
    }

    /// The lift whose integer offset from the canonical lift is `winding`.
    pub fn with_winding(m: Mat2, winding: i64) -> Self {
        let shift = Self::canonical_offset(&m) + winding;
        Self::new(m, shift)
    }

    /// Offset from the canonical lift.
    pub fn winding(&self) -> i64 {
        self.shift - Self::canonical_offset(&self.m)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let k = t.floor();
        let fr = t - k;
        fr + base_displacement(&self.m, fr) + k + self.shift as f64
    }

    pub fn compose(&self, inner: &ProjectiveLift) -> ProjectiveLift {
        let m = normalize(&mat_mul(&self.m, &inner.m));
        let target = self.eval(inner.eval(0.0));
        let base = base_displacement(&m, 0.0);
        let shift = (target - base).round() as i64;
        ProjectiveLift { m, shift }
    }

    pub fn inverse(&self) -> ProjectiveLift {
        let m = normalize(&mat_inv(&self.m));
        let y = base_displacement(&m, 0.0);
        let back = self.eval(y);
        ProjectiveLift { m, shift: -(back.round() as i64) }
    }

    /// Closed-form rotation number.
    ///
    /// Real eigenvalues give an exact integer; elliptic matrices are
    /// conjugate to a rotation whose angle is read off the trace.
    pub fn rotation_number(&self) -> (f64, bool) {
        let tr = trace(&self.m);
        if tr >= 2.0 - 1e-12 {
            (self.shift as f64, true)
        } else {
            let angle = (tr / 2.0).clamp(-1.0, 1.0).acos() / PI;
            let sign = if base_displacement(&self.m, 0.0) < 0.0 { -1.0 } else { 1.0 };
            (self.shift as f64 + sign * angle, false)
        }
    }

    /// Fixed points in `[0, 1)` of this lift (only the zero-displacement ones).
    pub fn fixed_points(&self) -> Vec<f64> {
        let m = &self.m;
        let tr = trace(m);
        if tr.abs() < 2.0 - 1e-12 {
            return Vec::new();
        }
        if self.shift != 0 {
            return Vec::new();
        }
        let disc = (tr * tr / 4.0 - 1.0).max(0.0).sqrt();
        let mut pts = Vec::new();
        for lambda in [tr / 2.0 + disc, tr / 2.0 - disc] {
            // eigenvector of [[a - λ, b], [c, d - λ]]
            let (a, b, c, d) = (m[0] - lambda, m[1], m[2], m[3] - lambda);
            let v = if a.abs() + b.abs() >= c.abs() + d.abs() { (-b, a) } else { (-(d), c) };
            if v.0 == 0.0 && v.1 == 0.0 {
                continue;
            }
            let alpha = v.1.atan2(v.0);
            let t = (-alpha / PI).rem_euclid(1.0);
            let t = refine_fixed_point(self, t);
            if !pts.iter().any(|p: &f64| circle_dist(*p, t) < 1e-10) {
                pts.push(t);
            }
        }
        if pts.is_empty() && (m[1].abs() + m[2].abs() + (m[0] - 1.0).abs()) < 1e-14 {
            return Vec::new();
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        pts
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.shift == 0
            && (self.m[0] - 1.0).abs() <= tol
            && (self.m[3] - 1.0).abs() <= tol
            && self.m[1].abs() <= tol
            && self.m[2].abs() <= tol
    }
}

fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// A few secant steps on `f(t) - t` to polish an eigenvector angle.
fn refine_fixed_point(f: &ProjectiveLift, t: f64) -> f64 {
    let g = |x: f64| f.eval(x) - x;
    let h = 1e-7;
    let mut x = t;
    for _ in 0..4 {
        let gx = g(x);
        if gx == 0.0 {
            break;
        }
        let slope = (g(x + h) - g(x - h)) / (2.0 * h);
        if slope.abs() < 1e-9 {
            break;
        }
        let step = gx / slope;
        if step.abs() > 1e-6 {
            break;
        }
        x -= step;
    }
    x.rem_euclid(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rot(alpha: f64) -> Mat2 {
        let (s, c) = (PI * alpha).sin_cos();
        [c, s, -s, c]
    }

    #[test]
    fn rotation_matrix_lifts_to_translation() {
        for alpha in [0.1, 0.3, 0.5, 0.77] {
            let f = ProjectiveLift::with_winding(rot(alpha), 0);
            for k in 0..10 {
                let t = k as f64 * 0.13 - 0.4;
                assert!((f.eval(t) - t - alpha).abs() < 1e-13, "alpha={alpha} t={t}");
            }
            let (r, exact) = f.rotation_number();
            assert!(!exact);
            assert!((r - alpha).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_matrix_fixes_zero_and_half() {
        let f = ProjectiveLift::with_winding([2.0, 0.0, 0.0, 0.5], 0);
        let fp = f.fixed_points();
        assert_eq!(fp.len(), 2);
        assert!(fp[0].abs() < 1e-12 || (1.0 - fp[0]).abs() < 1e-12);
        assert!((fp[1] - 0.5).abs() < 1e-12);
        assert_eq!(f.rotation_number(), (0.0, true));
    }

    #[test]
    fn composition_tracks_the_lift() {
        let a = ProjectiveLift::with_winding([2.0, 1.0, 1.0, 1.0], 0);
        let b = ProjectiveLift::with_winding(rot(0.4), 1);
        let ab = a.compose(&b);
        for k in 0..17 {
            let t = k as f64 * 0.11 - 0.9;
            assert!((ab.eval(t) - a.eval(b.eval(t))).abs() < 1e-12);
        }
        let id = ab.compose(&ab.inverse());
        assert!(id.is_identity(1e-12));
    }

    #[test]
    fn equivariance_under_unit_translation() {
        let f = ProjectiveLift::with_winding([1.3, 0.4, -0.2, 0.7], 2);
        for k in 0..20 {
            let t = k as f64 * 0.173 - 1.0;
            assert!((f.eval(t + 1.0) - f.eval(t) - 1.0).abs() < 1e-12);
        }
    }
}

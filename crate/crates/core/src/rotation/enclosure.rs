//! Rigorous rotation-number enclosures and exact rational certification.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::circle_homeo::pl::PlCore;
use crate::circle_homeo::projective::ProjectiveLift;
use crate::circle_homeo::scalar::{rational_from_f64, small_fraction};
use crate::circle_homeo::{LiftedCircleMap, EXACT_BIT_BUDGET};

pub const DEFAULT_MAX_Q: u64 = 24;
pub const DEFAULT_ITERS: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationEnclosure {
    pub lo: f64,
    pub hi: f64,
    pub iterations: u64,
    /// Certified rational value `p/q` when `exact`.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rational: Option<(i64, u64)>,
    /// Whether the enclosure rests on outward-rounded evaluation.
    pub rigorous: bool,
}

impl RotationEnclosure {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    fn exact(p: i64, q: u64, iterations: u64) -> Self {
        let v = p as f64 / q as f64;
        RotationEnclosure { lo: v, hi: v, iterations, exact: true, rational: Some((p, q)), rigorous: true }
    }

    fn point(v: f64, iterations: u64, rigorous: bool) -> Self {
        RotationEnclosure { lo: v, hi: v, iterations, exact: false, rational: None, rigorous }
    }

    /// Certainly strictly between two consecutive integers.
    pub fn certainly_non_integral(&self) -> bool {
        self.lo.floor() == self.hi.floor() && self.lo > self.lo.floor() && self.hi.floor() + 1.0 > self.hi
    }

    /// `[lo, hi] + k`.
    pub fn shifted(&self, k: i64) -> Self {
        let mut out = self.clone();
        out.lo += k as f64;
        out.hi += k as f64;
        out.rational = self.rational.map(|(p, q)| (p + k * q as i64, q));
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RotationOptions {
    pub n_iter: u64,
    pub max_q: u64,
    pub certify: bool,
}

impl Default for RotationOptions {
    fn default() -> Self {
        RotationOptions { n_iter: DEFAULT_ITERS, max_q: DEFAULT_MAX_Q, certify: true }
    }
}

impl RotationOptions {
    pub fn iters(n_iter: u64) -> Self {
        RotationOptions { n_iter, ..Default::default() }
    }

    pub fn uncertified(n_iter: u64) -> Self {
        RotationOptions { n_iter, certify: false, ..Default::default() }
    }
}

/// Rotation number of `f` with default options and `n_iter` iterations.
pub fn rotation_number(f: &LiftedCircleMap, n_iter: u64) -> RotationEnclosure {
    rotation_number_chain(std::slice::from_ref(f), RotationOptions::iters(n_iter))
}

/// Rotation number of `maps[0] ∘ maps[1] ∘ … ∘ maps[m-1]`.
///
/// The composite is never formed in floating point: each orbit step runs
/// through the factors with outward rounding, so float PL factors give a
/// rigorous enclosure of the true composite.
pub fn rotation_number_chain(maps: &[LiftedCircleMap], opts: RotationOptions) -> RotationEnclosure {
    assert!(opts.n_iter >= 1, "n_iter must be at least 1");
    if let Some(e) = closed_form(maps, opts) {
        return e;
    }
    let rigorous = maps.iter().all(LiftedCircleMap::is_rigorous);
    let mut enc = iterate_enclosure(maps, opts.n_iter);
    enc.rigorous = rigorous;
    if opts.certify {
        if let Some((p, q)) = certify_rational(maps, &enc, opts.max_q) {
            // sampled factors certify only up to their construction grid
            return RotationEnclosure { rigorous, ..RotationEnclosure::exact(p, q, opts.n_iter) };
        }
    }
    enc
}

/// Rotation numbers available without iteration: rigid rotations and
/// chains that collapse to a single projective lift.
fn closed_form(maps: &[LiftedCircleMap], opts: RotationOptions) -> Option<RotationEnclosure> {
    let mut rot_exact = BigRational::zero();
    let mut rot_float = 0.0;
    let mut all_rot = true;
    let mut proj: Option<ProjectiveLift> = None;
    let mut all_proj_or_rot = true;
    for f in maps {
        match f {
            LiftedCircleMap::Rotation(r) => {
                rot_float += r.theta();
                // a float angle is itself an exact dyadic rational
                let theta = r.exact().cloned().unwrap_or_else(|| rational_from_f64(r.theta()));
                rot_exact += theta;
            }
            LiftedCircleMap::Projective(_) => all_rot = false,
            _ => {
                all_rot = false;
                all_proj_or_rot = false;
            }
        }
    }
    if all_rot {
        if let Some((p, q)) = small_fraction(&rot_exact, opts.max_q) {
            return Some(RotationEnclosure::exact(p, q, opts.n_iter));
        }
        let v = num_traits::ToPrimitive::to_f64(&rot_exact).unwrap_or(rot_float);
        let pad = f64::EPSILON * v.abs();
        return Some(RotationEnclosure { lo: v - pad, hi: v + pad, ..RotationEnclosure::point(v, opts.n_iter, true) });
    }
    if all_proj_or_rot {
        let mut acc = LiftedCircleMap::identity();
        for f in maps {
            acc = acc.compose(f);
        }
        if let LiftedCircleMap::Projective(p) = &acc {
            proj = Some(*p);
        }
    }
    let p = proj?;
    let (r, integral) = p.rotation_number();
    if integral {
        return Some(RotationEnclosure::exact(r as i64, 1, opts.n_iter));
    }
    Some(RotationEnclosure::point(r, opts.n_iter, false))
}

/// Doubling iteration of the orbit of 0 with interval propagation.
///
/// At each checkpoint `n`, `fⁿ(0) ∈ [L, H]` yields two valid enclosures:
/// `[(L - 1)/n, (H + 1)/n]`, and the sharper `[⌊L⌋/n, (⌊H⌋ + 1)/n]`, since
/// `fⁿ(0) ≥ m` forces `f^(kn)(0) ≥ k m` and `fⁿ(0) < m + 1` forces the
/// reverse bound. All checkpoints are intersected.
fn iterate_enclosure(maps: &[LiftedCircleMap], n_iter: u64) -> RotationEnclosure {
    let (mut lo_pt, mut hi_pt) = (0.0f64, 0.0f64);
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    let mut next_check = 1u64;
    for n in 1..=n_iter {
        for f in maps.iter().rev() {
            let (a, b) = f.eval_bounds(lo_pt, hi_pt);
            lo_pt = a;
            hi_pt = b;
        }
        if n == next_check || n == n_iter {
            let nf = n as f64;
            let (l, h) = (lo_pt, hi_pt);
            let a = ((l - 1.0) / nf).max(down(l.floor() / nf));
            let b = ((h + 1.0) / nf).min(up((h.floor() + 1.0) / nf));
            lo = lo.max(down(a));
            hi = hi.min(up(b));
            next_check = next_check.saturating_mul(2);
        }
    }
    RotationEnclosure { lo, hi, iterations: n_iter, exact: false, rational: None, rigorous: true }
}

fn down(v: f64) -> f64 {
    v - v.abs() * f64::EPSILON - f64::MIN_POSITIVE
}

fn up(v: f64) -> f64 {
    v + v.abs() * f64::EPSILON + f64::MIN_POSITIVE
}

/// Tries every `p/q` with `q ≤ max_q` inside the enclosure.
///
/// `r = p/q` exactly iff `Z^{-p} ∘ f^q` has a fixed point.
fn certify_rational(maps: &[LiftedCircleMap], enc: &RotationEnclosure, max_q: u64) -> Option<(i64, u64)> {
    let exact_chain: Option<Vec<PlCore<BigRational>>> = maps.iter().map(exact_factor).collect();
    for q in 1..=max_q {
        let qf = q as f64;
        let p_lo = (enc.lo * qf).ceil() as i64;
        let p_hi = (enc.hi * qf).floor() as i64;
        for p in p_lo..=p_hi {
            if num_integer::gcd(p.unsigned_abs(), q) != 1 && !(p == 0 && q == 1) {
                continue;
            }
            let certified = match &exact_chain {
                Some(chain) => exact_has_fixed_point(chain, p, q),
                None if maps.len() == 1 && q == 1 => pl_float_q1(&maps[0], p),
                None => None,
            };
            let certified = certified.or_else(|| ivt_certificate(maps, p, q));
            if certified == Some(true) {
                return Some((p, q));
            }
        }
    }
    None
}

fn exact_factor(f: &LiftedCircleMap) -> Option<PlCore<BigRational>> {
    match f {
        LiftedCircleMap::PiecewiseLinear(p) => p.exact().cloned(),
        LiftedCircleMap::Rotation(r) => {
            r.exact().map(|e| PlCore::new(vec![(BigRational::zero(), e.clone())]).expect("valid"))
        }
        _ => None,
    }
}

/// Exact decision whether `Z^{-p} ∘ F^q` has a fixed point, where `F` is
/// the composite of `chain`. `None` when the bit budget is exceeded.
fn exact_has_fixed_point(chain: &[PlCore<BigRational>], p: i64, q: u64) -> Option<bool> {
    let mut f = chain.last()?.clone();
    for g in chain.iter().rev().skip(1) {
        f = g.compose(&f);
    }
    let mut acc = f.clone();
    for _ in 1..q {
        acc = acc.compose(&f);
        if acc.max_bits() > EXACT_BIT_BUDGET {
            return None;
        }
    }
    Some(acc.displacement_straddles(&BigRational::from_integer(p.into())))
}

/// Exact `q = 1` test on the float breakpoints of a single PL map.
fn pl_float_q1(f: &LiftedCircleMap, p: i64) -> Option<bool> {
    let pl = f.as_pl()?;
    let exact = pl.float().map_scalar(|v| rational_from_f64(*v));
    Some(exact.displacement_straddles(&BigRational::from_integer(p.into())))
}

/// Intermediate-value certificate: points where `f^q(x) - x - p` is
/// certainly negative and certainly positive. Rigorous only for rigorous
/// factors.
fn ivt_certificate(maps: &[LiftedCircleMap], p: i64, q: u64) -> Option<bool> {
    const GRID: usize = 96;
    let mut neg = false;
    let mut pos = false;
    for i in 0..GRID {
        let x = i as f64 / GRID as f64;
        let (mut lo, mut hi) = (x, x);
        for _ in 0..q {
            for f in maps.iter().rev() {
                let (a, b) = f.eval_bounds(lo, hi);
                lo = a;
                hi = b;
            }
        }
        let target = x + p as f64;
        if hi < target {
            neg = true;
        } else if lo > target {
            pos = true;
        }
        if neg && pos {
            return Some(true);
        }
    }
    None
}

/// Exact value of a certified enclosure as a float fraction.
pub fn rational_value(e: &RotationEnclosure) -> Option<f64> {
    e.rational.map(|(p, q)| p as f64 / q as f64)
}

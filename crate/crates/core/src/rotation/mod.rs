//! Rotation numbers, element classification and the commutator inequalities.

pub mod enclosure;
pub mod harness;
pub mod measure;
pub mod probes;

use serde::Serialize;

use crate::circle_homeo::LiftedCircleMap;
pub use enclosure::{rotation_number, rotation_number_chain, RotationEnclosure, RotationOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    SpaceLike,
    PositiveTimeLike,
    NegativeTimeLike,
    Unresolved,
}

/// Space-like iff `f` has a fixed point; otherwise the sign of `f(x) - x`.
pub fn classify(f: &LiftedCircleMap) -> Classification {
    match f.displacement_sign() {
        Some(0) => Classification::SpaceLike,
        Some(s) if s > 0 => Classification::PositiveTimeLike,
        Some(_) => Classification::NegativeTimeLike,
        None => Classification::Unresolved,
    }
}

/// Enclosure of `r(a) - r(a b) + r(b)`.
///
/// Rotation numbers are additive on rigid rotations and on central
/// elements, so those cases are exactly zero without iteration.
pub fn delta_r(a: &LiftedCircleMap, b: &LiftedCircleMap, opts: RotationOptions) -> RotationEnclosure {
    let central = |f: &LiftedCircleMap| matches!(f, LiftedCircleMap::Rotation(r)
        if r.exact().is_some_and(|e| e.is_integer()));
    let both_rot = matches!((a, b), (LiftedCircleMap::Rotation(_), LiftedCircleMap::Rotation(_)));
    if both_rot || central(a) || central(b) {
        return RotationEnclosure {
            lo: 0.0,
            hi: 0.0,
            iterations: opts.n_iter,
            exact: true,
            rational: Some((0, 1)),
            rigorous: true,
        };
    }
    let ra = rotation_number_chain(std::slice::from_ref(a), opts);
    let rb = rotation_number_chain(std::slice::from_ref(b), opts);
    let rab = rotation_number_chain(&[a.clone(), b.clone()], opts);
    combine3(&ra, &rab, &rb, opts.n_iter)
}

/// `x - y + z` on enclosures.
fn combine3(x: &RotationEnclosure, y: &RotationEnclosure, z: &RotationEnclosure, n: u64) -> RotationEnclosure {
    let rational = match (x.rational, y.rational, z.rational) {
        (Some((p1, q1)), Some((p2, q2)), Some((p3, q3))) => {
            let q = (q1 * q2 * q3) as i64;
            let p = p1 * q / q1 as i64 - p2 * q / q2 as i64 + p3 * q / q3 as i64;
            let g = num_integer::gcd(p.abs(), q).max(1);
            Some((p / g, (q / g) as u64))
        }
        _ => None,
    };
    if let Some((p, q)) = rational {
        let v = p as f64 / q as f64;
        return RotationEnclosure { lo: v, hi: v, iterations: n, exact: true, rational, rigorous: true };
    }
    let lo = x.lo - y.hi + z.lo;
    let hi = x.hi - y.lo + z.hi;
    let pad = 4.0 * f64::EPSILON * (1.0 + lo.abs().max(hi.abs()));
    RotationEnclosure {
        lo: lo - pad,
        hi: hi + pad,
        iterations: n,
        exact: false,
        rational: None,
        rigorous: x.rigorous && y.rigorous && z.rigorous,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_homeo::random::random_pairs;

    #[test]
    fn classification_examples() {
        let r = LiftedCircleMap::rotation_rational(1, 7);
        assert_eq!(classify(&r), Classification::PositiveTimeLike);
        assert_eq!(classify(&r.inverse()), Classification::NegativeTimeLike);
        let f = LiftedCircleMap::pl(vec![(0.0, 0.0), (0.4, 0.7)]).unwrap();
        assert_eq!(classify(&f), Classification::SpaceLike);
    }

    #[test]
    fn delta_r_examples() {
        let a = LiftedCircleMap::rotation(0.31);
        let b = LiftedCircleMap::rotation(0.52);
        assert_eq!(delta_r(&a, &b, RotationOptions::iters(100)).rational, Some((0, 1)));
        let z = LiftedCircleMap::translation(1);
        let f = LiftedCircleMap::pl(vec![(0.1, 0.3), (0.5, 0.4)]).unwrap();
        assert_eq!(delta_r(&z, &f, RotationOptions::iters(100)).rational, Some((0, 1)));
        for (a, b) in random_pairs(11, 30) {
            let d = delta_r(&a, &b, RotationOptions::uncertified(2000));
            assert!(d.lo >= -1.0 - 2e-3 && d.hi <= 1.0 + 2e-3, "{d:?}");
        }
    }

    #[test]
    fn space_like_iff_certified_zero() {
        for (a, _) in random_pairs(5, 60) {
            let sl = classify(&a) == Classification::SpaceLike;
            let e = rotation_number(&a, 4000);
            assert_eq!(sl, e.rational == Some((0, 1)), "{e:?}");
        }
    }
}

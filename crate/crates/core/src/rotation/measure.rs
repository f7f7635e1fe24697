//! Invariant atomic measures for maps with rational rotation number.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::enclosure::{rotation_number, DEFAULT_ITERS};
use crate::circle_homeo::pl::{FixedSet, PlCore};
use crate::circle_homeo::{frac, FixedPoint, LiftedCircleMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct AtomicMeasure {
    /// `(position in [0, 1), weight)`, sorted by position.
    pub atoms: Vec<(f64, f64)>,
    pub rotation: (i64, u64),
    /// `μ([0, f(0)))`, which equals the rotation number.
    pub recovered: f64,
    /// Whether orbit and recovered value were computed in exact arithmetic.
    pub exact: bool,
}

/// Uniform atoms on a periodic orbit of the induced circle map.
pub fn invariant_measure_rational(f: &LiftedCircleMap) -> Result<AtomicMeasure> {
    let enc = rotation_number(f, DEFAULT_ITERS);
    let (p, q) = enc
        .rational
        .ok_or_else(|| Error::Unsupported("rotation number is not certified rational".into()))?;
    if let Some(exact) = exact_form(f) {
        return exact_measure(&exact, p, q);
    }
    let g = f.power(q as i64).shift(-p);
    let x0 = match g.fixed_points().first() {
        Some(FixedPoint::Point { x }) => *x,
        Some(FixedPoint::Interval { lo, .. }) => *lo,
        None => return Err(Error::Unsupported("no periodic point located".into())),
    };
    let mut orbit = Vec::with_capacity(q as usize);
    let mut x = x0;
    for _ in 0..q {
        orbit.push(frac(x));
        x = f.eval(x);
    }
    orbit.sort_by(f64::total_cmp);
    let w = 1.0 / q as f64;
    let recovered = mass_below(&orbit, f.eval(0.0)) as f64 * w;
    if (recovered - p as f64 / q as f64).abs() > 1e-9 {
        return Err(Error::Unsupported(format!(
            "recovered rotation {recovered} disagrees with certified {p}/{q}"
        )));
    }
    Ok(AtomicMeasure { atoms: orbit.into_iter().map(|x| (x, w)).collect(), rotation: (p, q), recovered, exact: false })
}

fn exact_form(f: &LiftedCircleMap) -> Option<PlCore<BigRational>> {
    match f {
        LiftedCircleMap::PiecewiseLinear(p) => p.exact().cloned(),
        LiftedCircleMap::Rotation(r) => r.exact().map(|e| PlCore::new(vec![(BigRational::zero(), e.clone())]).ok())?,
        _ => None,
    }
}

fn exact_measure(f: &PlCore<BigRational>, p: i64, q: u64) -> Result<AtomicMeasure> {
    let mut g = f.clone();
    for _ in 1..q {
        g = g.compose(f);
    }
    let g = g.shift(-p);
    let x0 = match g.fixed_sets().into_iter().next() {
        Some(FixedSet::Point(x)) => x,
        Some(FixedSet::Interval(a, _)) => a,
        None => return Err(Error::Unsupported("certified rotation has no periodic point".into())),
    };
    let mut orbit: Vec<BigRational> = Vec::with_capacity(q as usize);
    let mut x = x0;
    for _ in 0..q {
        orbit.push(&x - x.floor());
        x = f.eval(&x);
    }
    orbit.sort();
    orbit.dedup();
    if orbit.len() as u64 != q {
        return Err(Error::Unsupported("periodic orbit has repeated points".into()));
    }
    let f0 = f.eval(&BigRational::zero());
    let count = exact_mass_below(&orbit, &f0);
    let recovered = BigRational::new(count.into(), (q as i64).into());
    if recovered != BigRational::new(p.into(), (q as i64).into()) {
        return Err(Error::Unsupported(format!("recovered rotation {recovered} disagrees with {p}/{q}")));
    }
    let w = 1.0 / q as f64;
    Ok(AtomicMeasure {
        atoms: orbit.iter().map(|x| (x.to_f64().unwrap_or(f64::NAN), w)).collect(),
        rotation: (p, q),
        recovered: p as f64 / q as f64,
        exact: true,
    })
}

/// Signed count of lifted atoms in `[0, y)` (or `-#[y, 0)` for `y < 0`).
fn mass_below(atoms: &[f64], y: f64) -> i64 {
    let whole = y.floor();
    let rest = y - whole;
    let partial = atoms.iter().filter(|&&a| a < rest).count() as i64;
    whole as i64 * atoms.len() as i64 + partial
}

fn exact_mass_below(atoms: &[BigRational], y: &BigRational) -> i64 {
    let whole = y.floor();
    let rest = y - &whole;
    let partial = atoms.iter().filter(|a| **a < rest).count() as i64;
    whole.to_integer().to_i64().expect("small") * atoms.len() as i64 + partial
}

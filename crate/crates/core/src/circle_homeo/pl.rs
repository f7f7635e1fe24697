//! Piecewise-linear lifts of circle homeomorphisms.
//!
//! A map is stored by its breakpoints over one period: `x` strictly
//! increasing in `[0, 1)`, `y` strictly increasing with `y_last < y_0 + 1`.
//! Everything else follows from `f(x + 1) = f(x) + 1`.

use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct PlCore<T> {
    breaks: Vec<(T, T)>,
}

/// Set of fixed points in `[0, 1)` of a lifted map.
#[derive(Clone, Debug, PartialEq)]
pub enum FixedSet<T> {
    Point(T),
    /// Closed interval on which the map is the identity.
    Interval(T, T),
}

impl<T: Scalar> PlCore<T> {
    pub fn new(breaks: Vec<(T, T)>) -> Result<Self> {
        validate(&breaks)?;
        Ok(PlCore { breaks }.canonical())
    }

    pub(crate) fn from_unchecked(breaks: Vec<(T, T)>) -> Self {
        debug_assert!(validate(&breaks).is_ok(), "{breaks:?}");
        PlCore { breaks }
    }

    pub fn breaks(&self) -> &[(T, T)] {
        &self.breaks
    }

    pub fn len(&self) -> usize {
        self.breaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breaks.is_empty()
    }

    /// Breakpoint `i` of the periodic extension, for any integer `i`.
    fn point(&self, i: isize) -> (T, T) {
        let n = self.breaks.len() as isize;
        let k = i.div_euclid(n);
        let (x, y) = &self.breaks[i.rem_euclid(n) as usize];
        let shift = T::from_i64(k as i64);
        (x.clone() + shift.clone(), y.clone() + shift)
    }

    /// Index `i` of the segment `[point(i), point(i + 1))` containing `fr in [0, 1)`.
    fn segment_of(&self, fr: &T) -> isize {
        // number of breakpoints with x <= fr, minus one
        let count = self.breaks.partition_point(|(x, _)| x <= fr);
        count as isize - 1
    }

    pub fn eval(&self, x: &T) -> T {
        let k = x.floor_i64();
        let fr = x.clone() - T::from_i64(k);
        let i = self.segment_of(&fr);
        let (xa, ya) = self.point(i);
        let (xb, yb) = self.point(i + 1);
        let y = ya.clone() + (fr - xa.clone()) * (yb - ya) / (xb - xa);
        y + T::from_i64(k)
    }

    /// Slope of the piece containing `x` (right-continuous).
    pub fn slope_at(&self, x: &T) -> T {
        let fr = x.clone() - T::from_i64(x.floor_i64());
        let i = self.segment_of(&fr);
        let (xa, ya) = self.point(i);
        let (xb, yb) = self.point(i + 1);
        (yb - ya) / (xb - xa)
    }

    pub fn inverse(&self) -> Self {
        let mut pts: Vec<(T, T)> = self
            .breaks
            .iter()
            .map(|(x, y)| {
                let m = y.floor_i64();
                let m = T::from_i64(m);
                (y.clone() - m.clone(), x.clone() - m)
            })
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("comparable"));
        PlCore::from_unchecked(pts).canonical()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let inner_inv = inner.inverse();
        let mut xs: Vec<T> = inner.breaks.iter().map(|(x, _)| x.clone()).collect();
        for (x, _) in &self.breaks {
            let pre = inner_inv.eval(x);
            let fr = pre.clone() - T::from_i64(pre.floor_i64());
            xs.push(fr);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
        let mut uniq: Vec<T> = Vec::with_capacity(xs.len());
        for x in xs {
            if uniq.last().is_none_or(|last| !last.near(&x)) {
                uniq.push(x);
            }
        }
        if uniq.len() > 1 {
            let wrap = uniq[0].clone() + T::from_i64(1);
            if uniq.last().expect("nonempty").near(&wrap) {
                uniq.pop();
            }
        }
        let breaks = uniq
            .into_iter()
            .map(|x| {
                let y = self.eval(&inner.eval(&x));
                (x, y)
            })
            .collect::<Vec<_>>();
        PlCore::from_unchecked(strictify(breaks)).canonical()
    }

    /// `Z^k ∘ self`.
    pub fn shift(&self, k: i64) -> Self {
        let s = T::from_i64(k);
        PlCore {
            breaks: self.breaks.iter().map(|(x, y)| (x.clone(), y.clone() + s.clone())).collect(),
        }
    }

    /// Removes breakpoints at which the slope does not change.
    pub fn canonical(mut self) -> Self {
        loop {
            let n = self.breaks.len();
            if n <= 1 {
                return self;
            }
            let mut removed = None;
            for i in 0..n as isize {
                let (xa, ya) = self.point(i - 1);
                let (xb, yb) = self.point(i);
                let (xc, yc) = self.point(i + 1);
                let (dx1, dy1) = (xb.clone() - xa, yb.clone() - ya);
                let (dx2, dy2) = (xc - xb, yc - yb);
                if T::same_slope(&dx1, &dy1, &dx2, &dy2) {
                    removed = Some(i as usize);
                    break;
                }
            }
            match removed {
                Some(i) => {
                    self.breaks.remove(i);
                }
                None => return self,
            }
        }
    }

    /// Minimum and maximum of `f(x) - x`; attained at breakpoints.
    pub fn displacement_range(&self) -> (T, T) {
        let mut it = self.breaks.iter().map(|(x, y)| y.clone() - x.clone());
        let first = it.next().expect("nonempty");
        it.fold((first.clone(), first), |(lo, hi), d| {
            let lo = if d < lo { d.clone() } else { lo };
            let hi = if d > hi { d } else { hi };
            (lo, hi)
        })
    }

    /// Whether some breakpoint has displacement `<= p` and some `>= p`.
    pub fn displacement_straddles(&self, p: &T) -> bool {
        let mut below = false;
        let mut above = false;
        for (x, y) in &self.breaks {
            let d = y.clone() - x.clone();
            below |= d <= *p;
            above |= d >= *p;
        }
        below && above
    }

    /// Exact fixed-point set in `[0, 1)`, sorted.
    pub fn fixed_sets(&self) -> Vec<FixedSet<T>> {
        let n = self.breaks.len() as isize;
        let mut out: Vec<FixedSet<T>> = Vec::new();
        for i in 0..n {
            let (xa, ya) = self.point(i);
            let (xb, yb) = self.point(i + 1);
            let da = ya - xa.clone();
            let db = yb - xb.clone();
            if da.is_zero() && db.is_zero() {
                out.push(FixedSet::Interval(xa, xb));
            } else if da.is_zero() {
                out.push(FixedSet::Point(xa));
            } else if (da > T::zero() && db < T::zero()) || (da < T::zero() && db > T::zero()) {
                let root = xa.clone() + da.clone() * (xb - xa) / (da - db);
                out.push(FixedSet::Point(root));
            }
        }
        merge_fixed_sets(out)
    }

    /// The conjugate `x ↦ f(n x) / n`, which commutes with translation by `1/n`.
    pub fn rescale(&self, n: u32) -> Self {
        let nn = T::from_i64(n as i64);
        let mut breaks = Vec::with_capacity(self.breaks.len() * n as usize);
        for j in 0..n as i64 {
            for (x, y) in &self.breaks {
                let j = T::from_i64(j);
                breaks.push(((x.clone() + j.clone()) / nn.clone(), (y.clone() + j) / nn.clone()));
            }
        }
        PlCore::from_unchecked(breaks).canonical()
    }

    pub fn max_bits(&self) -> u64 {
        self.breaks.iter().map(|(x, y)| x.bits().max(y.bits())).max().unwrap_or(0)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> PlCore<U> {
        PlCore::from_unchecked(strictify(
            self.breaks.iter().map(|(x, y)| (f(x), f(y))).collect(),
        ))
    }
}

/// Drops breakpoints that collapsed onto a neighbor under rounding.
fn strictify<T: Scalar>(breaks: Vec<(T, T)>) -> Vec<(T, T)> {
    if T::EXACT {
        return breaks;
    }
    let mut out: Vec<(T, T)> = Vec::with_capacity(breaks.len());
    for (x, y) in breaks {
        if let Some((lx, ly)) = out.last() {
            if !(x > *lx && y > *ly) {
                continue;
            }
        }
        out.push((x, y));
    }
    while out.len() > 1 {
        let (x0, y0) = out[0].clone();
        let (xl, yl) = out.last().expect("nonempty").clone();
        if xl < x0.clone() + T::from_i64(1) && yl < y0 + T::from_i64(1) {
            break;
        }
        out.pop();
    }
    out
}

fn validate<T: Scalar>(breaks: &[(T, T)]) -> Result<()> {
    if breaks.is_empty() {
        return Err(Error::InvalidMap("piecewise-linear map needs at least one breakpoint".into()));
    }
    let one = T::from_i64(1);
    if breaks[0].0 < T::zero() || breaks.last().expect("nonempty").0 >= one {
        return Err(Error::InvalidMap("breakpoint abscissae must lie in [0, 1)".into()));
    }
    for w in breaks.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::InvalidMap("breakpoint abscissae must be strictly increasing".into()));
        }
        if w[1].1 <= w[0].1 {
            return Err(Error::InvalidMap("map must be strictly increasing".into()));
        }
    }
    let (_, y0) = &breaks[0];
    let (_, yl) = breaks.last().expect("nonempty");
    if *yl >= y0.clone() + one {
        return Err(Error::InvalidMap(
            "last breakpoint value must stay below first value plus one period".into(),
        ));
    }
    Ok(())
}

fn merge_fixed_sets<T: Scalar>(mut sets: Vec<FixedSet<T>>) -> Vec<FixedSet<T>> {
    let one = T::from_i64(1);
    let reduce = |v: T| {
        let k = v.floor_i64();
        v - T::from_i64(k)
    };
    for s in sets.iter_mut() {
        match s {
            FixedSet::Point(p) => *p = reduce(p.clone()),
            FixedSet::Interval(a, b) => {
                let k = T::from_i64(a.floor_i64());
                *a = a.clone() - k.clone();
                *b = b.clone() - k;
            }
        }
    }
    let start = |s: &FixedSet<T>| match s {
        FixedSet::Point(p) => p.clone(),
        FixedSet::Interval(a, _) => a.clone(),
    };
    sets.sort_by(|a, b| start(a).partial_cmp(&start(b)).expect("comparable"));
    let mut out: Vec<FixedSet<T>> = Vec::new();
    for s in sets {
        let absorbed = match (out.last_mut(), &s) {
            (Some(FixedSet::Interval(_, b)), FixedSet::Point(p)) => *p <= *b || p.near(b),
            (Some(FixedSet::Interval(_, b)), FixedSet::Interval(c, d)) if *c <= *b || c.near(b) => {
                if *d > *b {
                    *b = d.clone();
                }
                true
            }
            (Some(FixedSet::Point(q)), FixedSet::Point(p)) => p.near(q),
            _ => false,
        };
        if !absorbed {
            if let (Some(FixedSet::Point(q)), FixedSet::Interval(c, _)) = (out.last(), &s) {
                if q.near(c) {
                    out.pop();
                }
            }
            out.push(s);
        }
    }
    // wrap-around: an interval ending at 1 swallows points at 0
    if out.len() > 1 {
        let wraps = match out.last() {
            Some(FixedSet::Interval(_, b)) => *b >= one || b.near(&one),
            Some(FixedSet::Point(p)) => p.near(&one),
            None => false,
        };
        if wraps {
            if let Some(FixedSet::Point(p)) = out.first() {
                if p.is_zero() || p.near(&T::zero()) {
                    out.remove(0);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn evaluates_by_interpolation_and_periodicity() {
        let f = PlCore::new(vec![(0.0, 0.0), (0.5, 0.25)]).unwrap();
        assert_eq!(f.eval(&0.25), 0.125);
        assert_eq!(f.eval(&1.25), 1.125);
        assert_eq!(f.eval(&-0.75), -0.875);
        // wrap segment from (0.5, 0.25) to (1, 1)
        assert_eq!(f.eval(&0.75), 0.625);
    }

    #[test]
    fn single_breakpoint_is_a_translation() {
        let f = PlCore::new(vec![(0.3, 0.55)]).unwrap();
        assert!((f.eval(&0.9) - 1.15).abs() < 1e-15);
        assert!((f.eval(&-2.0) + 1.75).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PlCore::<f64>::new(vec![]).is_err());
        assert!(PlCore::new(vec![(0.0, 0.0), (0.5, 0.0)]).is_err());
        assert!(PlCore::new(vec![(0.5, 0.0), (0.2, 0.3)]).is_err());
        assert!(PlCore::new(vec![(0.0, 0.0), (0.5, 1.2)]).is_err());
        assert!(PlCore::new(vec![(1.0, 0.0)]).is_err());
    }

    #[test]
    fn canonical_form_drops_collinear_points() {
        let f = PlCore::new(vec![(q(0, 1), q(0, 1)), (q(1, 4), q(1, 4)), (q(1, 2), q(1, 2))]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn exact_inverse_and_composition() {
        let f = PlCore::new(vec![(q(0, 1), q(0, 1)), (q(1, 2), q(1, 4))]).unwrap();
        let id = f.compose(&f.inverse());
        assert_eq!(id.len(), 1);
        assert_eq!(id.breaks()[0].0, id.breaks()[0].1);
        let g = PlCore::new(vec![(q(1, 10), q(3, 10)), (q(7, 10), q(4, 5))]).unwrap();
        let fg = f.compose(&g);
        for k in 0..50 {
            let x = q(k, 37) - q(1, 2);
            assert_eq!(fg.eval(&x), f.eval(&g.eval(&x)));
        }
    }

    #[test]
    fn fixed_points_of_identity_and_sine_like_pl() {
        let id = PlCore::new(vec![(0.0, 0.0)]).unwrap();
        assert_eq!(id.fixed_sets(), vec![FixedSet::Interval(0.0, 1.0)]);
        let f = PlCore::new(vec![(q(0, 1), q(0, 1)), (q(1, 4), q(1, 2)), (q(3, 4), q(5, 8))]).unwrap();
        assert_eq!(f.fixed_sets(), vec![FixedSet::Point(q(0, 1)), FixedSet::Point(q(7, 12))]);
    }

    #[test]
    fn rescale_commutes_with_fractional_translation() {
        let f = PlCore::new(vec![(0.0, 0.1), (0.4, 0.3), (0.8, 0.85)]).unwrap();
        let g = f.rescale(3);
        for k in 0..20 {
            let x = k as f64 * 0.07;
            assert!((g.eval(&(x + 1.0 / 3.0)) - g.eval(&x) - 1.0 / 3.0).abs() < 1e-12);
            assert!((g.eval(&x) - f.eval(&(3.0 * x)) / 3.0).abs() < 1e-12);
        }
    }
}

//! Lifted maps given by an evaluation rule, validated on a sample grid.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const DEFAULT_GRID: usize = 4096;

/// Evaluation rule on the whole line.
pub type Rule = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct SmoothMap {
    rule: Rule,
    grid: usize,
    disp_min: f64,
    disp_max: f64,
}

impl fmt::Debug for SmoothMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothMap")
            .field("grid", &self.grid)
            .field("disp_min", &self.disp_min)
            .field("disp_max", &self.disp_max)
            .finish()
    }
}

impl SmoothMap {
    /// Builds a map from a rule on `[0, 1]`, extended by `f(x + k) = f(x) + k`.
    ///
    /// The rule must satisfy `rule(1) = rule(0) + 1` to within `1e-12`.
    pub fn from_unit_rule<F>(rule: F, grid: usize) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let gap = rule(1.0) - rule(0.0) - 1.0;
        if !gap.is_finite() || gap.abs() > 1e-12 {
            return Err(Error::InvalidMap(format!(
                "rule(1) - rule(0) = 1 + {gap:e}, expected exactly one period"
            )));
        }
        let full: Rule = Arc::new(move |x: f64| {
            let k = x.floor();
            rule(x - k) + k
        });
        Self::from_rule(full, grid)
    }

    /// Builds a map from a rule already defined on the whole line.
    pub fn from_rule(rule: Rule, grid: usize) -> Result<Self> {
        if grid < 2 {
            return Err(Error::Config("certificate grid needs at least 2 points".into()));
        }
        let mut disp_min = f64::INFINITY;
        let mut disp_max = f64::NEG_INFINITY;
        let mut prev = rule(0.0);
        let first = prev;
        for i in 0..=grid {
            let x = i as f64 / grid as f64;
            let y = if i == 0 { first } else { rule(x) };
            if !y.is_finite() {
                return Err(Error::InvalidMap(format!("rule is not finite at x = {x}")));
            }
            if i > 0 && y <= prev {
                return Err(Error::InvalidMap(format!(
                    "rule is not increasing between x = {} and x = {x}",
                    (i - 1) as f64 / grid as f64
                )));
            }
            if i < grid {
                disp_min = disp_min.min(y - x);
                disp_max = disp_max.max(y - x);
            } else if ((y - first) - 1.0).abs() > 1e-12 * (1.0 + first.abs()) {
                return Err(Error::InvalidMap(format!(
                    "f(1) - f(0) = {} differs from 1",
                    y - first
                )));
            }
            prev = y;
        }
        Ok(SmoothMap { rule, grid, disp_min, disp_max })
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.rule)(x)
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    /// Smallest and largest displacement seen on the certificate grid.
    pub fn grid_displacement(&self) -> (f64, f64) {
        (self.disp_min, self.disp_max)
    }

    /// Inverse computed by bisection on the rule.
    pub fn inverse(&self) -> Result<SmoothMap> {
        let rule = self.rule.clone();
        let inv: Rule = Arc::new(move |y: f64| invert_monotone(&*rule, y));
        SmoothMap::from_rule(inv, self.grid)
    }

    /// Roots of `f(x) - x` in `[0, 1)` located on the certificate grid and
    /// refined by bisection.
    pub fn fixed_points(&self) -> SmoothFixed {
        let g = |x: f64| self.eval(x) - x;
        let n = self.grid;
        let vals: Vec<f64> = (0..=n).map(|i| g(i as f64 / n as f64)).collect();
        let scale = 4.0 * f64::EPSILON;
        if vals.iter().all(|v| v.abs() <= scale) {
            return SmoothFixed::Everything;
        }
        let mut pts: Vec<f64> = Vec::new();
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            let (ga, gb) = (vals[i], vals[i + 1]);
            if ga.abs() <= scale {
                pts.push(a);
            } else if gb.abs() > scale && (ga < 0.0) != (gb < 0.0) {
                pts.push(bisect_root(&g, a, b, ga));
            }
        }
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        SmoothFixed::Points(pts)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SmoothFixed {
    Everything,
    Points(Vec<f64>),
}

fn bisect_root(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, ga: f64) -> f64 {
    let neg_left = ga < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm < 0.0) == neg_left {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Solves `f(x) = y` for an increasing lifted map.
pub fn invert_monotone(f: &dyn Fn(f64) -> f64, y: f64) -> f64 {
    // f(x) - x is bounded, so a bracket around y is found by stepping.
    let mut lo = y - 1.0;
    while f(lo) > y {
        lo -= 1.0;
    }
    let mut hi = y + 1.0;
    while f(hi) < y {
        hi += 1.0;
    }
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if m <= lo || m >= hi {
            break;
        }
        if f(m) < y {
            lo = m;
        } else {
            hi = m;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sine(a: f64) -> SmoothMap {
        SmoothMap::from_unit_rule(move |x| x + a * (2.0 * PI * x).sin(), DEFAULT_GRID).unwrap()
    }

    #[test]
    fn sine_map_fixes_zero_and_half() {
        match sine(0.1).fixed_points() {
            SmoothFixed::Points(p) => {
                assert_eq!(p.len(), 2, "{p:?}");
                assert!(p[0].abs() < 1e-12);
                assert!((p[1] - 0.5).abs() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_monotone_rules() {
        let err = SmoothMap::from_unit_rule(|x| x + 0.3 * (2.0 * PI * x).sin(), 512);
        assert!(matches!(err, Err(Error::InvalidMap(_))));
        let err = SmoothMap::from_unit_rule(|x| 0.5 * x, 512);
        assert!(matches!(err, Err(Error::InvalidMap(_))));
    }

    #[test]
    fn equivariant_off_the_unit_interval() {
        let f = sine(0.12);
        for k in 0..30 {
            let x = -3.0 + 0.21 * k as f64;
            assert!((f.eval(x + 1.0) - f.eval(x) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bisection_inverse() {
        let f = sine(0.1);
        let g = f.inverse().unwrap();
        for k in 0..25 {
            let x = -1.3 + 0.17 * k as f64;
            assert!((g.eval(f.eval(x)) - x).abs() < 1e-13);
        }
    }
}

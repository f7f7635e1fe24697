//! Deterministic SVG figures: the torus foliation, the circle-at-infinity
//! foliation of the unit tangent bundle (plain and condensed) and the
//! commutator staircase.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::Rng;
use serde::Serialize;

use crate::circle_homeo::random::seeded;
use crate::error::{Error, Result};
use crate::rotation::harness::staircase_pair;
use crate::slither::{torus_fiber_map, torus_fiber_map_inverse};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Figure {
    TorusFoliation,
    HelicoidFoliation,
    HelicoidCondensed,
    CommutatorStaircase,
}

impl Figure {
    pub const ALL: [Figure; 4] =
        [Figure::TorusFoliation, Figure::HelicoidFoliation, Figure::HelicoidCondensed, Figure::CommutatorStaircase];

    pub fn name(self) -> &'static str {
        match self {
            Figure::TorusFoliation => "torus-foliation",
            Figure::HelicoidFoliation => "helicoid-foliation",
            Figure::HelicoidCondensed => "helicoid-condensed",
            Figure::CommutatorStaircase => "commutator-staircase",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Figure> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure `{s}`")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SceneConfig {
    pub figure: Figure,
    pub leaf_count: usize,
    pub seed: u64,
    pub size: u32,
}

impl SceneConfig {
    pub fn new(figure: Figure, leaf_count: usize, seed: u64, size: u32) -> Result<Self> {
        if leaf_count == 0 {
            return Err(Error::Config("leaf_count must be at least 1".into()));
        }
        if !(64..=8192).contains(&size) {
            return Err(Error::Config(format!("size {size} outside 64..=8192")));
        }
        Ok(SceneConfig { figure, leaf_count, seed, size })
    }

    pub fn default_for(figure: Figure) -> Self {
        let leaf_count = match figure {
            Figure::HelicoidFoliation | Figure::HelicoidCondensed => 5,
            _ => 12,
        };
        SceneConfig { figure, leaf_count, seed: 1, size: 800 }
    }
}

/// Renders the configured figure.
pub fn render(cfg: &SceneConfig) -> Result<String> {
    match cfg.figure {
        Figure::TorusFoliation => render_torus_foliation(cfg),
        Figure::HelicoidFoliation => render_helicoid_foliation(cfg, false),
        Figure::HelicoidCondensed => render_helicoid_foliation(cfg, true),
        Figure::CommutatorStaircase => render_commutator_staircase(cfg),
    }
}

pub fn write_svg(path: &Path, doc: &str) -> Result<()> {
    std::fs::write(path, doc).map_err(Error::from)
}

fn header(size: u32, height: u32) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{height}\" viewBox=\"0 0 {size} {height}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{height}\" fill=\"#ffffff\"/>\n"
    )
}

fn polyline_d(points: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        let _ = write!(d, "{}{x:.2},{y:.2}", if i == 0 { "M" } else { " L" });
    }
    d
}

/// Hex color of hue `h` (turns) at fixed saturation and lightness.
fn hue_color(h: f64) -> String {
    let (s, l) = (0.65, 0.45);
    let c = (1.0 - (2.0 * l - 1.0f64).abs()) * s;
    let hp = h.rem_euclid(1.0) * 6.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let byte = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", byte(r), byte(g), byte(b))
}

/// In coordinates `Y = (1-x) y + x f⁻¹(y)` on the strip `0 ≤ x ≤ 1`, the
/// gluing `(1, y) ~ (0, f⁻¹(y))` becomes the identity, so a leaf `y = c` of
/// the plane is the chain of segments `(0, Yₖ) → (1, Yₖ₊₁)` with
/// `Yₖ₊₁ = f⁻¹(Yₖ)`. Returns the heights `Y₋ₙ … Yₙ`; for `0 < c < 2π` they
/// stay inside `(0, 2π)` because `0`, `π` and `2π` are fixed by `f`.
pub fn torus_leaf_segments(c: f64, steps: usize) -> Vec<f64> {
    let mut forward = vec![c];
    for _ in 0..steps {
        forward.push(torus_fiber_map_inverse(*forward.last().unwrap()));
    }
    let mut backward = vec![c];
    for _ in 0..steps {
        backward.push(torus_fiber_map(*backward.last().unwrap()));
    }
    backward.reverse();
    backward.pop();
    backward.into_iter().chain(forward).collect()
}

/// Leaves of the torus example on the fundamental square, spiraling into
/// the closed leaves `y = 0` and `y = π`. Emits exactly `leaf_count + 2`
/// path elements.
pub fn render_torus_foliation(cfg: &SceneConfig) -> Result<String> {
    let size = cfg.size as f64;
    let margin = 0.06 * size;
    let side = size - 2.0 * margin;
    let px = |x: f64, y: f64| (margin + x * side, margin + side - y / TAU * side);
    let mut rng = seeded(cfg.seed);
    let mut out = header(cfg.size, cfg.size);
    let _ = writeln!(
        out,
        "<rect x=\"{margin:.2}\" y=\"{margin:.2}\" width=\"{side:.2}\" height=\"{side:.2}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.5\"/>"
    );
    for i in 0..cfg.leaf_count {
        let c = loop {
            let c: f64 = rng.gen_range(0.0..TAU);
            if (c - PI).abs() > 1e-3 && c > 1e-3 && c < TAU - 1e-3 {
                break c;
            }
        };
        let ys = torus_leaf_segments(c, 24);
        let mut d = String::new();
        for w in ys.windows(2) {
            let (a, b) = (px(0.0, w[0]), px(1.0, w[1]));
            let _ = write!(d, "M{:.2},{:.2} L{:.2},{:.2} ", a.0, a.1, b.0, b.1);
        }
        let _ = writeln!(
            out,
            "<path class=\"leaf\" d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1\"/>",
            d.trim_end(),
            hue_color(i as f64 / cfg.leaf_count as f64)
        );
    }
    for (y, dash) in [(0.0, "none"), (PI, "8,4")] {
        let (a, b) = (px(0.0, y), px(1.0, y));
        let _ = writeln!(
            out,
            "<path class=\"closed-leaf\" d=\"M{:.2},{:.2} L{:.2},{:.2}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"3\" stroke-dasharray=\"{dash}\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// One slat of a circle-at-infinity leaf: the chord of the projective disk
/// from the boundary point at `base` (turns) to the leaf's convergence
/// point, at the constant height given by the chord's Euclidean direction.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Ruling {
    pub base: f64,
    pub from: (f64, f64),
    pub to: (f64, f64),
    /// Lifted direction angle in radians.
    pub height: f64,
}

/// Rulings of the leaf whose forward endpoint is the lifted boundary value
/// `t`, at `count` evenly spaced base angles. Heights lie in
/// `(2πt - π/2, 2πt + π/2)`.
pub fn helicoid_rulings(t: f64, count: usize) -> Vec<Ruling> {
    let zeta = Complex64::from_polar(1.0, TAU * t);
    (0..count)
        .map(|j| {
            let s = (j as f64 + 0.5) / count as f64;
            let base = t + s;
            let p = Complex64::from_polar(1.0, TAU * base);
            // direction of ζ - p, lifted next to 2πt
            let dir = (zeta - p).arg();
            let height = TAU * t + (dir - TAU * t + PI).rem_euclid(TAU) - PI;
            Ruling { base: base.rem_euclid(1.0), from: (p.re, p.im), to: (zeta.re, zeta.im), height }
        })
        .collect()
}

struct Camera {
    center: (f64, f64),
    radius: f64,
    vscale: f64,
    cos_e: f64,
    sin_e: f64,
    azimuth: Complex64,
}

impl Camera {
    /// Screen position and depth (larger is nearer) of `(k, h)`.
    fn project(&self, k: (f64, f64), h: f64) -> (f64, f64, f64) {
        let w = Complex64::new(k.0, k.1) * self.azimuth;
        let sx = self.center.0 + self.radius * w.re;
        let sy = self.center.1 - self.vscale * h * self.cos_e + self.radius * w.im * self.sin_e;
        (sx, sy, w.im * self.cos_e + h * self.sin_e / TAU)
    }
}

/// Randomly selected leaves of the circle-at-infinity foliation, drawn as
/// slats in an orthographic view of the solid cylinder (projective disk ×
/// direction angle). In condensed mode every leaf is scaled by 1/4 toward
/// `(ζ, arg ζ)`, its convergence point.
pub fn render_helicoid_foliation(cfg: &SceneConfig, condensed: bool) -> Result<String> {
    const SLATS: usize = 28;
    const WIDTH: f64 = 0.45;
    let size = cfg.size as f64;
    let height_turns = 2.0;
    let cam = Camera {
        center: (size / 2.0, size * 0.85),
        radius: size * 0.3,
        vscale: size * 0.6 / (TAU * height_turns),
        cos_e: 0.94,
        sin_e: 0.34,
        azimuth: Complex64::from_polar(1.0, -0.3),
    };
    let mut rng = seeded(cfg.seed);
    let mut polys: Vec<(f64, String)> = Vec::new();
    for i in 0..cfg.leaf_count {
        let t = rng.gen_range(0.25..height_turns - 0.25);
        let zeta = Complex64::from_polar(1.0, TAU * t);
        let squeeze = |k: (f64, f64), h: f64| {
            if condensed {
                let c = Complex64::new(k.0, k.1);
                let z = zeta + (c - zeta) * 0.25;
                ((z.re, z.im), TAU * t + (h - TAU * t) * 0.25)
            } else {
                (k, h)
            }
        };
        let color = hue_color(t);
        let rulings = helicoid_rulings(t, SLATS);
        for (j, r) in rulings.iter().enumerate() {
            // a slat: a flat wedge from the ruling's base to ζ, at its height
            let q = Complex64::from_polar(1.0, TAU * (r.base + WIDTH / SLATS as f64));
            let corners = [squeeze(r.from, r.height), squeeze((q.re, q.im), r.height), squeeze(r.to, r.height)];
            let pts: Vec<(f64, f64, f64)> = corners.iter().map(|(k, h)| cam.project(*k, *h)).collect();
            let depth = pts.iter().map(|p| p.2).sum::<f64>() / 3.0;
            let mut d = String::new();
            for (j, (x, y, _)) in pts.iter().enumerate() {
                let _ = write!(d, "{}{x:.2},{y:.2}", if j == 0 { "" } else { " " });
            }
            polys.push((
                depth,
                format!(
                    "<polygon class=\"slat\" data-leaf=\"{i}\" data-slat=\"{j}\" points=\"{d}\" fill=\"{color}\" fill-opacity=\"0.8\" stroke=\"#202020\" stroke-width=\"0.4\"/>"
                ),
            ));
        }
    }
    polys.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = header(cfg.size, cfg.size);
    // cylinder outline: bottom and top ellipses plus the two silhouettes
    for h in [0.0, TAU * height_turns] {
        let ring: Vec<(f64, f64)> = (0..=96)
            .map(|j| {
                let a = TAU * j as f64 / 96.0;
                let (x, y, _) = cam.project((a.cos(), a.sin()), h);
                (x, y)
            })
            .collect();
        let _ = writeln!(out, "<path class=\"frame\" d=\"{}\" fill=\"none\" stroke=\"#808080\"/>", polyline_d(&ring));
    }
    for side in [-1.0, 1.0] {
        let a = cam.project((side * cam.azimuth.re, -side * cam.azimuth.im), 0.0);
        let b = cam.project((side * cam.azimuth.re, -side * cam.azimuth.im), TAU * height_turns);
        let _ = writeln!(
            out,
            "<path class=\"frame\" d=\"M{:.2},{:.2} L{:.2},{:.2}\" fill=\"none\" stroke=\"#808080\"/>",
            a.0, a.1, b.0, b.1
        );
    }
    for (_, p) in &polys {
        out.push_str(p);
        out.push('\n');
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Graphs of the staircase pair `a`, `b` and of `[a, b] = a b a⁻¹ b⁻¹` over
/// one period, between the bounds `x ± 2`, with the cobweb of the
/// evaluation at the point moved furthest.
pub fn render_commutator_staircase(cfg: &SceneConfig) -> Result<String> {
    let e = BigRational::new(1.into(), 100.into());
    let (a, b) = staircase_pair(&e);
    let (ai, bi) = (a.inverse(), b.inverse());
    let comm = |x: f64| a.eval(b.eval(ai.eval(bi.eval(x))));
    let size = cfg.size as f64;
    let margin = 0.08 * size;
    let (x0, x1, y0, y1) = (-0.25, 1.25, -2.25, 3.25);
    let px = |x: f64, y: f64| {
        (margin + (x - x0) / (x1 - x0) * (size - 2.0 * margin), size - margin - (y - y0) / (y1 - y0) * (size - 2.0 * margin))
    };
    let samples = |f: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        (0..=1200)
            .map(|i| {
                let x = x0 + (x1 - x0) * i as f64 / 1200.0;
                px(x, f(x))
            })
            .collect()
    };
    let mut out = header(cfg.size, cfg.size);
    let curves: [(&str, Vec<(f64, f64)>, &str, &str); 6] = [
        ("bound", samples(&|x| x + 2.0), "#b0b0b0", "6,4"),
        ("bound", samples(&|x| x - 2.0), "#b0b0b0", "6,4"),
        ("diagonal", samples(&|x| x), "#b0b0b0", "none"),
        ("map-a", samples(&|x| a.eval(x)), "#1f5fbf", "none"),
        ("map-b", samples(&|x| b.eval(x)), "#2f9f3f", "none"),
        ("commutator", samples(&comm), "#c0392b", "none"),
    ];
    for (class, pts, color, dash) in curves {
        let _ = writeln!(
            out,
            "<path class=\"{class}\" d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" stroke-dasharray=\"{dash}\"/>",
            polyline_d(&pts)
        );
    }
    // cobweb of x → b⁻¹x → a⁻¹b⁻¹x → … at x = 1 - 3e
    let x = 0.97;
    let chain = [x, bi.eval(x), ai.eval(bi.eval(x)), b.eval(ai.eval(bi.eval(x))), comm(x)];
    let mut stair = vec![px(x, x)];
    for w in chain.windows(2) {
        stair.push(px(w[0], w[1]));
        stair.push(px(w[1], w[1]));
    }
    let _ = writeln!(
        out,
        "<path class=\"staircase\" d=\"{}\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>",
        polyline_d(&stair)
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;

    #[test]
    fn torus_path_count() {
        let cfg = SceneConfig::new(Figure::TorusFoliation, 7, 3, 400).unwrap();
        let svg = render(&cfg).unwrap();
        assert_eq!(svg.matches("<path").count(), 9);
        assert_eq!(svg, render(&cfg).unwrap());
        assert!(SceneConfig::new(Figure::TorusFoliation, 0, 3, 400).is_err());
    }

    #[test]
    fn leaves_approach_the_closed_leaves() {
        let segs = torus_leaf_segments(1.0, 40);
        let (first, last) = (segs[0], *segs.last().unwrap());
        assert!((first - PI).abs() < 1e-6, "{first}");
        assert!(last.abs() < 1e-6, "{last}");
    }

    #[test]
    fn ruling_heights_stay_near_the_leaf() {
        for t in [0.0, 0.3, 1.7] {
            for r in helicoid_rulings(t, 16) {
                assert!((r.height - TAU * t).abs() < FRAC_PI_2);
            }
        }
    }
}

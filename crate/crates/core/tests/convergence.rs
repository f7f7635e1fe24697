//! Convergence-probe checks against independent oracles.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use slitherkit::circle_homeo::rep::GroupRepresentation;
use slitherkit::hyperbolic::{genus2_fuchsian, lift_action, octagon_inradius, Moebius, MoebiusLift};
use slitherkit::triples::{
    act_on_triple, proper_discontinuity_probe, spacelike_type, z_third, SpacelikeType, Triple, TripleBox,
};
use slitherkit::LiftedCircleMap;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn on_circle(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * theta)
}

/// Disk point where the perpendicular from `p` meets the geodesic `u s`:
/// the preimage of 0 under the Möbius map sending `(u, s, p)` to `(-1, 1, i)`.
fn base_point(t: &Triple) -> Complex64 {
    let (z1, z2, z3) = (on_circle(t.u), on_circle(t.s), on_circle(t.p));
    let (t1, t2, t3) = (c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let cross = |z: Complex64, a: Complex64, b: Complex64, d: Complex64| ((z - a) * (b - d)) / ((z - d) * (b - a));
    let w = cross(c(0.0, 0.0), t1, t2, t3);
    (z1 * (z2 - z3) - w * z3 * (z2 - z1)) / ((z2 - z3) - w * (z2 - z1))
}

fn disk_distance(w: Complex64) -> f64 {
    2.0 * w.norm().atanh()
}

fn arc_meets(a0: f64, alen: f64, b0: f64, blen: f64) -> bool {
    (b0 - a0).rem_euclid(1.0) <= alen || (a0 - b0).rem_euclid(1.0) <= blen
}

/// Elements moving the box onto itself, found by breadth-first search over
/// all elements of bounded displacement rather than by word length.
fn oracle_overlaps(gens: &[Moebius], bx: &TripleBox) -> usize {
    let r = bx.radius;
    let k = 6;
    let mut rho: f64 = 0.0;
    for i in 0..=k {
        for j in 0..=k {
            for l in 0..=k {
                let step = |n: usize| -r + 2.0 * r * n as f64 / k as f64;
                let t = Triple { u: bx.center.u + step(i), s: bx.center.s + step(j), p: bx.center.p + step(l) };
                rho = rho.max(disk_distance(base_point(&t)));
            }
        }
    }
    let circumradius = ((1.0 + 2f64.sqrt()).powi(2)).acosh();
    assert!(octagon_inradius() < circumradius);
    let radius = 2.0 * (rho + 0.25) + circumradius;

    let letters: Vec<Moebius> = gens.iter().flat_map(|g| [*g, g.inverse()]).collect();
    // the group is torsion free, so g ↦ g(0) is injective; hash on it
    let cell = |w: Complex64| ((w.re / 1e-8).round() as i64, (w.im / 1e-8).round() as i64);
    let mut index: HashMap<(i64, i64), Vec<Complex64>> = HashMap::new();
    let mut seen: Vec<Moebius> = vec![Moebius::identity()];
    index.entry(cell(c(0.0, 0.0))).or_default().push(c(0.0, 0.0));
    let mut queue = VecDeque::from([Moebius::identity()]);
    while let Some(h) = queue.pop_front() {
        for s in &letters {
            let g = h.compose(s);
            let w = g.apply_disk(c(0.0, 0.0));
            if disk_distance(w) > radius {
                continue;
            }
            let (i, j) = cell(w);
            let known = (-1..=1).any(|di| {
                (-1..=1).any(|dj| {
                    index.get(&(i + di, j + dj)).is_some_and(|v| v.iter().any(|z| (z - w).norm() < 1e-9))
                })
            });
            if !known {
                index.entry((i, j)).or_default().push(w);
                seen.push(g);
                queue.push_back(g);
            }
        }
    }
    let image_arc = |g: &Moebius, x: f64| {
        let a = g.apply_disk(on_circle(x - r)).arg() / (2.0 * PI);
        let b = g.apply_disk(on_circle(x + r)).arg() / (2.0 * PI);
        (a, (b - a).rem_euclid(1.0))
    };
    seen.iter()
        .filter(|g| {
            bx.center.coords().iter().all(|&x| {
                let (a0, alen) = image_arc(g, x);
                arc_meets(a0, alen, x - r, 2.0 * r)
            })
        })
        .count()
}

#[test]
fn genus_two_probe_stabilizes_and_matches_oracle() {
    let group = genus2_fuchsian();
    let rep = group.to_representation().unwrap();
    let bx = TripleBox::default_box();
    let report = proper_discontinuity_probe(&rep, &bx, 8);
    assert!(report.stabilized, "{:?}", report.cumulative);
    let oracle = oracle_overlaps(&group.generators, &bx);
    assert_eq!(*report.cumulative.last().unwrap(), oracle, "{:?}", report.cumulative);
}

#[test]
fn genus_two_overlaps_are_trivial_even_for_wide_boxes() {
    // the systole exceeds what any triple box can absorb at this width
    let group = genus2_fuchsian();
    let rep = group.to_representation().unwrap();
    let bx = TripleBox::new(Triple { u: 0.0, s: 1.0 / 3.0, p: 2.0 / 3.0 }, 0.16).unwrap();
    let report = proper_discontinuity_probe(&rep, &bx, 6);
    assert_eq!(oracle_overlaps(&group.generators, &bx), 1);
    assert_eq!(*report.cumulative.last().unwrap(), 1);
}

#[test]
fn short_translation_overlaps_match_powers() {
    let g = Moebius::translation(0.3);
    let rep = GroupRepresentation::new(
        [("g".to_string(), lift_action(&MoebiusLift { base: g, winding: 0 }))].into_iter().collect(),
        vec![],
    )
    .unwrap();
    let bx = TripleBox::default_box();
    let report = proper_discontinuity_probe(&rep, &bx, 40);
    // oracle: arcs pushed through the disk formula for each power
    let r = bx.radius;
    let mut expected = 0;
    let mut power = Moebius::identity();
    let mut inverse = Moebius::identity();
    for k in 0..=200 {
        for h in if k == 0 { vec![power] } else { vec![power, inverse] } {
            let hit = bx.center.coords().iter().all(|&x| {
                let a = h.apply_disk(on_circle(x - r)).arg() / (2.0 * PI);
                let b = h.apply_disk(on_circle(x + r)).arg() / (2.0 * PI);
                arc_meets(a, (b - a).rem_euclid(1.0), x - r, 2.0 * r)
            });
            expected += hit as usize;
        }
        power = power.compose(&g);
        inverse = inverse.compose(&g.inverse());
    }
    assert!(expected > 3, "{expected}");
    assert!(report.stabilized);
    assert_eq!(*report.cumulative.last().unwrap(), expected, "{:?}", report.cumulative);
}

#[test]
fn irrational_rotation_probe_keeps_growing() {
    let theta = (5f64.sqrt() - 1.0) / 200.0;
    let rep = GroupRepresentation::new(
        [("a".to_string(), LiftedCircleMap::rotation(theta))].into_iter().collect(),
        vec![],
    )
    .unwrap();
    let bx = TripleBox::default_box();
    let report = proper_discontinuity_probe(&rep, &bx, 12);
    // oracle: a^k overlaps iff kθ is within the box width of an integer
    let mut expected = 1;
    for (len, count) in report.cumulative.iter().enumerate().skip(1) {
        let d = (len as f64 * theta).rem_euclid(1.0);
        if d.min(1.0 - d) <= 2.0 * bx.radius {
            expected += 2;
        }
        assert_eq!(*count, expected, "length {len}");
        assert!(report.cumulative[len] > report.cumulative[len - 1]);
    }
    assert!(!report.stabilized);
}

#[test]
fn genus_two_words_are_never_parabolic() {
    let rep = genus2_fuchsian().to_representation().unwrap();
    let bad = rep.map_reduced_words(6, |w, f| {
        matches!(spacelike_type(f), SpacelikeType::ParabolicType { .. } | SpacelikeType::Degenerate { .. })
            .then(|| w.to_string())
    });
    assert!(bad.is_empty(), "{bad:?}");
}

fn triple() -> impl Strategy<Value = Triple> {
    (-3.0..3.0f64, 0.01..0.98f64, 0.0..1.0f64).prop_map(|(u, g1, f)| {
        let s = u + g1;
        let p = s + (1.0 - g1) * (0.01 + 0.98 * f);
        Triple { u, s, p }
    })
}

proptest! {
    #[test]
    fn z_third_cubed_is_the_deck_shift(t in triple()) {
        prop_assume!(t.is_ordered());
        let z = z_third(&z_third(&z_third(&t)));
        prop_assert_eq!(z, Triple { u: t.u + 1.0, s: t.s + 1.0, p: t.p + 1.0 });
        prop_assert!(z_third(&t).is_ordered());
    }

    #[test]
    fn action_is_functorial(t in triple(), a in 0.0..1.0f64, b in 0.1..3.0f64) {
        let f = lift_action(&MoebiusLift { base: Moebius::rotation(a).compose(&Moebius::translation(b)), winding: 0 });
        let g = LiftedCircleMap::pl(vec![(0.0, 0.1), (0.3, 0.2), (0.6, 0.9)]).unwrap();
        let lhs = act_on_triple(&f.compose(&g), &t);
        let rhs = act_on_triple(&f, &act_on_triple(&g, &t));
        for (x, y) in lhs.coords().iter().zip(rhs.coords()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn z_third_commutes_with_rotations(t in triple(), a in -2.0..2.0f64) {
        let r = LiftedCircleMap::rotation(a);
        let lhs = z_third(&act_on_triple(&r, &t));
        let rhs = act_on_triple(&r, &z_third(&t));
        for (x, y) in lhs.coords().iter().zip(rhs.coords()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

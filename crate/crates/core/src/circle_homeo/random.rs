//! Seeded random piecewise-linear maps for the verification harnesses.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::LiftedCircleMap;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A PL map with `k ∈ [2, 12]` breakpoints: sorted uniform `x` and `y`
/// samples in `[0, 1)`, with all `y` shifted by one offset uniform in `[-1, 1)`.
pub fn random_pl<R: Rng>(rng: &mut R) -> LiftedCircleMap {
    loop {
        let k = rng.gen_range(2..=12);
        let mut xs: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        let mut ys: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let offset = rng.gen_range(-1.0..1.0);
        let breaks: Vec<(f64, f64)> = xs.into_iter().zip(ys.into_iter().map(|y| y + offset)).collect();
        if let Ok(f) = LiftedCircleMap::pl(breaks) {
            return f;
        }
    }
}

/// `count` independent pairs drawn from one seeded stream.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(LiftedCircleMap, LiftedCircleMap)> {
    let mut rng = seeded(seed);
    (0..count).map(|_| (random_pl(&mut rng), random_pl(&mut rng))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_maps() {
        let a = random_pairs(7, 5);
        let b = random_pairs(7, 5);
        for ((f, _), (g, _)) in a.iter().zip(&b) {
            assert_eq!(f.as_pl().unwrap().float().breaks(), g.as_pl().unwrap().float().breaks());
        }
    }

    #[test]
    fn maps_are_valid() {
        let mut rng = seeded(1);
        for _ in 0..200 {
            let f = random_pl(&mut rng);
            let n = f.as_pl().unwrap().float().len();
            assert!((1..=12).contains(&n));
            for i in 0..50 {
                let x = i as f64 / 50.0 - 0.3;
                assert!(f.eval(x + 0.02) > f.eval(x));
            }
        }
    }
}

//! Seeded random corpora: tent functions mixing localized point masses
//! with spread-out tent indicators, and random open point sets.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::LogNormal;

use crate::functionals::TentFunction;
use crate::geometry::{tent_of_ball, RegionGrid};
use crate::space::{Ball, DiscreteSpace};

fn signed_amplitude(rng: &mut ChaCha8Rng) -> f64 {
    let magnitude: f64 = LogNormal::new(0.0, 1.0).unwrap().sample(rng);
    if rng.random_bool(0.5) {
        magnitude
    } else {
        -magnitude
    }
}

/// One random tent function: one to four node point masses plus up to two
/// admissible-ball tent indicators, each with a signed log-normal
/// amplitude.
pub fn random_function(
    space: &DiscreteSpace,
    region: &RegionGrid,
    rng: &mut ChaCha8Rng,
) -> TentFunction {
    let mut pairs: Vec<(usize, f64)> = Vec::new();
    for _ in 0..rng.random_range(1..=4) {
        pairs.push((rng.random_range(0..region.len()), signed_amplitude(rng)));
    }
    for _ in 0..rng.random_range(0..=2) {
        let amplitude = signed_amplitude(rng);
        for _ in 0..3 {
            let c = rng.random_range(0..space.len());
            let r = space.m(c) * rng.random_range(0.3..=1.0);
            let nodes = tent_of_ball(space, region, &Ball::new(c, r));
            if nodes.count() > 0 {
                pairs.extend(nodes.iter().map(|id| (id, amplitude)));
                break;
            }
        }
    }
    TentFunction::from_pairs(pairs)
}

/// A deterministic corpus of `count` random tent functions.
pub fn function_corpus(
    space: &DiscreteSpace,
    region: &RegionGrid,
    seed: u64,
    count: usize,
) -> Vec<TentFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_function(space, region, &mut rng))
        .collect()
}

fn is_proper(mask: &[bool]) -> bool {
    let inside = mask.iter().filter(|&&b| b).count();
    inside > 0 && inside < mask.len()
}

/// A nonempty proper subset formed as a union of one to three balls.
pub fn random_ball_union_set(space: &DiscreteSpace, rng: &mut ChaCha8Rng) -> Vec<bool> {
    loop {
        let mut mask = vec![false; space.len()];
        for _ in 0..rng.random_range(1..=3) {
            let c = rng.random_range(0..space.len());
            let r = space.m(c) * rng.random_range(0.3..=1.5);
            for &z in space.ball_member_slice(c, r) {
                mask[z as usize] = true;
            }
        }
        if is_proper(&mask) {
            return mask;
        }
    }
}

/// A nonempty proper subset with independent point membership.
pub fn random_bernoulli_set(space: &DiscreteSpace, rng: &mut ChaCha8Rng) -> Vec<bool> {
    loop {
        let p = rng.random_range(0.2..0.8);
        let mask: Vec<bool> = (0..space.len()).map(|_| rng.random_bool(p)).collect();
        if is_proper(&mask) {
            return mask;
        }
    }
}

/// A deterministic corpus of open sets, alternating the two shapes.
pub fn open_set_corpus(space: &DiscreteSpace, seed: u64, count: usize) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                random_ball_union_set(space, &mut rng)
            } else {
                random_bernoulli_set(space, &mut rng)
            }
        })
        .collect()
}

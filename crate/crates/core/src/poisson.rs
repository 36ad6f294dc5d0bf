//! Poisson point samplers and the thinning step used by the dynamics.
//!
//! Draw order is fixed and documented so that chains are reproducible from
//! a seed: first the Poisson count, then per point `x` before `y`, then
//! (at `T > 0`) one survival coin per candidate in order. At `T = 0`
//! thinning consumes no randomness at all.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::grid::SpatialGrid;
use crate::model::{exclusion_from_count, ColoredConfiguration, ModelParams, Position};
use crate::rng::RngStream;

/// Homogeneous Poisson sample of intensity `z` on the box: count first,
/// then i.i.d. uniform positions.
pub fn sample_poisson(z: f64, box_side: f64, rng: &mut RngStream) -> Vec<Position> {
    let mean = z * box_side * box_side;
    let count = if mean > 0.0 {
        Poisson::new(mean).expect("positive mean").sample(rng) as usize
    } else {
        0
    };
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = rng.random_range(0.0..box_side);
        let y = rng.random_range(0.0..box_side);
        points.push(Position { x, y });
    }
    points
}

/// Keep each candidate independently with probability `exp(-n/T)`, where
/// `n` counts in-range particles registered in `others`. At `T = 0` a
/// candidate survives exactly when it has no in-range neighbor.
pub fn thin(
    points: Vec<Position>,
    others: &SpatialGrid,
    temperature: f64,
    rng: &mut RngStream,
) -> Vec<Position> {
    let mut kept = Vec::with_capacity(points.len());
    if temperature == 0.0 {
        for p in points {
            if !others.any_within_one_except(p, 0) {
                kept.push(p);
            }
        }
    } else {
        for p in points {
            let n = others.count_within_one_except(p, 0);
            let u: f64 = rng.random();
            if u < exclusion_from_count(n, temperature) {
                kept.push(p);
            }
        }
    }
    kept
}

/// Variant of [`thin`] against a grid that still contains particles of the
/// type being resampled; those are skipped when counting neighbors.
pub(crate) fn thin_excluding(
    points: Vec<Position>,
    others: &SpatialGrid,
    excluded: u16,
    temperature: f64,
    rng: &mut RngStream,
) -> Vec<Position> {
    let mut kept = Vec::with_capacity(points.len());
    if temperature == 0.0 {
        for p in points {
            if !others.any_within_one_except(p, excluded) {
                kept.push(p);
            }
        }
    } else {
        for p in points {
            let n = others.count_within_one_except(p, excluded);
            let u: f64 = rng.random();
            if u < exclusion_from_count(n, temperature) {
                kept.push(p);
            }
        }
    }
    kept
}

/// Replace the type-`a` particles of a configuration with a fresh sample
/// from the conditional law given the other types: a Poisson proposal
/// thinned against everything of type other than `a`. Particles of other
/// types are preserved verbatim; the new type-`a` particles are appended
/// after them in draw order.
pub fn resample_type(
    config: &ColoredConfiguration,
    a: u16,
    params: &ModelParams,
    rng: &mut RngStream,
) -> ColoredConfiguration {
    let mut others = ColoredConfiguration::with_capacity(config.len());
    for (&pos, &label) in config.positions().iter().zip(config.labels()) {
        if label != a {
            others.push(pos, label);
        }
    }
    let grid = SpatialGrid::build(&others, params);
    let proposal = sample_poisson(params.z, params.box_side, rng);
    let kept = thin_excluding(proposal, &grid, a, params.temperature, rng);
    let mut out = others;
    for p in kept {
        out.push(p, a);
    }
    out
}

//! Independent grand-canonical Metropolis sampler.
//!
//! This module shares nothing with the cluster dynamics beyond the model
//! definition itself: energies are brute-force pair counts, moves are
//! single-particle births, deaths, and type flips, each proposed with
//! probability 1/3. It exists to cross-check the cluster algorithms
//! against a sampler whose correctness rests on nothing but the
//! Metropolis rule.

use crate::model::{periodic_dist2, ColoredConfiguration, ModelParams, Position, INTERACTION_RADIUS};
use crate::rng::RngStream;
use rand::Rng;

/// Total energy: the number of interacting unlike-type pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct EnergyValue(pub u64);

/// Brute-force energy of a configuration.
pub fn energy(config: &ColoredConfiguration, box_side: f64) -> EnergyValue {
    let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
    let mut h = 0u64;
    for i in 0..config.len() {
        for j in (i + 1)..config.len() {
            if config.label(i) != config.label(j)
                && periodic_dist2(config.position(i), config.position(j), box_side) <= r2
            {
                h += 1;
            }
        }
    }
    EnergyValue(h)
}

/// Number of particles of a type other than `label` within the
/// interaction radius of `x`, skipping index `skip` (the particle itself,
/// for death and flip moves).
fn unlike_in_range(
    config: &ColoredConfiguration,
    x: Position,
    label: u16,
    skip: Option<usize>,
    box_side: f64,
) -> u64 {
    let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
    let mut count = 0;
    for i in 0..config.len() {
        if Some(i) == skip || config.label(i) == label {
            continue;
        }
        if periodic_dist2(config.position(i), x, box_side) <= r2 {
            count += 1;
        }
    }
    count
}

/// Boltzmann factor `exp(-dh / T)`, with the hard-core limit
/// `1{dh <= 0}` at `T = 0`.
fn boltzmann(delta_h: i64, params: &ModelParams) -> f64 {
    if params.is_hard_core() {
        if delta_h <= 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (-(delta_h as f64) / params.temperature).exp()
    }
}

/// Acceptance probability of inserting a particle into a configuration of
/// `n` particles, raising the energy by `delta_h`.
fn acceptance_birth(n: usize, delta_h: u64, params: &ModelParams) -> f64 {
    let ratio = params.q as f64 * params.z * params.area() / (n as f64 + 1.0);
    (ratio * boltzmann(delta_h as i64, params)).min(1.0)
}

/// Acceptance probability of removing a particle from a configuration of
/// `n` particles, where the removed particle had `removed_unlike`
/// interacting unlike neighbors.
fn acceptance_death(n: usize, removed_unlike: u64, params: &ModelParams) -> f64 {
    let ratio = n as f64 / (params.q as f64 * params.z * params.area());
    (ratio * boltzmann(-(removed_unlike as i64), params)).min(1.0)
}

/// Acceptance probability of changing one particle's type at energy cost
/// `delta_h`.
fn acceptance_flip(delta_h: i64, params: &ModelParams) -> f64 {
    boltzmann(delta_h, params).min(1.0)
}

/// One Metropolis move: birth, death, or type flip, each with probability
/// 1/3. Death and flip on an empty configuration do nothing. Returns
/// whether the move was accepted.
pub fn metropolis_step(
    config: &mut ColoredConfiguration,
    params: &ModelParams,
    rng: &mut RngStream,
) -> bool {
    let l = params.box_side;
    match rng.random_range(0..3u32) {
        0 => {
            let x = Position {
                x: rng.random_range(0.0..l),
                y: rng.random_range(0.0..l),
            };
            let label = rng.random_range(1..=params.q);
            let dh = unlike_in_range(config, x, label, None, l);
            let a = acceptance_birth(config.len(), dh, params);
            if rng.random::<f64>() < a {
                config.push(x, label);
                true
            } else {
                false
            }
        }
        1 => {
            if config.is_empty() {
                return false;
            }
            let i = rng.random_range(0..config.len());
            let k = unlike_in_range(config, config.position(i), config.label(i), Some(i), l);
            let a = acceptance_death(config.len(), k, params);
            if rng.random::<f64>() < a {
                config.swap_remove(i);
                true
            } else {
                false
            }
        }
        _ => {
            if config.is_empty() {
                return false;
            }
            let i = rng.random_range(0..config.len());
            let new_label = rng.random_range(1..=params.q);
            let old_label = config.label(i);
            let x = config.position(i);
            let dh = unlike_in_range(config, x, new_label, Some(i), l) as i64
                - unlike_in_range(config, x, old_label, Some(i), l) as i64;
            let a = acceptance_flip(dh, params);
            if rng.random::<f64>() < a {
                config.set_label(i, new_label);
                true
            } else {
                false
            }
        }
    }
}

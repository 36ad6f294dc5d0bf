//! Per-sweep observables and blocking error analysis.
//!
//! A sweep is summarized by the particle density `rho = N/L^2`, the largest
//! cluster fraction `gamma`, and the percolation radius `d_perc`, which
//! measures how far the clusters touching a small central region extend
//! toward the boundary. Series of these are reduced with the usual
//! fixed-block (10 blocks) error estimate, and the density series
//! additionally yields the activity-response slope estimator
//! `rho' = (L^2/z) Var(rho)`, whose own error comes from the spread of the
//! per-block sample variances.

use crate::cluster::ClusterPartition;
use crate::error::{Error, Result};
use crate::model::Position;

/// Number of blocks used for every error estimate.
pub const BLOCKS: usize = 10;

/// Half-width of the central square defining the seed region for
/// `d_perc`, and the probe radius around it.
const SEED_HALF_WIDTH: f64 = 1.5;
const SEED_PROBE: f64 = 0.5;

/// Particle density `N / L^2`.
pub fn density(n_particles: usize, box_side: f64) -> f64 {
    n_particles as f64 / (box_side * box_side)
}

/// Size of the largest cluster divided by the particle count; 0 for the
/// empty configuration.
pub fn largest_cluster_fraction(partition: &ClusterPartition) -> f64 {
    if partition.n() == 0 {
        0.0
    } else {
        partition.largest_cluster_size() as f64 / partition.n() as f64
    }
}

/// Does `x` lie within the seed region: within 1/2 of the central
/// `3 x 3` square (an inflated square with rounded corners)?
fn in_seed_region(x: Position, box_side: f64) -> bool {
    let half = box_side / 2.0;
    let dx = ((x.x - half).abs() - SEED_HALF_WIDTH).max(0.0);
    let dy = ((x.y - half).abs() - SEED_HALF_WIDTH).max(0.0);
    dx * dx + dy * dy <= SEED_PROBE * SEED_PROBE
}

/// How far the clusters seeded at the box center reach toward the
/// boundary, minus the interaction radius; 0 when nothing extends beyond
/// the center, `None` when the box is too small to hold the seed region
/// (`L < 8`).
pub fn percolation_radius(
    partition: &ClusterPartition,
    positions: &[Position],
    box_side: f64,
) -> Option<f64> {
    if box_side < 8.0 {
        return None;
    }
    let half = box_side / 2.0;
    let mut touched: Vec<u32> = positions
        .iter()
        .enumerate()
        .filter(|&(_, &p)| in_seed_region(p, box_side))
        .map(|(i, _)| partition.root_of(i))
        .collect();
    touched.sort_unstable();
    touched.dedup();
    if touched.is_empty() {
        return Some(0.0);
    }
    let mut lo_x = f64::INFINITY;
    let mut hi_x = f64::NEG_INFINITY;
    let mut lo_y = f64::INFINITY;
    let mut hi_y = f64::NEG_INFINITY;
    for &r in &touched {
        let c = partition.corners_of_root(r);
        lo_x = lo_x.min(c.min_x);
        hi_x = hi_x.max(c.max_x);
        lo_y = lo_y.min(c.min_y);
        hi_y = hi_y.max(c.max_y);
    }
    let d = (half - lo_x - 1.0)
        .max(hi_x - half - 1.0)
        .max(half - lo_y - 1.0)
        .max(hi_y - half - 1.0)
        .max(0.0);
    Some(d)
}

/// Cluster sizes as fractions of `N`, binned into 100 equal bins over
/// `[0, 1]` and weighted by the fraction itself, so the bins sum to 1.
/// The last bin is closed at 1. `None` for the empty configuration.
pub fn cluster_size_histogram(partition: &ClusterPartition) -> Option<[f64; 100]> {
    if partition.n() == 0 {
        return None;
    }
    let n = partition.n() as f64;
    let mut bins = [0.0; 100];
    for r in partition.roots() {
        let ratio = partition.size_of_root(r) as f64 / n;
        let idx = ((ratio * 100.0).floor() as usize).min(99);
        bins[idx] += ratio;
    }
    Some(bins)
}

/// Fraction of particles sitting in clusters of each small size
/// `1..=100`: entry `s` is `s * #{clusters of size s} / N`. `None` for the
/// empty configuration.
pub fn small_cluster_distribution(partition: &ClusterPartition) -> Option<[f64; 100]> {
    if partition.n() == 0 {
        return None;
    }
    let n = partition.n() as f64;
    let mut out = [0.0; 100];
    for r in partition.roots() {
        let s = partition.size_of_root(r) as usize;
        if s <= 100 {
            out[s - 1] += s as f64 / n;
        }
    }
    Some(out)
}

/// Mean and blocking standard error of a series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockingStats {
    pub mean: f64,
    pub stderr: f64,
    /// Set when the series length was not a multiple of the block count
    /// and the tail was dropped.
    pub truncated: bool,
}

/// Split the series into `blocks` contiguous blocks (dropping a ragged
/// tail) and estimate the error of the mean from the spread of the block
/// means.
pub fn blocking_stats(series: &[f64], blocks: usize) -> Result<BlockingStats> {
    if blocks < 2 {
        return Err(Error::InvalidParam("need at least 2 blocks".into()));
    }
    if series.len() < blocks {
        return Err(Error::SeriesTooShort {
            need: blocks,
            got: series.len(),
        });
    }
    let per = series.len() / blocks;
    let used = per * blocks;
    let block_means: Vec<f64> = series[..used]
        .chunks_exact(per)
        .map(|b| b.iter().sum::<f64>() / per as f64)
        .collect();
    let mean = block_means.iter().sum::<f64>() / blocks as f64;
    let var = block_means
        .iter()
        .map(|&m| (m - mean) * (m - mean))
        .sum::<f64>()
        / (blocks - 1) as f64;
    Ok(BlockingStats {
        mean,
        stderr: (var / blocks as f64).sqrt(),
        truncated: used != series.len(),
    })
}

/// The slope estimator `rho' = (L^2 / z) * Var(rho)` with its blocking
/// error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    pub value: f64,
    /// Standard error from the ten per-block sample variances; absent when
    /// the series is too short to give each block two samples.
    pub stderr: Option<f64>,
}

fn sample_variance(series: &[f64]) -> f64 {
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    series.iter().map(|&x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
}

/// Estimate `rho'` from a density series. The value uses the unbiased
/// sample variance of the whole series; the error treats the per-block
/// sample variances as ten independent samples of the same quantity.
pub fn slope_estimator(rho_series: &[f64], z: f64, box_side: f64) -> Result<SlopeEstimate> {
    if rho_series.len() < 2 {
        return Err(Error::SeriesTooShort {
            need: 2,
            got: rho_series.len(),
        });
    }
    let scale = box_side * box_side / z;
    let value = scale * sample_variance(rho_series);
    let per = rho_series.len() / BLOCKS;
    let stderr = if per >= 2 {
        let block_vars: Vec<f64> = rho_series[..per * BLOCKS]
            .chunks_exact(per)
            .map(|b| scale * sample_variance(b))
            .collect();
        let m = block_vars.iter().sum::<f64>() / BLOCKS as f64;
        let var = block_vars
            .iter()
            .map(|&v| (v - m) * (v - m))
            .sum::<f64>()
            / (BLOCKS - 1) as f64;
        Some((var / BLOCKS as f64).sqrt())
    } else {
        None
    };
    Ok(SlopeEstimate { value, stderr })
}

/// One measured sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub sweep: u64,
    pub n: usize,
    pub rho: f64,
    pub gamma: f64,
    pub dperc: Option<f64>,
}

impl SweepRecord {
    /// Measure a configuration through its cluster partition.
    pub fn measure(
        sweep: u64,
        partition: &ClusterPartition,
        positions: &[Position],
        box_side: f64,
    ) -> Self {
        Self {
            sweep,
            n: positions.len(),
            rho: density(positions.len(), box_side),
            gamma: largest_cluster_fraction(partition),
            dperc: percolation_radius(partition, positions, box_side),
        }
    }
}

/// Blocked summary of a measured chain segment.
#[derive(Debug, Clone)]
pub struct SummaryStats {
    pub n0: usize,
    pub nm: usize,
    pub rho: BlockingStats,
    pub gamma: BlockingStats,
    pub dperc: Option<BlockingStats>,
    pub rho_prime: Option<SlopeEstimate>,
}

/// Reduce measured records (burn-in already discarded) to blocked means
/// and the slope estimator.
pub fn summarize(records: &[SweepRecord], z: f64, box_side: f64, n0: usize) -> Result<SummaryStats> {
    let rho_series: Vec<f64> = records.iter().map(|r| r.rho).collect();
    let gamma_series: Vec<f64> = records.iter().map(|r| r.gamma).collect();
    let rho = blocking_stats(&rho_series, BLOCKS)?;
    let gamma = blocking_stats(&gamma_series, BLOCKS)?;
    let dperc = if records.iter().all(|r| r.dperc.is_some()) && !records.is_empty() {
        let series: Vec<f64> = records.iter().map(|r| r.dperc.unwrap()).collect();
        Some(blocking_stats(&series, BLOCKS)?)
    } else {
        None
    };
    let rho_prime = slope_estimator(&rho_series, z, box_side).ok();
    Ok(SummaryStats {
        n0,
        nm: records.len(),
        rho,
        gamma,
        dperc,
        rho_prime,
    })
}

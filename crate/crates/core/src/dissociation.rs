//! Cluster dissociation diagnostics for hard-core configurations.
//!
//! Removing one cluster from a valid hard-core configuration leaves a
//! *free space*: the set of points farther than the interaction radius
//! from every remaining particle. Throwing the cluster's points back
//! uniformly into that space and asking how often they land disconnected
//! gives the cluster's dissociation probability. A cluster that almost
//! never dissociates is trapped by its surroundings; clusters that
//! dissociate freely carry the mixing of the dynamics.
//!
//! Everything here requires `T = 0`: only then is "free" a sharp notion.

use crate::cluster::{draw_edges, union_find_clusters};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::model::{periodic_dist2, ColoredConfiguration, ModelParams, Position, INTERACTION_RADIUS};
use crate::rng::RngStream;
use rand::Rng;

/// The free space left by removing one cluster: membership tests against
/// the remaining particles, backed by a spatial grid.
pub struct FreeSpace {
    grid: SpatialGrid,
    box_side: f64,
    n_blockers: usize,
}

impl FreeSpace {
    /// Remove the particles with indices `members` (a cluster, though any
    /// index set is accepted) from `config`. Requires hard-core
    /// parameters.
    pub fn new(config: &ColoredConfiguration, members: &[u32], params: &ModelParams) -> Result<Self> {
        if !params.is_hard_core() {
            return Err(Error::RequiresZeroTemperature(params.temperature));
        }
        let mut removed = vec![false; config.len()];
        for &i in members {
            removed[i as usize] = true;
        }
        let keep: Vec<Position> = (0..config.len())
            .filter(|&i| !removed[i])
            .map(|i| config.position(i))
            .collect();
        let grid = SpatialGrid::build_points(&keep, params.z, params.box_side);
        Ok(Self {
            grid,
            box_side: params.box_side,
            n_blockers: keep.len(),
        })
    }

    /// Is `x` farther than the interaction radius from every remaining
    /// particle?
    pub fn contains(&self, x: Position) -> bool {
        !self.grid.any_within_one_except(x, 0)
    }

    pub fn box_side(&self) -> f64 {
        self.box_side
    }

    /// Number of particles left after the removal.
    pub fn blocker_count(&self) -> usize {
        self.n_blockers
    }

    /// Hit-or-miss estimate of the free area with its binomial standard
    /// error.
    pub fn volume(&self, samples: usize, rng: &mut RngStream) -> (f64, f64) {
        assert!(samples >= 1);
        let mut hits = 0usize;
        for _ in 0..samples {
            let x = Position {
                x: rng.random_range(0.0..self.box_side),
                y: rng.random_range(0.0..self.box_side),
            };
            if self.contains(x) {
                hits += 1;
            }
        }
        let area = self.box_side * self.box_side;
        let p = hits as f64 / samples as f64;
        (area * p, area * (p * (1.0 - p) / samples as f64).sqrt())
    }

    /// Draw a uniform point of the free space by rejection from the box,
    /// giving up after `budget` proposals.
    pub fn sample_point(&self, budget: u64, rng: &mut RngStream) -> Result<Position> {
        for _ in 0..budget {
            let x = Position {
                x: rng.random_range(0.0..self.box_side),
                y: rng.random_range(0.0..self.box_side),
            };
            if self.contains(x) {
                return Ok(x);
            }
        }
        Err(Error::FreeSpaceExhausted { budget })
    }
}

/// Result of a dissociation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaOutcome {
    /// A single point is always one cluster, so the probability is 0
    /// without sampling.
    ExactZero,
    /// Monte Carlo estimate with binomial standard error.
    Estimated { delta: f64, stderr: f64, trials: u32 },
    /// The free space yielded no point within the proposal budget; the
    /// probability is left undefined rather than silently biased.
    Undefined { budget: u64 },
}

impl DeltaOutcome {
    pub fn value(&self) -> Option<f64> {
        match *self {
            DeltaOutcome::ExactZero => Some(0.0),
            DeltaOutcome::Estimated { delta, .. } => Some(delta),
            DeltaOutcome::Undefined { .. } => None,
        }
    }

    pub fn stderr(&self) -> Option<f64> {
        match *self {
            DeltaOutcome::ExactZero => Some(0.0),
            DeltaOutcome::Estimated { stderr, .. } => Some(stderr),
            DeltaOutcome::Undefined { .. } => None,
        }
    }
}

/// Probability that `cluster_size` points thrown uniformly into the free
/// space form at least two clusters.
pub fn dissociation_probability(
    free: &FreeSpace,
    cluster_size: usize,
    trials: u32,
    budget: u64,
    rng: &mut RngStream,
) -> DeltaOutcome {
    assert!(cluster_size >= 1, "a cluster has at least one point");
    assert!(trials >= 1);
    if cluster_size == 1 {
        return DeltaOutcome::ExactZero;
    }
    let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
    let mut split = 0u32;
    let mut pts: Vec<Position> = Vec::with_capacity(cluster_size);
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for _ in 0..trials {
        pts.clear();
        for _ in 0..cluster_size {
            match free.sample_point(budget, rng) {
                Ok(p) => pts.push(p),
                Err(_) => return DeltaOutcome::Undefined { budget },
            }
        }
        let disconnected = if cluster_size == 2 {
            periodic_dist2(pts[0], pts[1], free.box_side) > r2
        } else {
            edges.clear();
            for i in 0..pts.len() {
                for j in (i + 1)..pts.len() {
                    if periodic_dist2(pts[i], pts[j], free.box_side) <= r2 {
                        edges.push((j as u32, i as u32));
                    }
                }
            }
            union_find_clusters(&pts, &edges).k() >= 2
        };
        if disconnected {
            split += 1;
        }
    }
    let p = split as f64 / trials as f64;
    DeltaOutcome::Estimated {
        delta: p,
        stderr: (p * (1.0 - p) / trials as f64).sqrt(),
        trials,
    }
}

/// Deterministic cross-check of the two-point dissociation probability:
/// midpoint quadrature of the split indicator over the product of
/// membership-tested cell centers. The window (raw, unwrapped
/// coordinates inside the box) must contain the whole free space.
/// `None` when no cell center is free.
pub fn quadrature_two_point_delta(
    free: &FreeSpace,
    window: (f64, f64, f64, f64),
    cells: usize,
) -> Option<f64> {
    let (x0, x1, y0, y1) = window;
    assert!(x0 < x1 && y0 < y1 && cells >= 2);
    let hx = (x1 - x0) / cells as f64;
    let hy = (y1 - y0) / cells as f64;
    let mut members: Vec<Position> = Vec::new();
    for i in 0..cells {
        for j in 0..cells {
            let p = Position {
                x: x0 + (i as f64 + 0.5) * hx,
                y: y0 + (j as f64 + 0.5) * hy,
            };
            if free.contains(p) {
                members.push(p);
            }
        }
    }
    if members.is_empty() {
        return None;
    }
    let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
    let m = members.len();
    let mut far = 0u64;
    for i in 0..m {
        for j in (i + 1)..m {
            if periodic_dist2(members[i], members[j], free.box_side) > r2 {
                far += 1;
            }
        }
    }
    Some(2.0 * far as f64 / (m as f64 * m as f64))
}

/// Per-cluster row of a dissociation report.
#[derive(Debug, Clone, Copy)]
pub struct ClusterReport {
    pub root: u32,
    pub size: u32,
    pub free_volume: f64,
    pub free_volume_stderr: f64,
    pub delta: DeltaOutcome,
}

/// Dissociation diagnostics for every cluster of a configuration.
#[derive(Debug, Clone)]
pub struct DissociationReport {
    pub clusters: Vec<ClusterReport>,
    /// Cluster-size threshold for the large-cluster event.
    pub size_threshold: u32,
    /// Does any cluster reach the threshold?
    pub large_cluster_event: bool,
    /// Largest defined dissociation estimate (0 when every cluster is a
    /// singleton).
    pub max_delta: f64,
}

/// Knobs for [`scan_clusters`].
#[derive(Debug, Clone, Copy)]
pub struct DissocSettings {
    pub size_threshold: u32,
    pub trials: u32,
    pub volume_samples: u32,
    pub proposal_budget: u64,
}

impl Default for DissocSettings {
    fn default() -> Self {
        Self {
            size_threshold: 1000,
            trials: 1000,
            volume_samples: 10_000,
            proposal_budget: 1_000_000,
        }
    }
}

/// Estimate free volume and dissociation probability for every cluster of
/// a hard-core configuration. Each cluster gets its own derived RNG
/// stream, so the report does not depend on evaluation order.
pub fn scan_clusters(
    config: &ColoredConfiguration,
    params: &ModelParams,
    settings: &DissocSettings,
    rng: &mut RngStream,
) -> Result<DissociationReport> {
    if !params.is_hard_core() {
        return Err(Error::RequiresZeroTemperature(params.temperature));
    }
    let grid = SpatialGrid::build(config, params);
    let edges = draw_edges(config, &grid, params, rng);
    let partition = union_find_clusters(config.positions(), &edges);
    let mut clusters = Vec::with_capacity(partition.k());
    let mut max_delta = 0.0f64;
    let mut large = false;
    for root in partition.roots() {
        let members = partition.members_of_root(root);
        let size = partition.size_of_root(root);
        let free = FreeSpace::new(config, &members, params)?;
        let mut local = rng.derive(u64::from(root) + 1);
        let (free_volume, free_volume_stderr) =
            free.volume(settings.volume_samples as usize, &mut local);
        let delta = dissociation_probability(
            &free,
            size as usize,
            settings.trials,
            settings.proposal_budget,
            &mut local,
        );
        if let Some(v) = delta.value() {
            max_delta = max_delta.max(v);
        }
        large = large || size >= settings.size_threshold;
        clusters.push(ClusterReport {
            root,
            size,
            free_volume,
            free_volume_stderr,
            delta,
        });
    }
    Ok(DissociationReport {
        clusters,
        size_threshold: settings.size_threshold,
        large_cluster_event: large,
        max_delta,
    })
}

//! The cluster dynamics: one sweep resamples every type's positions given
//! the others (a thinned Poisson draw), joins same-type in-range pairs into
//! clusters, and recolors each cluster uniformly.
//!
//! Two variants are provided. [`sweep_systematic`] works on colored
//! configurations and visits types `1..=q` in order, each resampling step
//! seeing the other types' *current* positions (including ones already
//! resampled this sweep). [`sweep_random_scan`] works on uncolored graphs:
//! it deletes each cluster independently with probability `1/q`, draws a
//! thinned Poisson sample of new points against the survivors, wires edges
//! among the new points only, and keeps the union. Both leave the Gibbs
//! measure invariant; the systematic variant is the default workhorse.

use rand::Rng;

use crate::cluster::{assign_colors, draw_edges_into, union_find_clusters, ClusterPartition};
use crate::error::{Error, Result};
use crate::grid::SpatialGrid;
use crate::model::{ColoredConfiguration, ModelParams, Position, CRYSTAL_SPACING};
use crate::poisson::{sample_poisson, thin, thin_excluding};
use crate::rng::RngStream;

/// Which sweep implementation a chain uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariant {
    Systematic,
    RandomScan,
}

/// Starting configuration of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialCondition {
    /// Poisson sample, every particle of type 1.
    Ordered,
    /// Poisson sample with i.i.d. uniform types.
    DisorderedRandom,
    /// Square lattice of spacing just above the interaction radius with
    /// cyclically alternating types; unlike lattice neighbors never
    /// interact.
    DisorderedCrystal,
}

/// Build an initial configuration. Point positions and types are drawn in
/// a fixed order so chains are reproducible from their stream.
pub fn make_initial(
    kind: InitialCondition,
    params: &ModelParams,
    rng: &mut RngStream,
) -> Result<ColoredConfiguration> {
    match kind {
        InitialCondition::Ordered => {
            let points = sample_poisson(params.z, params.box_side, rng);
            let labels = vec![1u16; points.len()];
            Ok(ColoredConfiguration::from_parts(points, labels))
        }
        InitialCondition::DisorderedRandom => {
            let points = sample_poisson(params.z, params.box_side, rng);
            let labels = points
                .iter()
                .map(|_| {
                    if params.q == 1 {
                        1
                    } else {
                        rng.random_range(1..=params.q)
                    }
                })
                .collect();
            Ok(ColoredConfiguration::from_parts(points, labels))
        }
        InitialCondition::DisorderedCrystal => {
            if params.is_hard_core() && params.q >= 2 && CRYSTAL_SPACING <= 1.0 {
                return Err(Error::InvalidParam(
                    "crystal spacing would put unlike neighbors in range at T = 0".into(),
                ));
            }
            let s = CRYSTAL_SPACING;
            let m = (params.box_side / s).floor() as usize;
            let mut config = ColoredConfiguration::with_capacity(m * m);
            for j in 0..m {
                for i in 0..m {
                    let label = 1 + ((i + j) % params.q as usize) as u16;
                    config.push(
                        Position {
                            x: s / 2.0 + s * i as f64,
                            y: s / 2.0 + s * j as f64,
                        },
                        label,
                    );
                }
            }
            Ok(config)
        }
    }
}

/// A colored-configuration chain: the current configuration, how many
/// sweeps have been applied, and the chain's private random stream.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub config: ColoredConfiguration,
    pub sweep_index: u64,
    pub rng: RngStream,
}

impl ChainState {
    pub fn new(params: &ModelParams, init: InitialCondition, mut rng: RngStream) -> Result<Self> {
        let config = make_initial(init, params, &mut rng)?;
        Ok(Self {
            config,
            sweep_index: 0,
            rng,
        })
    }
}

/// One systematic sweep. Returns the cluster partition of the updated
/// configuration (the graph drawn this sweep), aligned with its particle
/// indices.
///
/// The spatial grid is built once per sweep and then maintained
/// incrementally: resampling type `a` clears its lists and inserts the
/// kept points, so later types query the current mixed generation without
/// a rebuild.
pub fn sweep_systematic(state: &mut ChainState, params: &ModelParams) -> ClusterPartition {
    let q = params.q;
    let config = &state.config;

    // Scratch store indexed by grid ids; starts as the configuration and
    // grows with resampled points. Replaced entries simply drop out of the
    // grid and the live lists.
    let mut store_pos: Vec<Position> = config.positions().to_vec();
    let mut store_lab: Vec<u16> = config.labels().to_vec();
    let mut live: Vec<Vec<u32>> = vec![Vec::new(); q as usize];
    for (i, &l) in store_lab.iter().enumerate() {
        live[(l - 1) as usize].push(i as u32);
    }
    let mut grid = SpatialGrid::new(params.z, params.box_side, q);
    for (i, (&p, &l)) in store_pos.iter().zip(&store_lab).enumerate() {
        grid.insert(i as u32, p, l);
    }

    for a in 1..=q {
        grid.remove_type(a);
        let proposal = sample_poisson(params.z, params.box_side, &mut state.rng);
        let kept = thin_excluding(proposal, &grid, a, params.temperature, &mut state.rng);
        let slot = &mut live[(a - 1) as usize];
        slot.clear();
        for p in kept {
            let id = store_pos.len() as u32;
            store_pos.push(p);
            store_lab.push(a);
            grid.insert(id, p, a);
            slot.push(id);
        }
    }

    // Assemble the new configuration (types in order, then draw order) and
    // the store-id -> new-index map.
    let n_new: usize = live.iter().map(Vec::len).sum();
    let mut remap = vec![u32::MAX; store_pos.len()];
    let mut new_pos = Vec::with_capacity(n_new);
    for ids in &live {
        for &id in ids {
            remap[id as usize] = new_pos.len() as u32;
            new_pos.push(store_pos[id as usize]);
        }
    }

    // Edge pass over live ids in new-configuration order; the grid already
    // indexes exactly the live particles.
    let p_edge = params.in_range_edge_probability();
    let deterministic = p_edge >= 1.0;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for ids in &live {
        for &i in ids {
            let x = store_pos[i as usize];
            let label = store_lab[i as usize];
            grid.for_each_in_range_of_type(x, label, |j, _| {
                if j < i {
                    let keep = deterministic || state.rng.random::<f64>() < p_edge;
                    if keep {
                        let a = remap[j as usize];
                        let b = remap[i as usize];
                        edges.push((a.min(b), a.max(b)));
                    }
                }
            });
        }
    }

    let partition = union_find_clusters(&new_pos, &edges);
    let new_labels = assign_colors(&partition, q, &mut state.rng);
    state.config = ColoredConfiguration::from_parts(new_pos, new_labels);
    state.sweep_index += 1;
    partition
}

/// Reference implementation of one systematic sweep built from the public
/// single-type operations, rebuilding the grid from scratch at every step.
/// Draw-for-draw equivalent to [`sweep_systematic`]; kept for equivalence
/// testing.
pub fn sweep_systematic_rebuild(state: &mut ChainState, params: &ModelParams) -> ClusterPartition {
    let mut config = state.config.clone();
    for a in 1..=params.q {
        config = crate::poisson::resample_type(&config, a, params, &mut state.rng);
    }
    let grid = SpatialGrid::build(&config, params);
    let edges = crate::cluster::draw_edges(&config, &grid, params, &mut state.rng);
    let partition = union_find_clusters(config.positions(), &edges);
    let labels = assign_colors(&partition, params.q, &mut state.rng);
    state.config = ColoredConfiguration::from_parts(config.positions().to_vec(), labels);
    state.sweep_index += 1;
    partition
}

/// An uncolored random-cluster chain: point positions plus explicit edges.
#[derive(Debug, Clone, Default)]
pub struct GraphState {
    pub points: Vec<Position>,
    pub edges: Vec<(u32, u32)>,
}

impl GraphState {
    /// Forget the colors of a configuration, drawing the same-type edges
    /// that define its clusters.
    pub fn from_colored(
        config: &ColoredConfiguration,
        params: &ModelParams,
        rng: &mut RngStream,
    ) -> Self {
        let grid = SpatialGrid::build(config, params);
        let edges = crate::cluster::draw_edges(config, &grid, params, rng);
        Self {
            points: config.positions().to_vec(),
            edges,
        }
    }
}

/// One random-scan sweep on an uncolored graph. Returns the partition of
/// the updated graph.
pub fn sweep_random_scan(
    state: &mut GraphState,
    params: &ModelParams,
    rng: &mut RngStream,
) -> ClusterPartition {
    let old = union_find_clusters(&state.points, &state.edges);

    // Delete whole clusters, one coin per root in ascending root order.
    let delete_prob = 1.0 / params.q as f64;
    let mut delete_root = vec![false; state.points.len()];
    for r in old.roots() {
        delete_root[r as usize] = rng.random::<f64>() < delete_prob;
    }
    let mut keep_index = vec![u32::MAX; state.points.len()];
    let mut retained: Vec<Position> = Vec::new();
    for (i, &p) in state.points.iter().enumerate() {
        if !delete_root[old.root_of(i) as usize] {
            keep_index[i] = retained.len() as u32;
            retained.push(p);
        }
    }
    // Cluster deletion never splits an edge: both endpoints share a root.
    let mut edges: Vec<(u32, u32)> = state
        .edges
        .iter()
        .filter(|&&(a, b)| keep_index[a as usize] != u32::MAX && keep_index[b as usize] != u32::MAX)
        .map(|&(a, b)| (keep_index[a as usize], keep_index[b as usize]))
        .collect();

    // New points: Poisson proposal thinned against every survivor.
    let survivor_grid = SpatialGrid::build_points(&retained, params.z, params.box_side);
    let proposal = sample_poisson(params.z, params.box_side, rng);
    let fresh = thin(proposal, &survivor_grid, params.temperature, rng);

    // Edges among the new points only.
    let offset = retained.len() as u32;
    let fresh_grid = SpatialGrid::build_points(&fresh, params.z, params.box_side);
    let fresh_labels = vec![1u16; fresh.len()];
    let mut fresh_edges = Vec::new();
    draw_edges_into(
        &fresh,
        &fresh_labels,
        &fresh_grid,
        params.in_range_edge_probability(),
        rng,
        &mut fresh_edges,
    );
    edges.extend(fresh_edges.iter().map(|&(a, b)| (a + offset, b + offset)));

    let mut points = retained;
    points.extend_from_slice(&fresh);
    let partition = union_find_clusters(&points, &edges);
    state.points = points;
    state.edges = edges;
    partition
}

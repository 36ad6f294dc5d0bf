//! Same-type edge drawing and union-find clustering.
//!
//! Clusters are connected components of the graph whose vertices are
//! particles and whose edges join same-type pairs within the interaction
//! radius, each such pair independently with probability `1 - exp(-1/T)`
//! (always, at `T = 0`). The union-find keeps per-cluster sizes and
//! axis-aligned corner boxes in raw coordinates, which is all the
//! observables need.

use rand::Rng;

use crate::grid::SpatialGrid;
use crate::model::{ColoredConfiguration, ModelParams, Position};
use crate::rng::RngStream;

/// Bounding corners of a cluster in raw (unwrapped) coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corners {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
}

impl Corners {
    fn of(p: Position) -> Self {
        Self {
            min_x: p.x,
            max_x: p.x,
            min_y: p.y,
            max_y: p.y,
        }
    }

    fn absorb(&mut self, other: &Corners) {
        self.min_x = self.min_x.min(other.min_x);
        self.max_x = self.max_x.max(other.max_x);
        self.min_y = self.min_y.min(other.min_y);
        self.max_y = self.max_y.max(other.max_y);
    }
}

struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    corners: Vec<Corners>,
}

impl UnionFind {
    fn new(positions: &[Position]) -> Self {
        Self {
            parent: (0..positions.len() as u32).collect(),
            size: vec![1; positions.len()],
            corners: positions.iter().map(|&p| Corners::of(p)).collect(),
        }
    }

    fn find(&mut self, mut i: u32) -> u32 {
        // Path halving.
        while self.parent[i as usize] != i {
            let gp = self.parent[self.parent[i as usize] as usize];
            self.parent[i as usize] = gp;
            i = gp;
        }
        i
    }

    /// Returns true when the edge merged two clusters.
    fn union(&mut self, a: u32, b: u32) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        // Union by size; on ties the smaller index stays root so results
        // do not depend on edge order.
        let (root, child) = match self.size[ra as usize].cmp(&self.size[rb as usize]) {
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Equal => (ra.min(rb), ra.max(rb)),
        };
        self.parent[child as usize] = root;
        self.size[root as usize] += self.size[child as usize];
        let child_corners = self.corners[child as usize];
        self.corners[root as usize].absorb(&child_corners);
        true
    }
}

/// Finished partition of a particle set into clusters. Immutable once
/// built; cheap to share across threads.
#[derive(Debug, Clone)]
pub struct ClusterPartition {
    root_of: Vec<u32>,
    size: Vec<u32>,
    corners: Vec<Corners>,
    k: usize,
}

impl ClusterPartition {
    pub fn n(&self) -> usize {
        self.root_of.len()
    }

    /// Number of clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root_of(&self, i: usize) -> u32 {
        self.root_of[i]
    }

    /// Size of the cluster whose root is `root`.
    pub fn size_of_root(&self, root: u32) -> u32 {
        self.size[root as usize]
    }

    pub fn corners_of_root(&self, root: u32) -> Corners {
        self.corners[root as usize]
    }

    /// Roots in ascending index order, one per cluster.
    pub fn roots(&self) -> impl Iterator<Item = u32> + '_ {
        self.root_of
            .iter()
            .enumerate()
            .filter(|&(i, &r)| i as u32 == r)
            .map(|(_, &r)| r)
    }

    pub fn largest_cluster_size(&self) -> u32 {
        self.roots().map(|r| self.size_of_root(r)).max().unwrap_or(0)
    }

    /// Member indices of one cluster. O(n); for diagnostics and tests.
    pub fn members_of_root(&self, root: u32) -> Vec<u32> {
        (0..self.root_of.len() as u32)
            .filter(|&i| self.root_of[i as usize] == root)
            .collect()
    }
}

/// Run union-find over the given edges and freeze the result.
pub fn union_find_clusters(positions: &[Position], edges: &[(u32, u32)]) -> ClusterPartition {
    let mut uf = UnionFind::new(positions);
    let mut k = positions.len();
    for &(a, b) in edges {
        if uf.union(a, b) {
            k -= 1;
        }
    }
    let root_of: Vec<u32> = (0..positions.len() as u32).map(|i| uf.find(i)).collect();
    ClusterPartition {
        root_of,
        size: uf.size,
        corners: uf.corners,
        k,
    }
}

/// Draw the random-cluster edges of a colored configuration. Each
/// same-type pair within distance 1 gets an edge with probability
/// `1 - exp(-1/T)`; at `T = 0` every such pair is joined and no
/// randomness is consumed. Pairs are visited in ascending index order and
/// returned as `(low, high)`.
pub fn draw_edges(
    config: &ColoredConfiguration,
    grid: &SpatialGrid,
    params: &ModelParams,
    rng: &mut RngStream,
) -> Vec<(u32, u32)> {
    let p_edge = params.in_range_edge_probability();
    let mut edges = Vec::new();
    draw_edges_into(
        config.positions(),
        config.labels(),
        grid,
        p_edge,
        rng,
        &mut edges,
    );
    edges
}

/// Edge pass over parallel position/label arrays; ids in the grid must
/// match indices into the arrays. Used directly by the sweep, which keeps
/// its grid keyed by a scratch store.
pub(crate) fn draw_edges_into(
    positions: &[Position],
    labels: &[u16],
    grid: &SpatialGrid,
    p_edge: f64,
    rng: &mut RngStream,
    edges: &mut Vec<(u32, u32)>,
) {
    let deterministic = p_edge >= 1.0;
    for i in 0..positions.len() as u32 {
        let x = positions[i as usize];
        let label = labels[i as usize];
        grid.for_each_in_range_of_type(x, label, |j, _| {
            if j < i {
                if deterministic {
                    edges.push((j, i));
                } else {
                    let u: f64 = rng.random();
                    if u < p_edge {
                        edges.push((j, i));
                    }
                }
            }
        });
    }
}

/// Give every cluster an independent uniform type in `1..=q`. Colors are
/// drawn per root in first-encounter order over particle indices.
pub fn assign_colors(partition: &ClusterPartition, q: u16, rng: &mut RngStream) -> Vec<u16> {
    let mut color_of_root: Vec<u16> = vec![0; partition.n()];
    let mut labels = Vec::with_capacity(partition.n());
    for i in 0..partition.n() {
        let root = partition.root_of(i) as usize;
        if color_of_root[root] == 0 {
            color_of_root[root] = if q == 1 { 1 } else { rng.random_range(1..=q) };
        }
        labels.push(color_of_root[root]);
    }
    labels
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::periodic_distance;
    use rand::Rng;

    fn zeros(n: usize) -> Vec<Position> {
        vec![Position { x: 0.0, y: 0.0 }; n]
    }

    #[test]
    fn single_edge_partition() {
        let pos = vec![
            Position { x: 1.0, y: 1.0 },
            Position { x: 1.5, y: 1.0 },
            Position { x: 4.0, y: 4.0 },
        ];
        let p = union_find_clusters(&pos, &[(0, 1)]);
        assert_eq!(p.k(), 2);
        assert_eq!(p.root_of(0), p.root_of(1));
        assert_ne!(p.root_of(0), p.root_of(2));
        assert_eq!(p.size_of_root(p.root_of(0)), 2);
        assert_eq!(p.size_of_root(p.root_of(2)), 1);
        let c = p.corners_of_root(p.root_of(0));
        assert_eq!((c.min_x, c.max_x, c.min_y, c.max_y), (1.0, 1.5, 1.0, 1.0));
    }

    #[test]
    fn sizes_sum_to_n_and_corners_bound_members() {
        let mut rng = RngStream::new(21, 0);
        for _ in 0..40 {
            let n = rng.random_range(1..80usize);
            let pos: Vec<Position> = (0..n)
                .map(|_| Position {
                    x: rng.random_range(0.0..12.0),
                    y: rng.random_range(0.0..12.0),
                })
                .collect();
            let m = rng.random_range(0..2 * n);
            let edges: Vec<(u32, u32)> = (0..m)
                .map(|_| {
                    (
                        rng.random_range(0..n as u32),
                        rng.random_range(0..n as u32),
                    )
                })
                .filter(|&(a, b)| a != b)
                .collect();
            let p = union_find_clusters(&pos, &edges);
            let total: u32 = p.roots().map(|r| p.size_of_root(r)).sum();
            assert_eq!(total as usize, n);
            assert_eq!(p.roots().count(), p.k());
            for i in 0..n {
                let c = p.corners_of_root(p.root_of(i));
                assert!(c.min_x <= pos[i].x && pos[i].x <= c.max_x);
                assert!(c.min_y <= pos[i].y && pos[i].y <= c.max_y);
            }
        }
    }

    /// Breadth-first components, written without reference to union-find.
    fn bfs_components(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([s as u32]);
            seen[s] = true;
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for &w in &adj[v as usize] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    #[test]
    fn union_find_agrees_with_bfs() {
        let mut rng = RngStream::new(22, 0);
        for _ in 0..100 {
            let n = rng.random_range(1..60usize);
            let m = rng.random_range(0..3 * n);
            let edges: Vec<(u32, u32)> = (0..m)
                .map(|_| {
                    (
                        rng.random_range(0..n as u32),
                        rng.random_range(0..n as u32),
                    )
                })
                .filter(|&(a, b)| a != b)
                .collect();
            let p = union_find_clusters(&zeros(n), &edges);
            let comps = bfs_components(n, &edges);
            assert_eq!(p.k(), comps.len());
            for comp in comps {
                let r = p.root_of(comp[0] as usize);
                assert_eq!(p.size_of_root(r) as usize, comp.len());
                for &v in &comp {
                    assert_eq!(p.root_of(v as usize), r);
                }
            }
        }
    }

    #[test]
    fn hard_core_edges_are_deterministic_same_type_in_range_pairs() {
        let mut rng = RngStream::new(23, 0);
        let params = ModelParams::new(3, 1.5, 0.0, 9.0).unwrap();
        for _ in 0..15 {
            let mut config = ColoredConfiguration::new();
            for _ in 0..70 {
                config.push(
                    Position {
                        x: rng.random_range(0.0..9.0),
                        y: rng.random_range(0.0..9.0),
                    },
                    rng.random_range(1..=3),
                );
            }
            let grid = SpatialGrid::build(&config, &params);
            let mut got = draw_edges(&config, &grid, &params, &mut rng);
            got.sort_unstable();
            let mut want = Vec::new();
            for i in 0..config.len() {
                for j in (i + 1)..config.len() {
                    if config.label(i) == config.label(j)
                        && periodic_distance(config.position(i), config.position(j), 9.0) <= 1.0
                    {
                        want.push((i as u32, j as u32));
                    }
                }
            }
            want.sort_unstable();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn unlike_pairs_never_joined() {
        let mut config = ColoredConfiguration::new();
        config.push(Position { x: 2.0, y: 2.0 }, 1);
        config.push(Position { x: 2.3, y: 2.0 }, 2);
        let params = ModelParams::new(2, 1.0, 0.0, 8.0).unwrap();
        let grid = SpatialGrid::build(&config, &params);
        let mut rng = RngStream::new(24, 0);
        assert!(draw_edges(&config, &grid, &params, &mut rng).is_empty());
    }

    #[test]
    fn positive_temperature_edge_rate() {
        // Same-type pair at distance 0.8, T = 0.5: edge probability
        // 1 - exp(-2).
        let mut config = ColoredConfiguration::new();
        config.push(Position { x: 2.0, y: 2.0 }, 1);
        config.push(Position { x: 2.8, y: 2.0 }, 1);
        let params = ModelParams::new(1, 1.0, 0.5, 8.0).unwrap();
        let grid = SpatialGrid::build(&config, &params);
        let mut rng = RngStream::new(25, 0);
        let trials = 100_000;
        let mut hits = 0usize;
        for _ in 0..trials {
            hits += draw_edges(&config, &grid, &params, &mut rng).len();
        }
        let p = 1.0 - (-2.0f64).exp();
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        assert!((hits as f64 - trials as f64 * p).abs() <= 4.0 * sigma);
    }

    #[test]
    fn chain_of_touching_particles_is_one_cluster() {
        let params = ModelParams::new(1, 1.0, 0.0, 10.0).unwrap();
        let mut config = ColoredConfiguration::new();
        for i in 0..5 {
            config.push(
                Position {
                    x: 1.0 + 0.9 * i as f64,
                    y: 5.0,
                },
                1,
            );
        }
        let grid = SpatialGrid::build(&config, &params);
        let mut rng = RngStream::new(26, 0);
        let edges = draw_edges(&config, &grid, &params, &mut rng);
        let p = union_find_clusters(config.positions(), &edges);
        assert_eq!(p.k(), 1);
        assert_eq!(p.largest_cluster_size(), 5);
        let c = p.corners_of_root(p.root_of(0));
        assert_eq!((c.min_x, c.max_x), (1.0, 4.6));
    }

    #[test]
    fn colors_constant_on_clusters_and_q1_all_ones() {
        let mut rng = RngStream::new(27, 0);
        let pos = zeros(30);
        let edges: Vec<(u32, u32)> = (0..25)
            .map(|_| (rng.random_range(0..30), rng.random_range(0..30)))
            .filter(|&(a, b)| a != b)
            .collect();
        let p = union_find_clusters(&pos, &edges);
        let labels = assign_colors(&p, 5, &mut rng);
        for i in 0..30 {
            for j in 0..30 {
                if p.root_of(i) == p.root_of(j) {
                    assert_eq!(labels[i], labels[j]);
                }
            }
        }
        assert!(labels.iter().all(|&l| (1..=5).contains(&l)));
        let ones = assign_colors(&p, 1, &mut rng);
        assert!(ones.iter().all(|&l| l == 1));
    }

    #[test]
    fn cluster_colors_uniform_and_independent() {
        // Two clusters, q = 3: the pair of colors over repeated draws must
        // be uniform on the 3x3 table. Chi-square with 8 degrees of
        // freedom; reject beyond mean + 4 sigma = 8 + 16.
        let pos = zeros(4);
        let p = union_find_clusters(&pos, &[(0, 1), (2, 3)]);
        let mut rng = RngStream::new(28, 0);
        let trials = 90_000;
        let mut counts = [[0u32; 3]; 3];
        for _ in 0..trials {
            let labels = assign_colors(&p, 3, &mut rng);
            counts[(labels[0] - 1) as usize][(labels[2] - 1) as usize] += 1;
        }
        let expect = trials as f64 / 9.0;
        let chi2: f64 = counts
            .iter()
            .flatten()
            .map(|&c| {
                let d = c as f64 - expect;
                d * d / expect
            })
            .sum();
        assert!(chi2 < 8.0 + 16.0, "chi2 = {chi2}");
    }

    #[test]
    fn edge_rates_invariant_under_index_relabeling() {
        // Three collinear same-type particles, two in-range pairs. Reverse
        // the index order and compare per-pair edge rates across seeds.
        let params = ModelParams::new(1, 1.0, 0.4, 8.0).unwrap();
        let pts = [
            Position { x: 2.0, y: 4.0 },
            Position { x: 2.9, y: 4.0 },
            Position { x: 3.7, y: 4.0 },
        ];
        let mut fwd = ColoredConfiguration::new();
        let mut rev = ColoredConfiguration::new();
        for &p in &pts {
            fwd.push(p, 1);
        }
        for &p in pts.iter().rev() {
            rev.push(p, 1);
        }
        let gf = SpatialGrid::build(&fwd, &params);
        let gr = SpatialGrid::build(&rev, &params);
        let trials = 40_000;
        let rate = |config: &ColoredConfiguration, grid: &SpatialGrid, salt: u64| {
            let mut counts = std::collections::HashMap::new();
            for t in 0..trials {
                let mut rng = RngStream::new(1000 + t, salt);
                for (a, b) in draw_edges(config, grid, &params, &mut rng) {
                    // Key edges by position so the two orderings compare.
                    let key = (
                        config.position(a as usize).x.min(config.position(b as usize).x)
                            as i64,
                        config.position(a as usize).x.max(config.position(b as usize).x)
                            * 10.0,
                    );
                    *counts.entry(format!("{key:?}")).or_insert(0u32) += 1;
                }
            }
            counts
        };
        let cf = rate(&fwd, &gf, 0);
        let cr = rate(&rev, &gr, 1);
        let p = 1.0 - (-1.0f64 / 0.4).exp();
        let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
        for (key, &n_f) in &cf {
            let n_r = cr.get(key).copied().unwrap_or(0);
            assert!(
                (n_f as f64 - n_r as f64).abs() <= 5.0 * sigma * 2.0f64.sqrt(),
                "pair {key}: {n_f} vs {n_r}"
            );
        }
    }
}

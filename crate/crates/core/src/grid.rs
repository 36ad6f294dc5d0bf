//! Spatial hash grid over the periodic box.
//!
//! The box is split into `n x n` square cells with `n` chosen so a cell
//! holds about ten particles at the nominal density. A particle is
//! registered in *every* cell whose closed region lies within periodic
//! distance 1 of it, so a range query only ever inspects the lists of the
//! single cell containing the query point. Lists are kept per type, which
//! lets the dynamics resample one type while scanning the others without
//! any filtering.

use crate::model::{periodic_dist2, ColoredConfiguration, ModelParams, Position, INTERACTION_RADIUS};

const R2: f64 = INTERACTION_RADIUS * INTERACTION_RADIUS;

/// Cells per axis: targets ~10 particles per cell at density `z`, ties
/// rounding half up, never fewer than one cell.
pub fn cells_per_axis(z: f64, box_side: f64) -> usize {
    let n = (box_side * (z / 10.0).sqrt()).round() as usize;
    n.max(1)
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    id: u32,
    pos: Position,
}

/// Hash grid holding `(id, position)` copies; the configuration it was
/// built from stays authoritative for particle data.
#[derive(Debug, Clone)]
pub struct SpatialGrid {
    n: usize,
    cell_side: f64,
    box_side: f64,
    q: u16,
    lists: Vec<Vec<Entry>>,
}

impl SpatialGrid {
    pub fn new(z: f64, box_side: f64, q_types: u16) -> Self {
        let n = cells_per_axis(z, box_side);
        Self {
            n,
            cell_side: box_side / n as f64,
            box_side,
            q: q_types,
            lists: vec![Vec::new(); n * n * q_types as usize],
        }
    }

    /// Grid over a colored configuration; ids are the particle indices.
    pub fn build(config: &ColoredConfiguration, params: &ModelParams) -> Self {
        let mut g = Self::new(params.z, params.box_side, params.q);
        for (i, (&pos, &label)) in config.positions().iter().zip(config.labels()).enumerate() {
            g.insert(i as u32, pos, label);
        }
        g
    }

    /// Grid over an unlabeled point set (single type 1).
    pub fn build_points(points: &[Position], z: f64, box_side: f64) -> Self {
        let mut g = Self::new(z, box_side, 1);
        for (i, &pos) in points.iter().enumerate() {
            g.insert(i as u32, pos, 1);
        }
        g
    }

    pub fn cells_per_axis_built(&self) -> usize {
        self.n
    }

    #[inline(always)]
    fn list_index(&self, cx: usize, cy: usize, label: u16) -> usize {
        (cy * self.n + cx) * self.q as usize + (label - 1) as usize
    }

    #[inline(always)]
    fn cell_coord(&self, v: f64) -> usize {
        ((v / self.cell_side) as usize).min(self.n - 1)
    }

    /// Periodic gap between coordinate `v` and the closed interval of cell
    /// index `c` along one axis.
    fn axis_gap_to_cell(&self, v: f64, c: usize) -> f64 {
        let lo = c as f64 * self.cell_side;
        let hi = (c + 1) as f64 * self.cell_side;
        let direct = (lo - v).max(v - hi).max(0.0);
        let up = (lo - (v + self.box_side)).max(v + self.box_side - hi).max(0.0);
        let down = (lo - (v - self.box_side)).max(v - self.box_side - hi).max(0.0);
        direct.min(up).min(down)
    }

    fn candidate_axis_cells(&self, v: f64) -> Vec<usize> {
        // One extra cell on each side so closed cell regions that only
        // touch the reach boundary stay in play; the exact gap filter in
        // `insert` prunes the rest.
        let lo = ((v - INTERACTION_RADIUS) / self.cell_side).floor() as i64 - 1;
        let hi = ((v + INTERACTION_RADIUS) / self.cell_side).floor() as i64 + 1;
        let n = self.n as i64;
        if hi - lo + 1 >= n {
            (0..self.n).collect()
        } else {
            (lo..=hi).map(|i| i.rem_euclid(n) as usize).collect()
        }
    }

    /// Register a particle in every cell whose region it can interact with.
    pub fn insert(&mut self, id: u32, pos: Position, label: u16) {
        debug_assert!(label >= 1 && label <= self.q);
        for cx in self.candidate_axis_cells(pos.x) {
            let gx = self.axis_gap_to_cell(pos.x, cx);
            for cy in self.candidate_axis_cells(pos.y) {
                let gy = self.axis_gap_to_cell(pos.y, cy);
                if gx * gx + gy * gy <= R2 {
                    let idx = self.list_index(cx, cy, label);
                    self.lists[idx].push(Entry { id, pos });
                }
            }
        }
    }

    /// Drop every particle of one type. O(number of cells).
    pub fn remove_type(&mut self, label: u16) {
        debug_assert!(label >= 1 && label <= self.q);
        for cell in 0..self.n * self.n {
            self.lists[cell * self.q as usize + (label - 1) as usize].clear();
        }
    }

    #[inline(always)]
    fn scan<F: FnMut(u32, Position) -> bool>(&self, list: usize, x: Position, f: &mut F) -> bool {
        for e in &self.lists[list] {
            if periodic_dist2(x, e.pos, self.box_side) <= R2 && f(e.id, e.pos) {
                return true;
            }
        }
        false
    }

    /// Ids of particles with the requested types within periodic distance 1
    /// of `x` (inclusive).
    pub fn neighbors_within_one(&self, x: Position, types: &[u16]) -> Vec<u32> {
        let cx = self.cell_coord(x.x);
        let cy = self.cell_coord(x.y);
        let mut out = Vec::new();
        for &a in types {
            self.scan(self.list_index(cx, cy, a), x, &mut |id, _| {
                out.push(id);
                false
            });
        }
        out
    }

    /// Is any particle of a type other than `excluded` in range? Pass 0 to
    /// exclude nothing.
    pub fn any_within_one_except(&self, x: Position, excluded: u16) -> bool {
        let cx = self.cell_coord(x.x);
        let cy = self.cell_coord(x.y);
        for a in 1..=self.q {
            if a != excluded && self.scan(self.list_index(cx, cy, a), x, &mut |_, _| true) {
                return true;
            }
        }
        false
    }

    /// Number of in-range particles of types other than `excluded` (0 for
    /// none).
    pub fn count_within_one_except(&self, x: Position, excluded: u16) -> usize {
        let cx = self.cell_coord(x.x);
        let cy = self.cell_coord(x.y);
        let mut count = 0usize;
        for a in 1..=self.q {
            if a != excluded {
                self.scan(self.list_index(cx, cy, a), x, &mut |_, _| {
                    count += 1;
                    false
                });
            }
        }
        count
    }

    /// Visit in-range particles of one type.
    pub fn for_each_in_range_of_type<F: FnMut(u32, Position)>(
        &self,
        x: Position,
        label: u16,
        mut f: F,
    ) {
        let cx = self.cell_coord(x.x);
        let cy = self.cell_coord(x.y);
        self.scan(self.list_index(cx, cy, label), x, &mut |id, pos| {
            f(id, pos);
            false
        });
    }

    /// True if some in-range particle (of any type) satisfies the
    /// predicate; stops at the first match.
    pub fn any_within_one_matching<F: FnMut(u32) -> bool>(&self, x: Position, mut pred: F) -> bool {
        let cx = self.cell_coord(x.x);
        let cy = self.cell_coord(x.y);
        for a in 1..=self.q {
            if self.scan(self.list_index(cx, cy, a), x, &mut |id, _| pred(id)) {
                return true;
            }
        }
        false
    }

    /// Cells a particle id is registered in; test and debugging aid.
    pub fn registered_cells(&self, id: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for cy in 0..self.n {
            for cx in 0..self.n {
                for a in 1..=self.q {
                    if self.lists[self.list_index(cx, cy, a)].iter().any(|e| e.id == id) {
                        out.push((cx, cy));
                    }
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

//! Model definition: periodic box geometry, the step pair potential, and
//! colored particle configurations.
//!
//! The system lives on the torus `[0, L)^2`. Two particles interact exactly
//! when their periodic distance is at most the interaction radius (fixed at
//! 1); the energy of a configuration counts interacting pairs of *unlike*
//! type. At `T = 0` this becomes a hard exclusion between unlike types,
//! which is the continuum Widom-Rowlinson model.

use crate::error::{Error, Result};

/// Interaction radius of the step potential. Everything in this crate
/// assumes this value; it is exposed for clarity, not for tuning.
pub const INTERACTION_RADIUS: f64 = 1.0;

/// Grid spacing used by the crystalline initial condition: barely more than
/// the interaction radius, so unlike lattice neighbors do not interact.
pub const CRYSTAL_SPACING: f64 = 1.001;

/// Static parameters of a simulation: number of types `q`, activity `z`,
/// temperature `T` (with `T = 0` meaning hard-core), and box side `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub q: u16,
    pub z: f64,
    pub temperature: f64,
    pub box_side: f64,
}

impl ModelParams {
    pub fn new(q: u16, z: f64, temperature: f64, box_side: f64) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidParam("q must be at least 1".into()));
        }
        if !(z > 0.0) || !z.is_finite() {
            return Err(Error::InvalidParam(format!("z must be positive, got {z}")));
        }
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::InvalidParam(format!(
                "T must be non-negative, got {temperature}"
            )));
        }
        if !(box_side >= 2.0 * INTERACTION_RADIUS) || !box_side.is_finite() {
            return Err(Error::InvalidParam(format!(
                "L must be at least twice the interaction radius, got {box_side}"
            )));
        }
        Ok(Self {
            q,
            z,
            temperature,
            box_side,
        })
    }

    /// Box area `L^2`.
    pub fn area(&self) -> f64 {
        self.box_side * self.box_side
    }

    /// Hard-core (zero temperature) regime?
    pub fn is_hard_core(&self) -> bool {
        self.temperature == 0.0
    }

    /// Probability that an interacting pair is joined by an edge:
    /// `1 - exp(-1/T)`, or 1 at `T = 0`.
    pub fn in_range_edge_probability(&self) -> f64 {
        if self.is_hard_core() {
            1.0
        } else {
            -(-1.0 / self.temperature).exp_m1()
        }
    }
}

/// A point of the torus `[0, L)^2`. Coordinates are reduced modulo `L` on
/// construction and never unwrapped afterwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn wrapped(x: f64, y: f64, box_side: f64) -> Self {
        Self {
            x: wrap_coord(x, box_side),
            y: wrap_coord(y, box_side),
        }
    }
}

fn wrap_coord(v: f64, box_side: f64) -> f64 {
    let w = v.rem_euclid(box_side);
    // rem_euclid can return `box_side` itself when v is a tiny negative
    // number; fold that back to 0 so coordinates stay in [0, L).
    if w >= box_side {
        0.0
    } else {
        w
    }
}

/// Shortest displacement between two coordinates on a circle of length `L`.
#[inline(always)]
fn axis_gap(a: f64, b: f64, box_side: f64) -> f64 {
    let d = (a - b).abs();
    d.min(box_side - d)
}

/// Squared periodic distance; the workhorse of every in-range test.
#[inline(always)]
pub fn periodic_dist2(a: Position, b: Position, box_side: f64) -> f64 {
    let dx = axis_gap(a.x, b.x, box_side);
    let dy = axis_gap(a.y, b.y, box_side);
    dx * dx + dy * dy
}

/// Periodic (torus) distance between two points of `[0, L)^2`.
pub fn periodic_distance(a: Position, b: Position, box_side: f64) -> f64 {
    periodic_dist2(a, b, box_side).sqrt()
}

/// Step potential: 1 for `r <= 1` (boundary included), 0 beyond.
pub fn pair_potential(r: f64) -> f64 {
    if r <= INTERACTION_RADIUS {
        1.0
    } else {
        0.0
    }
}

/// Probability `1 - exp(-phi(r)/T)` that a pair at distance `r` is joined by
/// an edge in the random-cluster representation. At `T = 0` this is the
/// indicator of `r <= 1`.
pub fn edge_probability(r: f64, temperature: f64) -> f64 {
    if pair_potential(r) == 0.0 {
        return 0.0;
    }
    if temperature == 0.0 {
        1.0
    } else {
        -(-1.0 / temperature).exp_m1()
    }
}

/// Thinning survival probability for a point with `n` interacting neighbors
/// of other types: `exp(-n/T)`, degenerating to the indicator of `n = 0` at
/// `T = 0`.
#[inline(always)]
pub fn exclusion_from_count(n: usize, temperature: f64) -> f64 {
    if temperature == 0.0 {
        if n == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        (-(n as f64) / temperature).exp()
    }
}

/// Probability that a candidate point at `x` survives thinning against the
/// point set `others`.
pub fn exclusion_probability(
    x: Position,
    others: &[Position],
    box_side: f64,
    temperature: f64,
) -> f64 {
    let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
    let n = others
        .iter()
        .filter(|&&y| periodic_dist2(x, y, box_side) <= r2)
        .count();
    exclusion_from_count(n, temperature)
}

/// A finite colored configuration: particle positions together with type
/// labels in `1..=q`. Stored as parallel arrays; indices into them are the
/// particle identifiers used throughout the crate.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColoredConfiguration {
    positions: Vec<Position>,
    labels: Vec<u16>,
}

impl ColoredConfiguration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            positions: Vec::with_capacity(n),
            labels: Vec::with_capacity(n),
        }
    }

    pub fn from_parts(positions: Vec<Position>, labels: Vec<u16>) -> Self {
        assert_eq!(positions.len(), labels.len());
        Self { positions, labels }
    }

    pub fn push(&mut self, pos: Position, label: u16) {
        self.positions.push(pos);
        self.labels.push(label);
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    pub fn position(&self, i: usize) -> Position {
        self.positions[i]
    }

    pub fn label(&self, i: usize) -> u16 {
        self.labels[i]
    }

    /// Remove particle `i` in O(1), moving the last particle into its slot.
    pub fn swap_remove(&mut self, i: usize) {
        self.positions.swap_remove(i);
        self.labels.swap_remove(i);
    }

    pub fn set_label(&mut self, i: usize, label: u16) {
        self.labels[i] = label;
    }

    /// Particles of one type, in index order.
    pub fn of_type(&self, a: u16) -> impl Iterator<Item = (usize, Position)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter(move |(_, &l)| l == a)
            .map(|(i, _)| (i, self.positions[i]))
    }

    /// Every label within `1..=q`?
    pub fn labels_valid(&self, q: u16) -> bool {
        self.labels.iter().all(|&l| l >= 1 && l <= q)
    }

    /// Hard-core check: no unlike-type pair within the interaction radius.
    /// Quadratic scan; meant for validation and tests, not hot paths.
    pub fn is_hard_core_valid(&self, box_side: f64) -> bool {
        let r2 = INTERACTION_RADIUS * INTERACTION_RADIUS;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.labels[i] != self.labels[j]
                    && periodic_dist2(self.positions[i], self.positions[j], box_side) <= r2
                {
                    return false;
                }
            }
        }
        true
    }
}

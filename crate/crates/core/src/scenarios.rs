//! Hand-built hard-core configurations with known dissociation behavior.
//!
//! These are deliberately artificial: walls of blocker particles carve the
//! free space of one small cluster into shapes whose dissociation
//! probability is either exact by symmetry or checkable by quadrature.
//! They are shared by the test suites and benchmarks; nothing here is used
//! by the simulation itself.

use crate::model::{ColoredConfiguration, ModelParams, Position};

/// A configuration with one distinguished two-particle cluster whose free
/// space is fully contained in `window`.
pub struct DissocScenario {
    pub config: ColoredConfiguration,
    pub params: ModelParams,
    /// Indices of the distinguished cluster.
    pub cluster: Vec<u32>,
    /// Axis-aligned window (x0, x1, y0, y1) containing the whole free
    /// space, in raw coordinates.
    pub window: (f64, f64, f64, f64),
    /// Centers of the free-space pockets (empty for irregular shapes).
    pub pocket_centers: Vec<Position>,
}

const BOX: f64 = 8.0;
const RING_RADIUS: f64 = 1.3;
const RING_POINTS: usize = 64;
const FILLER_SPACING: f64 = 0.5;
const FILLER_EXCLUSION: f64 = 1.35;
/// Every free point lies within this distance of a pocket center.
pub const POCKET_BOUND: f64 = 0.32;

fn ring(config: &mut ColoredConfiguration, center: (f64, f64)) {
    for j in 0..RING_POINTS {
        let theta = 2.0 * std::f64::consts::PI * (j as f64 + 0.5) / RING_POINTS as f64;
        config.push(
            Position {
                x: center.0 + RING_RADIUS * theta.cos(),
                y: center.1 + RING_RADIUS * theta.sin(),
            },
            1,
        );
    }
}

/// Walled pockets: three rings of blockers around the centers
/// `(2.75, 4)`, `(5.25, 4)` and `(4, 6.5)`, with the rest of the box
/// covered by a filler grid. Each ring encloses a pocket of diameter
/// well under the interaction radius; pairwise pocket distances exceed
/// it. The distinguished cluster is a bonded pair sitting in the first
/// pocket.
///
/// By default the third pocket is plugged by a particle at its center, so
/// the free space is exactly two congruent pockets, mirror images in the
/// line `x = 4`: rethrowing the pair splits it exactly half the time.
/// With `open_third_pocket` the plug is omitted and a third, slightly
/// larger pocket appears, which strictly raises the split probability.
/// With `drop_redundant_filler` one filler particle whose covered disk is
/// also covered by its four grid neighbors is omitted: the free space is
/// pointwise unchanged.
pub fn pocket_scenario(open_third_pocket: bool, drop_redundant_filler: bool) -> DissocScenario {
    let centers = [(2.75, 4.0), (5.25, 4.0), (4.0, 6.5)];
    let mut config = ColoredConfiguration::new();
    for &c in &centers {
        ring(&mut config, c);
    }
    if !open_third_pocket {
        config.push(Position { x: centers[2].0, y: centers[2].1 }, 1);
    }
    let cells = (BOX / FILLER_SPACING) as usize;
    for i in 0..cells {
        for j in 0..cells {
            let x = FILLER_SPACING * (i as f64 + 0.5);
            let y = FILLER_SPACING * (j as f64 + 0.5);
            if drop_redundant_filler && x == 1.25 && y == 1.25 {
                continue;
            }
            let near = centers.iter().any(|&(cx, cy)| {
                let dx = x - cx;
                let dy = y - cy;
                dx * dx + dy * dy <= FILLER_EXCLUSION * FILLER_EXCLUSION
            });
            if !near {
                config.push(Position { x, y }, 1);
            }
        }
    }
    let first = config.len() as u32;
    config.push(Position { x: 2.75, y: 4.0 }, 2);
    config.push(Position { x: 2.85, y: 4.0 }, 2);
    DissocScenario {
        config,
        params: ModelParams::new(2, 1.0, 0.0, BOX).unwrap(),
        cluster: vec![first, first + 1],
        window: (2.3, 5.7, 3.5, 7.0),
        pocket_centers: if open_third_pocket {
            centers.iter().map(|&(x, y)| Position { x, y }).collect()
        } else {
            centers[..2].iter().map(|&(x, y)| Position { x, y }).collect()
        },
    }
}

fn rect_dist2(x: f64, y: f64, rect: (f64, f64, f64, f64)) -> f64 {
    let (x0, x1, y0, y1) = rect;
    let dx = (x0 - x).max(x - x1).max(0.0);
    let dy = (y0 - y).max(y - y1).max(0.0);
    dx * dx + dy * dy
}

/// An irregular free space: blockers on a fine grid everywhere except
/// within distance 1 of an L-shaped union of two rectangles, so the free
/// space is that L plus a fuzzy moat. The distinguished cluster is a
/// bonded pair inside the L. No symmetry gives the split probability here;
/// it is meant to be checked against quadrature.
pub fn ell_scenario() -> DissocScenario {
    let arms = [(2.0, 4.5, 2.0, 2.4), (2.0, 2.4, 2.0, 4.5)];
    let mut config = ColoredConfiguration::new();
    let spacing = 0.2;
    let cells = (BOX / spacing) as usize;
    for i in 0..cells {
        for j in 0..cells {
            let x = spacing * (i as f64 + 0.5);
            let y = spacing * (j as f64 + 0.5);
            if arms.iter().all(|&rect| rect_dist2(x, y, rect) > 1.0) {
                config.push(Position { x, y }, 1);
            }
        }
    }
    let first = config.len() as u32;
    config.push(Position { x: 2.2, y: 2.2 }, 2);
    config.push(Position { x: 2.5, y: 2.2 }, 2);
    DissocScenario {
        config,
        params: ModelParams::new(2, 1.0, 0.0, BOX).unwrap(),
        cluster: vec![first, first + 1],
        window: (0.75, 5.75, 0.75, 5.75),
        pocket_centers: vec![],
    }
}

//! Activity scans: run chains over a z grid and a box-side schedule from
//! both initial conditions, then classify the transition from the branch
//! statistics. Chains fan out to a worker pool; each carries a stream id
//! derived from its grid coordinates, so parallel and serial scans write
//! identical files.

use anyhow::bail;
use rayon::prelude::*;

use contpotts::{InitialCondition, ModelParams, SummaryStats, SweepVariant};

use crate::run::{run_chain, RunConfig};

/// Two equilibrated branches must differ by this many combined standard
/// errors before a coexistence window is declared.
pub const FIRST_ORDER_GAP_SIGMA: f64 = 5.0;

/// Density-slope curves of the two largest boxes count as agreeing when
/// they match within this many combined standard errors.
pub const RHO_PRIME_AGREE_SIGMA: f64 = 2.0;

/// Refined grids extend this many steps to each side of the previous
/// estimate.
const REFINE_HALF_POINTS: i64 = 5;

/// Stream ids for scan chains sit above this base so they never collide
/// with the fixed ids used by single runs.
const SCAN_STREAM_BASE: u64 = 1 << 40;

/// A full scan: grid, box schedule, chain protocol, refinement depth.
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub q: u16,
    pub temperature: f64,
    pub z_min: f64,
    pub z_max: f64,
    pub z_step: f64,
    /// Box sides for the finite-size comparison, e.g. 16, 32, 64.
    pub l_schedule: Vec<u32>,
    pub variant: SweepVariant,
    pub burnin: u64,
    pub sweeps: u64,
    pub seed: u64,
    /// Refinement levels: each halves the grid step around the previous
    /// estimate and doubles every box side.
    pub refine: u32,
    /// Run ordered starts alongside the disordered branch. Without them a
    /// density gap cannot be detected.
    pub both_inits: bool,
}

impl ScanConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(self.z_min.is_finite() && self.z_min > 0.0) {
            bail!("z-min must be positive, got {}", self.z_min);
        }
        if !(self.z_max.is_finite() && self.z_max >= self.z_min) {
            bail!("z-max must be at least z-min, got {}", self.z_max);
        }
        if !(self.z_step.is_finite() && self.z_step > 0.0) {
            bail!("z-step must be positive, got {}", self.z_step);
        }
        if (self.z_max - self.z_min) / self.z_step > 65535.0 {
            bail!("activity grid has more than 65536 points");
        }
        if self.l_schedule.is_empty() {
            bail!("box schedule is empty");
        }
        if self.l_schedule.len() > 256 {
            bail!("box schedule has more than 256 entries");
        }
        if let Some(&l) = self.l_schedule.iter().find(|&&l| l < 2) {
            bail!("box side must be at least 2, got {l}");
        }
        if self.sweeps < 20 || self.sweeps % 10 != 0 {
            bail!(
                "scan sweeps must be at least 20 and divisible by 10, got {}",
                self.sweeps
            );
        }
        if self.refine > 8 {
            bail!("at most 8 refinement levels, got {}", self.refine);
        }
        Ok(())
    }
}

/// The equidistant grid `z_min, z_min + step, ..` up to and including
/// `z_max` (within a relative tolerance for accumulated rounding).
pub fn z_grid(z_min: f64, z_max: f64, z_step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let z = z_min + f64::from(k) * z_step;
        if z > z_max + z_step * 1e-9 {
            break;
        }
        out.push(z);
        k += 1;
    }
    out
}

/// One chain's contribution to a scan.
#[derive(Debug, Clone)]
pub struct ChainResult {
    pub level: u32,
    pub z: f64,
    pub l: u32,
    pub init: InitialCondition,
    pub equilibrated: bool,
    pub summary: SummaryStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransitionOrder {
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Evidence {
    DensityGap,
    RhoPrimePeak,
}

/// Equilibration status of one scanned branch, echoed into the verdict so
/// exclusions are auditable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchFlag {
    pub z: f64,
    pub l: u32,
    pub init: InitialCondition,
    pub equilibrated: bool,
}

/// Where the transition sits and what kind it is.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionVerdict {
    pub order: TransitionOrder,
    pub z_c: f64,
    pub z_c_error: f64,
    pub evidence: Evidence,
    pub branch_flags: Vec<BranchFlag>,
    /// Grid points at the largest box where no branch equilibrated.
    pub inconclusive_z: Vec<f64>,
}

fn init_rank(init: InitialCondition) -> u8 {
    match init {
        InitialCondition::Ordered => 0,
        InitialCondition::DisorderedRandom => 1,
        InitialCondition::DisorderedCrystal => 2,
    }
}

fn combined(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

/// Classify one level's results. `rows` must all come from the same grid;
/// the verdict does not depend on their order.
pub fn classify(rows: &[ChainResult], z_step: f64) -> anyhow::Result<TransitionVerdict> {
    if rows.is_empty() {
        bail!("no chains to classify");
    }
    if !(z_step.is_finite() && z_step > 0.0) {
        bail!("grid step must be positive, got {z_step}");
    }
    let mut sorted: Vec<&ChainResult> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.z.total_cmp(&b.z)
            .then(a.l.cmp(&b.l))
            .then(init_rank(a.init).cmp(&init_rank(b.init)))
    });

    let branch_flags: Vec<BranchFlag> = sorted
        .iter()
        .map(|r| BranchFlag {
            z: r.z,
            l: r.l,
            init: r.init,
            equilibrated: r.equilibrated,
        })
        .collect();

    let mut ls: Vec<u32> = sorted.iter().map(|r| r.l).collect();
    ls.sort_unstable();
    ls.dedup();
    let l_max = *ls.last().unwrap();
    let l_second = (ls.len() >= 2).then(|| ls[ls.len() - 2]);

    // Group the largest box's rows by grid point.
    let top: Vec<&ChainResult> = sorted.iter().copied().filter(|r| r.l == l_max).collect();
    let mut groups: Vec<(f64, Vec<&ChainResult>)> = Vec::new();
    for r in top {
        match groups.last_mut() {
            Some((z, g)) if z.total_cmp(&r.z).is_eq() => g.push(r),
            _ => groups.push((r.z, vec![r])),
        }
    }

    let mut inconclusive_z = Vec::new();
    let mut window: Vec<f64> = Vec::new();
    for (z, group) in &groups {
        if group.iter().all(|r| !r.equilibrated) {
            inconclusive_z.push(*z);
            continue;
        }
        let ordered = group
            .iter()
            .find(|r| r.init == InitialCondition::Ordered && r.equilibrated);
        let disordered = group
            .iter()
            .find(|r| r.init != InitialCondition::Ordered && r.equilibrated);
        if let (Some(o), Some(d)) = (ordered, disordered) {
            let gap = (o.summary.rho.mean - d.summary.rho.mean).abs();
            let sigma = combined(o.summary.rho.stderr, d.summary.rho.stderr);
            if gap > FIRST_ORDER_GAP_SIGMA * sigma {
                window.push(*z);
            }
        }
    }

    if let (Some(&lo), Some(&hi)) = (window.first(), window.last()) {
        return Ok(TransitionVerdict {
            order: TransitionOrder::First,
            z_c: 0.5 * (lo + hi),
            z_c_error: (hi - lo) + z_step,
            evidence: Evidence::DensityGap,
            branch_flags,
            inconclusive_z,
        });
    }

    // Second-order path: locate the density-slope peak of the largest box,
    // reading each grid point from its preferred equilibrated branch.
    let slope_curve = |l: u32| -> Vec<(f64, f64, Option<f64>)> {
        let mut curve = Vec::new();
        let mut at: Vec<&ChainResult> = sorted.iter().copied().filter(|r| r.l == l).collect();
        at.sort_by(|a, b| a.z.total_cmp(&b.z).then(init_rank(a.init).cmp(&init_rank(b.init))));
        let mut i = 0;
        while i < at.len() {
            let z = at[i].z;
            let mut j = i;
            while j < at.len() && at[j].z.total_cmp(&z).is_eq() {
                j += 1;
            }
            let group = &at[i..j];
            let pick = group
                .iter()
                .find(|r| r.init != InitialCondition::Ordered && r.equilibrated)
                .or_else(|| {
                    group
                        .iter()
                        .find(|r| r.init == InitialCondition::Ordered && r.equilibrated)
                });
            if let Some(r) = pick {
                if let Some(sl) = &r.summary.rho_prime {
                    curve.push((z, sl.value, sl.stderr));
                }
            }
            i = j;
        }
        curve
    };

    let top_curve = slope_curve(l_max);
    let Some(&(peak_z, _, _)) = top_curve
        .iter()
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)))
    else {
        bail!("no equilibrated measurements to classify");
    };

    let z_c_error = match l_second {
        None => z_step,
        Some(l2) => {
            let second_curve = slope_curve(l2);
            let agree = |z: f64, v1: f64, s1: Option<f64>| -> bool {
                let near = second_curve
                    .iter()
                    .find(|(z2, _, _)| (z2 - z).abs() <= z_step * 1e-6);
                match (near, s1) {
                    (Some(&(_, v2, Some(s2))), Some(s1)) => {
                        (v1 - v2).abs() <= RHO_PRIME_AGREE_SIGMA * combined(s1, s2)
                    }
                    _ => false,
                }
            };
            let mut k = 1u32;
            loop {
                let delta = f64::from(k) * z_step;
                let cutoff = peak_z + delta - z_step * 1e-9;
                let all_ok = top_curve
                    .iter()
                    .filter(|(z, _, _)| *z >= cutoff)
                    .all(|&(z, v, s)| agree(z, v, s));
                if all_ok {
                    break delta;
                }
                k += 1;
            }
        }
    };

    Ok(TransitionVerdict {
        order: TransitionOrder::Second,
        z_c: peak_z,
        z_c_error,
        evidence: Evidence::RhoPrimePeak,
        branch_flags,
        inconclusive_z,
    })
}

fn disordered_init(temperature: f64) -> InitialCondition {
    if temperature == 0.0 {
        // A random-type Poisson start violates the hard-core constraint;
        // the loose crystal is a valid maximally mixed start.
        InitialCondition::DisorderedCrystal
    } else {
        InitialCondition::DisorderedRandom
    }
}

struct Job {
    z: f64,
    l: u32,
    init: InitialCondition,
    stream: u64,
}

fn run_level(
    config: &ScanConfig,
    level: u32,
    grid: &[f64],
    schedule: &[u32],
) -> anyhow::Result<Vec<ChainResult>> {
    let mut inits = Vec::new();
    if config.both_inits {
        inits.push(InitialCondition::Ordered);
    }
    inits.push(disordered_init(config.temperature));

    let mut jobs = Vec::with_capacity(grid.len() * schedule.len() * inits.len());
    for (zi, &z) in grid.iter().enumerate() {
        for (li, &l) in schedule.iter().enumerate() {
            for (ii, &init) in inits.iter().enumerate() {
                let stream = SCAN_STREAM_BASE
                    | (u64::from(level) << 32)
                    | ((zi as u64) << 16)
                    | ((li as u64) << 8)
                    | ii as u64;
                jobs.push(Job { z, l, init, stream });
            }
        }
    }
    eprintln!(
        "scan level {level}: {} chains ({} activities x {} boxes x {} starts)",
        jobs.len(),
        grid.len(),
        schedule.len(),
        inits.len()
    );

    jobs.par_iter()
        .map(|job| {
            let params = ModelParams::new(config.q, job.z, config.temperature, f64::from(job.l))?;
            let rc = RunConfig {
                params,
                init: job.init,
                variant: config.variant,
                burnin: config.burnin,
                sweeps: config.sweeps,
                seed: config.seed,
                stream: job.stream,
            };
            let out = run_chain(&rc)?;
            Ok(ChainResult {
                level,
                z: job.z,
                l: job.l,
                init: job.init,
                equilibrated: out.equilibrated,
                summary: out.summary,
            })
        })
        .collect()
}

/// Run the configured scan, refining `config.refine` times: every level
/// halves the grid step around the previous estimate and doubles the box
/// sides. Returns all chain results plus the last level's verdict.
pub fn scan_transition(config: &ScanConfig) -> anyhow::Result<(Vec<ChainResult>, TransitionVerdict)> {
    config.validate()?;
    let mut schedule = config.l_schedule.clone();
    schedule.sort_unstable();
    schedule.dedup();
    let mut step = config.z_step;
    let mut grid = z_grid(config.z_min, config.z_max, config.z_step);
    let mut all_rows = Vec::new();
    let mut verdict: Option<TransitionVerdict> = None;

    for level in 0..=config.refine {
        if level > 0 {
            let prev = verdict.as_ref().unwrap();
            step *= 0.5;
            for l in &mut schedule {
                *l = l.saturating_mul(2);
            }
            grid = (-REFINE_HALF_POINTS..=REFINE_HALF_POINTS)
                .map(|k| prev.z_c + k as f64 * step)
                .filter(|&z| z > 0.0)
                .collect();
        }
        if grid.is_empty() {
            bail!("refinement produced an empty activity grid");
        }
        let rows = run_level(config, level, &grid, &schedule)?;
        let v = classify(&rows, step)?;
        all_rows.extend(rows);
        verdict = Some(v);
    }

    Ok((all_rows, verdict.unwrap()))
}

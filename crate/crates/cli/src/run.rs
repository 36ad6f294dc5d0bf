//! Single-chain drivers: burn in, measure every sweep, reduce to blocked
//! summaries, and check for drift. One driver runs the cluster dynamics,
//! the other the independent Metropolis sampler; both produce the same
//! [`ChainOutput`] shape so downstream I/O and scans treat them alike.

use anyhow::bail;
use contpotts::{
    assign_colors, blocking_stats, cluster_size_histogram, metropolis_step, scan_clusters,
    small_cluster_distribution, summarize, sweep_random_scan, sweep_systematic,
    union_find_clusters, ChainState, ColoredConfiguration, DissocSettings, DissociationReport,
    Error, GraphState, InitialCondition, ModelParams, RngStream, SummaryStats, SweepRecord,
    SweepVariant, BLOCKS,
};

/// Nominal strength of the drift flag: the tail mass of a two-sided
/// 4-sigma normal rule. The working threshold is the matching Student-t
/// quantile at the blocking degrees of freedom.
pub const EQUILIBRATION_SIGMA: f64 = 4.0;

/// Salt for the RNG stream that drives dissociation sampling after a
/// chain, so the chain itself is unaffected by whether diagnostics run.
const DISSOC_SALT: u64 = 0xD15C;

/// Salt for the edge draws that turn Metropolis configurations into
/// cluster graphs for measurement.
const ORACLE_GRAPH_SALT: u64 = 0x6EA9;

/// Everything one chain needs. `sweeps` is the measured segment; `burnin`
/// sweeps run first and are discarded.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: ModelParams,
    pub init: InitialCondition,
    pub variant: SweepVariant,
    pub burnin: u64,
    pub sweeps: u64,
    pub seed: u64,
    /// Stream id separating chains that share a seed (scans).
    pub stream: u64,
}

impl RunConfig {
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.sweeps < 10 || self.sweeps % 10 != 0 {
            bail!(
                "sweeps must be at least 10 and divisible by 10, got {}",
                self.sweeps
            );
        }
        Ok(())
    }
}

/// Measured chain: per-sweep records, their blocked summary, mean cluster
/// histograms over the measured segment, the drift flag, and the final
/// configuration (for dissociation diagnostics).
#[derive(Debug, Clone)]
pub struct ChainOutput {
    pub records: Vec<SweepRecord>,
    pub summary: SummaryStats,
    /// Mean of the per-sweep cluster size histograms, over non-empty sweeps.
    pub histogram: Option<[f64; 100]>,
    /// Mean of the per-sweep small-cluster weights, over non-empty sweeps.
    pub small_clusters: Option<[f64; 100]>,
    pub equilibrated: bool,
    pub final_config: ColoredConfiguration,
}

/// Accumulates elementwise means of optional per-sweep histograms.
struct HistMean {
    sum: [f64; 100],
    count: u64,
}

impl HistMean {
    fn new() -> Self {
        Self {
            sum: [0.0; 100],
            count: 0,
        }
    }

    fn add(&mut self, h: Option<[f64; 100]>) {
        if let Some(h) = h {
            for (s, v) in self.sum.iter_mut().zip(h.iter()) {
                *s += v;
            }
            self.count += 1;
        }
    }

    fn mean(&self) -> Option<[f64; 100]> {
        if self.count == 0 {
            return None;
        }
        let mut out = self.sum;
        for v in &mut out {
            *v /= self.count as f64;
        }
        Some(out)
    }
}

/// Student-t two-sided quantiles carrying the same tail mass as the
/// normal rule in [`EQUILIBRATION_SIGMA`], for 9..=18 degrees of freedom.
/// Blocking stderrs rest on only `BLOCKS - 1` block means apiece, so a
/// plain 4-sigma cut against them over-flags; comparing against the
/// t quantile at the Welch degrees of freedom keeps the intended
/// false-flag rate.
const DRIFT_T_QUANTILES: [f64; 10] = [
    6.9986, 6.5672, 6.2416, 5.9878, 5.7847, 5.6186, 5.4804, 5.3636, 5.2638, 5.1774,
];

fn drift_threshold(e1: f64, e2: f64) -> f64 {
    let base = (BLOCKS - 1) as f64;
    let a = e1 * e1;
    let b = e2 * e2;
    let nu = (a + b) * (a + b) / ((a * a + b * b) / base);
    if !nu.is_finite() {
        return DRIFT_T_QUANTILES[0];
    }
    let lo = DRIFT_T_QUANTILES.len() - 1;
    let pos = (nu - base).clamp(0.0, lo as f64);
    let i = pos.floor() as usize;
    let frac = pos - i as f64;
    if i >= lo {
        DRIFT_T_QUANTILES[lo]
    } else {
        DRIFT_T_QUANTILES[i] * (1.0 - frac) + DRIFT_T_QUANTILES[i + 1] * frac
    }
}

/// Flags drift: splits the series in half and compares the halves' blocked
/// means with a Welch t test at the strength of a two-sided 4-sigma rule.
/// Returns `Ok(true)` when the chain looks equilibrated. Errors on series
/// shorter than two blocks' worth per half.
pub fn equilibration_check(series: &[f64]) -> contpotts::Result<bool> {
    if series.len() < 2 * BLOCKS {
        return Err(Error::SeriesTooShort {
            need: 2 * BLOCKS,
            got: series.len(),
        });
    }
    let half = series.len() / 2;
    let a = blocking_stats(&series[..half], BLOCKS)?;
    let b = blocking_stats(&series[half..], BLOCKS)?;
    let gap = (a.mean - b.mean).abs();
    let sigma = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
    Ok(gap <= drift_threshold(a.stderr, b.stderr) * sigma)
}

/// Run one chain of the cluster dynamics: `burnin` discarded sweeps, then
/// `sweeps` measured ones. Fully deterministic given `(seed, stream)`.
pub fn run_chain(config: &RunConfig) -> anyhow::Result<ChainOutput> {
    config.validate()?;
    let params = &config.params;
    let rng = RngStream::new(config.seed, config.stream);
    let mut records = Vec::with_capacity(config.sweeps as usize);
    let mut hist = HistMean::new();
    let mut small = HistMean::new();

    let final_config = match config.variant {
        SweepVariant::Systematic => {
            let mut state = ChainState::new(params, config.init, rng)?;
            for _ in 0..config.burnin {
                sweep_systematic(&mut state, params);
            }
            for _ in 0..config.sweeps {
                let partition = sweep_systematic(&mut state, params);
                records.push(SweepRecord::measure(
                    state.sweep_index,
                    &partition,
                    state.config.positions(),
                    params.box_side,
                ));
                hist.add(cluster_size_histogram(&partition));
                small.add(small_cluster_distribution(&partition));
            }
            state.config
        }
        SweepVariant::RandomScan => {
            let mut rng = rng;
            let initial = contpotts::make_initial(config.init, params, &mut rng)?;
            let mut graph = GraphState::from_colored(&initial, params, &mut rng);
            let mut sweep_index = 0u64;
            let mut last_partition = None;
            for _ in 0..config.burnin {
                sweep_random_scan(&mut graph, params, &mut rng);
                sweep_index += 1;
            }
            for _ in 0..config.sweeps {
                let partition = sweep_random_scan(&mut graph, params, &mut rng);
                sweep_index += 1;
                records.push(SweepRecord::measure(
                    sweep_index,
                    &partition,
                    &graph.points,
                    params.box_side,
                ));
                hist.add(cluster_size_histogram(&partition));
                small.add(small_cluster_distribution(&partition));
                last_partition = Some(partition);
            }
            // Color the final graph so dissociation diagnostics can run on
            // it; cluster-uniform colors are consistent with the graph.
            let partition = last_partition
                .unwrap_or_else(|| union_find_clusters(&graph.points, &graph.edges));
            let labels = assign_colors(&partition, params.q, &mut rng);
            ColoredConfiguration::from_parts(graph.points, labels)
        }
    };

    let summary = summarize(&records, params.z, params.box_side, config.burnin as usize)?;
    let rho_series: Vec<f64> = records.iter().map(|r| r.rho).collect();
    // Series too short to test are left unflagged.
    let equilibrated = equilibration_check(&rho_series).unwrap_or(true);
    Ok(ChainOutput {
        records,
        summary,
        histogram: hist.mean(),
        small_clusters: small.mean(),
        equilibrated,
        final_config,
    })
}

/// How many Metropolis steps stand in for one sweep: on the order of the
/// number of points the cluster dynamics touches per sweep.
pub fn oracle_steps_per_sweep(params: &ModelParams) -> u64 {
    let raw = f64::from(params.q) * params.z * params.area();
    (raw.ceil() as u64).max(1)
}

/// Run the independent Metropolis sampler with the same measurement
/// protocol as [`run_chain`]. Starts from the empty configuration;
/// `config.init` and `config.variant` are ignored.
pub fn run_oracle(config: &RunConfig) -> anyhow::Result<ChainOutput> {
    config.validate()?;
    let params = &config.params;
    let mut rng = RngStream::new(config.seed, config.stream);
    let mut graph_rng = rng.derive(ORACLE_GRAPH_SALT);
    let mut state = ColoredConfiguration::new();
    let steps = oracle_steps_per_sweep(params);
    let mut records = Vec::with_capacity(config.sweeps as usize);
    let mut hist = HistMean::new();
    let mut small = HistMean::new();

    for _ in 0..config.burnin {
        for _ in 0..steps {
            metropolis_step(&mut state, params, &mut rng);
        }
    }
    for sweep in 1..=config.sweeps {
        for _ in 0..steps {
            metropolis_step(&mut state, params, &mut rng);
        }
        let graph = GraphState::from_colored(&state, params, &mut graph_rng);
        let partition = union_find_clusters(&graph.points, &graph.edges);
        records.push(SweepRecord::measure(
            config.burnin + sweep,
            &partition,
            &graph.points,
            params.box_side,
        ));
        hist.add(cluster_size_histogram(&partition));
        small.add(small_cluster_distribution(&partition));
    }

    let summary = summarize(&records, params.z, params.box_side, config.burnin as usize)?;
    let rho_series: Vec<f64> = records.iter().map(|r| r.rho).collect();
    let equilibrated = equilibration_check(&rho_series).unwrap_or(true);
    Ok(ChainOutput {
        records,
        summary,
        histogram: hist.mean(),
        small_clusters: small.mean(),
        equilibrated,
        final_config: state,
    })
}

/// Run a chain, then dissociation diagnostics on its final configuration.
/// The diagnostics use a stream derived from the chain's identity, so the
/// chain itself is byte-identical to a plain run.
pub fn run_dissoc(
    config: &RunConfig,
    settings: &DissocSettings,
) -> anyhow::Result<(ChainOutput, DissociationReport)> {
    let out = run_chain(config)?;
    let mut rng = RngStream::new(config.seed, config.stream).derive(DISSOC_SALT);
    let report = scan_clusters(&out.final_config, &config.params, settings, &mut rng)?;
    Ok((out, report))
}

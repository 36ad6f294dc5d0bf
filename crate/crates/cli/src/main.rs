//! `contpotts`: continuum q-state Potts simulator.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use contpotts::{DissocSettings, InitialCondition, ModelParams, SweepVariant};
use contpotts_cli::output::{
    dissoc_pairs, prefixed, summary_pairs, verdict_pairs, write_dissoc_csv, write_histogram,
    write_kv, write_scan_csv, write_small_clusters, write_timeseries,
};
use contpotts_cli::{run_chain, run_dissoc, run_oracle, scan_transition, RunConfig, ScanConfig};

#[derive(Parser)]
#[command(
    name = "contpotts",
    version,
    about = "Continuum q-state Potts / Widom-Rowlinson simulator with cluster dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one chain; write time series, summary, and cluster histograms.
    Run(RunArgs),
    /// Scan an activity grid over a box schedule and classify the transition.
    Scan(ScanArgs),
    /// Run a T = 0 chain, then per-cluster dissociation diagnostics.
    Dissoc(DissocArgs),
    /// Run the independent Metropolis sampler with the same measurements.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Number of particle types.
    #[arg(long)]
    q: u16,
    /// Activity of each type.
    #[arg(long)]
    z: f64,
    /// Temperature; 0 is the hard-core model.
    #[arg(long = "T", default_value_t = 0.0)]
    temperature: f64,
    /// Box side length.
    #[arg(long = "L")]
    box_side: f64,
    /// Measured sweeps; at least 10 and divisible by 10.
    #[arg(long, default_value_t = 2500)]
    sweeps: u64,
    /// Discarded burn-in sweeps.
    #[arg(long, default_value_t = 250)]
    burnin: u64,
    /// RNG seed; fixed seeds reproduce output files byte for byte.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path prefix; files get .timeseries.csv, .summary.txt, ... appended.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum InitArg {
    #[default]
    Ordered,
    Disordered,
    Crystal,
}

impl From<InitArg> for InitialCondition {
    fn from(value: InitArg) -> Self {
        match value {
            InitArg::Ordered => InitialCondition::Ordered,
            InitArg::Disordered => InitialCondition::DisorderedRandom,
            InitArg::Crystal => InitialCondition::DisorderedCrystal,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    #[default]
    Systematic,
    Random,
}

impl From<VariantArg> for SweepVariant {
    fn from(value: VariantArg) -> Self {
        match value {
            VariantArg::Systematic => SweepVariant::Systematic,
            VariantArg::Random => SweepVariant::RandomScan,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial condition.
    #[arg(long, value_enum, default_value_t)]
    init: InitArg,
    /// Sweep variant.
    #[arg(long, value_enum, default_value_t)]
    variant: VariantArg,
}

#[derive(Args)]
struct DissocArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Monte Carlo trials per cluster for the dissociation probability.
    #[arg(long, default_value_t = 1000)]
    trials: u32,
    /// Hit-or-miss samples per cluster for the free volume.
    #[arg(long, default_value_t = 10_000)]
    volume_samples: u32,
    /// Proposal budget per free-space point before giving up.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Cluster size that counts as a large-cluster event.
    #[arg(long, default_value_t = 1000)]
    threshold: u32,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScanArgs {
    /// Number of particle types.
    #[arg(long)]
    q: u16,
    /// Temperature; 0 is the hard-core model.
    #[arg(long = "T", default_value_t = 0.0)]
    temperature: f64,
    /// Lowest activity on the grid.
    #[arg(long)]
    z_min: f64,
    /// Highest activity on the grid.
    #[arg(long)]
    z_max: f64,
    /// Grid spacing.
    #[arg(long)]
    z_step: f64,
    /// Comma-separated box sides, e.g. 16,32,64.
    #[arg(long = "L-schedule", value_delimiter = ',', required = true)]
    l_schedule: Vec<u32>,
    /// Refinement levels: each halves the step and doubles the boxes.
    #[arg(long, default_value_t = 0)]
    refine: u32,
    /// Measured sweeps per chain; at least 20 and divisible by 10.
    #[arg(long, default_value_t = 2500)]
    sweeps: u64,
    /// Discarded burn-in sweeps per chain.
    #[arg(long, default_value_t = 250)]
    burnin: u64,
    /// RNG seed shared by all chains; each chain gets its own stream.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sweep variant.
    #[arg(long, value_enum, default_value_t)]
    variant: VariantArg,
    /// Skip the ordered starts (disables density-gap detection).
    #[arg(long)]
    disordered_only: bool,
    /// Output path prefix.
    #[arg(long)]
    out: PathBuf,
}

/// Print a status line, ignoring a closed stdout (e.g. piped to `head`).
fn say(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut out = std::io::stdout();
    let _ = writeln!(out, "{line}");
}

macro_rules! say {
    ($($arg:tt)*) => { say(format_args!($($arg)*)) };
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Dissoc(args) => cmd_dissoc(args),
        Command::Oracle(args) => cmd_oracle(args),
    }
}

fn run_config(common: &CommonArgs, init: InitArg, variant: VariantArg) -> anyhow::Result<RunConfig> {
    let params = ModelParams::new(common.q, common.z, common.temperature, common.box_side)?;
    Ok(RunConfig {
        params,
        init: init.into(),
        variant: variant.into(),
        burnin: common.burnin,
        sweeps: common.sweeps,
        seed: common.seed,
        stream: 0,
    })
}

fn write_chain_files(
    prefix: &std::path::Path,
    command: &str,
    config: &RunConfig,
    out: &contpotts_cli::ChainOutput,
) -> anyhow::Result<()> {
    write_timeseries(&prefixed(prefix, ".timeseries.csv"), &out.records)?;
    write_kv(
        &prefixed(prefix, ".summary.txt"),
        &summary_pairs(command, config, out),
    )?;
    write_histogram(&prefixed(prefix, ".histogram.csv"), out.histogram.as_ref())?;
    write_small_clusters(
        &prefixed(prefix, ".smallclusters.csv"),
        out.small_clusters.as_ref(),
    )?;
    Ok(())
}

fn report_chain(out: &contpotts_cli::ChainOutput, prefix: &std::path::Path) {
    let s = &out.summary;
    say!("rho = {} +/- {}", s.rho.mean, s.rho.stderr);
    say!("gamma = {} +/- {}", s.gamma.mean, s.gamma.stderr);
    if let Some(rp) = &s.rho_prime {
        say!("rho_prime = {} +/- {}", rp.value, contpotts_cli::output::fmt_opt(rp.stderr));
    }
    say!("equilibrated = {}", out.equilibrated);
    say!("wrote {}.{{timeseries.csv,summary.txt,histogram.csv,smallclusters.csv}}", prefix.display());
}

fn cmd_run(args: RunArgs) -> anyhow::Result<()> {
    let config = run_config(&args.common, args.init, args.variant)?;
    let out = run_chain(&config)?;
    write_chain_files(&args.common.out, "run", &config, &out)?;
    report_chain(&out, &args.common.out);
    Ok(())
}

fn cmd_oracle(args: OracleArgs) -> anyhow::Result<()> {
    let config = run_config(&args.common, InitArg::Ordered, VariantArg::Systematic)?;
    let out = run_oracle(&config)?;
    write_chain_files(&args.common.out, "oracle", &config, &out)?;
    report_chain(&out, &args.common.out);
    Ok(())
}

fn cmd_dissoc(args: DissocArgs) -> anyhow::Result<()> {
    let config = run_config(&args.run.common, args.run.init, args.run.variant)?;
    let settings = DissocSettings {
        size_threshold: args.threshold,
        trials: args.trials,
        volume_samples: args.volume_samples,
        proposal_budget: args.budget,
    };
    let (out, report) = run_dissoc(&config, &settings)?;
    let prefix = &args.run.common.out;
    write_chain_files(prefix, "dissoc", &config, &out)?;
    write_dissoc_csv(&prefixed(prefix, ".dissoc.csv"), &report)?;
    write_kv(&prefixed(prefix, ".dissoc.txt"), &dissoc_pairs(&report))?;
    report_chain(&out, prefix);
    say!(
        "clusters = {}, large_cluster_event = {}, max_delta = {}",
        report.clusters.len(),
        report.large_cluster_event,
        report.max_delta
    );
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> anyhow::Result<()> {
    let config = ScanConfig {
        q: args.q,
        temperature: args.temperature,
        z_min: args.z_min,
        z_max: args.z_max,
        z_step: args.z_step,
        l_schedule: args.l_schedule.clone(),
        variant: args.variant.into(),
        burnin: args.burnin,
        sweeps: args.sweeps,
        seed: args.seed,
        refine: args.refine,
        both_inits: !args.disordered_only,
    };
    let (rows, verdict) = scan_transition(&config)?;
    write_scan_csv(&prefixed(&args.out, ".scan.csv"), &rows)?;
    write_kv(&prefixed(&args.out, ".verdict.txt"), &verdict_pairs(&verdict))?;
    for (k, v) in verdict_pairs(&verdict).iter().take(4) {
        say!("{k} = {v}");
    }
    say!("wrote {}.{{scan.csv,verdict.txt}}", args.out.display());
    Ok(())
}

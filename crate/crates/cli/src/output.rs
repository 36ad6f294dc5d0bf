//! The binary's file formats. Per-sweep time series, cluster histograms,
//! scan tables as comma-separated text; summaries and verdicts as flat
//! `key = value` records. Floats print in full double precision through
//! the standard shortest-round-trip formatter, so files are
//! locale-independent and byte-stable across runs.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::Context;

use contpotts::{
    DeltaOutcome, DissociationReport, InitialCondition, SweepRecord, SweepVariant,
};

use crate::run::{ChainOutput, RunConfig};
use crate::scan::{ChainResult, Evidence, TransitionOrder, TransitionVerdict};

/// `prefix` + `suffix` as a path: `out/run1` + `.summary.txt`.
pub fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}{}", prefix.display(), suffix))
}

pub fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "NA".into(),
    }
}

pub fn init_name(init: InitialCondition) -> &'static str {
    match init {
        InitialCondition::Ordered => "ordered",
        InitialCondition::DisorderedRandom => "disordered",
        InitialCondition::DisorderedCrystal => "crystal",
    }
}

pub fn variant_name(variant: SweepVariant) -> &'static str {
    match variant {
        SweepVariant::Systematic => "systematic",
        SweepVariant::RandomScan => "random",
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// `sweep,N,rho,gamma,dperc`, one row per measured sweep.
pub fn write_timeseries(path: &Path, records: &[SweepRecord]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "sweep,N,rho,gamma,dperc")?;
    for r in records {
        writeln!(w, "{},{},{},{},{}", r.sweep, r.n, r.rho, r.gamma, fmt_opt(r.dperc))?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

/// Flat `key = value` record.
pub fn write_kv(path: &Path, pairs: &[(String, String)]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    for (k, v) in pairs {
        writeln!(w, "{k} = {v}")?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

/// The summary record for a chain: config echo, then blocked statistics.
/// The output prefix is deliberately not echoed, so runs that differ only
/// in where they write are byte-identical.
pub fn summary_pairs(command: &str, config: &RunConfig, out: &ChainOutput) -> Vec<(String, String)> {
    let p = &config.params;
    let s = &out.summary;
    vec![
        ("command".into(), command.to_string()),
        ("q".into(), p.q.to_string()),
        ("z".into(), p.z.to_string()),
        ("T".into(), p.temperature.to_string()),
        ("L".into(), p.box_side.to_string()),
        ("init".into(), init_name(config.init).into()),
        ("variant".into(), variant_name(config.variant).into()),
        ("burnin".into(), config.burnin.to_string()),
        ("sweeps".into(), config.sweeps.to_string()),
        ("seed".into(), config.seed.to_string()),
        ("stream".into(), config.stream.to_string()),
        ("rho_mean".into(), s.rho.mean.to_string()),
        ("rho_stderr".into(), s.rho.stderr.to_string()),
        ("gamma_mean".into(), s.gamma.mean.to_string()),
        ("gamma_stderr".into(), s.gamma.stderr.to_string()),
        (
            "dperc_mean".into(),
            fmt_opt(s.dperc.as_ref().map(|b| b.mean)),
        ),
        (
            "dperc_stderr".into(),
            fmt_opt(s.dperc.as_ref().map(|b| b.stderr)),
        ),
        (
            "rho_prime".into(),
            fmt_opt(s.rho_prime.as_ref().map(|e| e.value)),
        ),
        (
            "rho_prime_stderr".into(),
            fmt_opt(s.rho_prime.as_ref().and_then(|e| e.stderr)),
        ),
        (
            "blocks_truncated".into(),
            (s.rho.truncated || s.gamma.truncated).to_string(),
        ),
        ("equilibrated".into(), out.equilibrated.to_string()),
    ]
}

/// `bin_low,bin_high,weight` over the 100 cluster-size bins; header only
/// when every measured sweep was empty.
pub fn write_histogram(path: &Path, hist: Option<&[f64; 100]>) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "bin_low,bin_high,weight")?;
    if let Some(hist) = hist {
        for (i, weight) in hist.iter().enumerate() {
            let lo = i as f64 / 100.0;
            let hi = (i + 1) as f64 / 100.0;
            writeln!(w, "{lo},{hi},{weight}")?;
        }
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

/// `size,weight` for cluster sizes 1 through 100.
pub fn write_small_clusters(path: &Path, weights: Option<&[f64; 100]>) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "size,weight")?;
    if let Some(weights) = weights {
        for (i, weight) in weights.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, weight)?;
        }
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

/// Per-cluster dissociation table.
pub fn write_dissoc_csv(path: &Path, report: &DissociationReport) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "root,size,free_volume,free_volume_stderr,delta,delta_stderr,trials,outcome"
    )?;
    for c in &report.clusters {
        let (trials, outcome) = match c.delta {
            DeltaOutcome::ExactZero => ("0".into(), "exact_zero"),
            DeltaOutcome::Estimated { trials, .. } => (trials.to_string(), "estimated"),
            DeltaOutcome::Undefined { .. } => ("NA".into(), "undefined"),
        };
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            c.root,
            c.size,
            c.free_volume,
            c.free_volume_stderr,
            fmt_opt(c.delta.value()),
            fmt_opt(c.delta.stderr()),
            trials,
            outcome
        )?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

pub fn dissoc_pairs(report: &DissociationReport) -> Vec<(String, String)> {
    vec![
        ("clusters".into(), report.clusters.len().to_string()),
        ("size_threshold".into(), report.size_threshold.to_string()),
        (
            "large_cluster_event".into(),
            report.large_cluster_event.to_string(),
        ),
        ("max_delta".into(), report.max_delta.to_string()),
    ]
}

/// One row per scanned chain, sorted by the caller.
pub fn write_scan_csv(path: &Path, rows: &[ChainResult]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(
        w,
        "level,z,L,init,equilibrated,rho,rho_stderr,gamma,gamma_stderr,rho_prime,rho_prime_stderr"
    )?;
    for r in rows {
        let s = &r.summary;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.level,
            r.z,
            r.l,
            init_name(r.init),
            r.equilibrated,
            s.rho.mean,
            s.rho.stderr,
            s.gamma.mean,
            s.gamma.stderr,
            fmt_opt(s.rho_prime.as_ref().map(|e| e.value)),
            fmt_opt(s.rho_prime.as_ref().and_then(|e| e.stderr)),
        )?;
    }
    w.flush().with_context(|| format!("writing {}", path.display()))
}

pub fn verdict_pairs(v: &TransitionVerdict) -> Vec<(String, String)> {
    let order = match v.order {
        TransitionOrder::First => "first",
        TransitionOrder::Second => "second",
    };
    let evidence = match v.evidence {
        Evidence::DensityGap => "density_gap",
        Evidence::RhoPrimePeak => "rho_prime_peak",
    };
    let mut pairs = vec![
        ("order".into(), order.to_string()),
        ("z_c".into(), v.z_c.to_string()),
        ("z_c_error".into(), v.z_c_error.to_string()),
        ("evidence".into(), evidence.to_string()),
        ("branches".into(), v.branch_flags.len().to_string()),
        (
            "nonequilibrated".into(),
            v.branch_flags
                .iter()
                .filter(|f| !f.equilibrated)
                .count()
                .to_string(),
        ),
    ];
    for f in v.branch_flags.iter().filter(|f| !f.equilibrated) {
        pairs.push((
            "nonequilibrated_branch".into(),
            format!("z={} L={} init={}", f.z, f.l, init_name(f.init)),
        ));
    }
    pairs.push(("inconclusive".into(), v.inconclusive_z.len().to_string()));
    for z in &v.inconclusive_z {
        pairs.push(("inconclusive_z".into(), z.to_string()));
    }
    pairs
}

//! The emitted file formats, checked line by line on small runs.

use std::fs;

use contpotts::{InitialCondition, ModelParams, SweepVariant};
use contpotts_cli::output::{
    prefixed, summary_pairs, write_histogram, write_kv, write_small_clusters, write_timeseries,
};
use contpotts_cli::{run_chain, RunConfig};

fn config(q: u16, z: f64, l: f64, sweeps: u64) -> RunConfig {
    RunConfig {
        params: ModelParams::new(q, z, 0.0, l).unwrap(),
        init: InitialCondition::DisorderedCrystal,
        variant: SweepVariant::Systematic,
        burnin: 5,
        sweeps,
        seed: 9,
        stream: 0,
    }
}

#[test]
fn timeseries_has_header_and_one_row_per_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let cfg = config(2, 1.0, 10.0, 30);
    let out = run_chain(&cfg).unwrap();
    let path = prefixed(&prefix, ".timeseries.csv");
    write_timeseries(&path, &out.records).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sweep,N,rho,gamma,dperc");
    assert_eq!(lines.len(), 31);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5);
        fields[0].parse::<u64>().unwrap();
        fields[1].parse::<usize>().unwrap();
        fields[2].parse::<f64>().unwrap();
        fields[3].parse::<f64>().unwrap();
        fields[4].parse::<f64>().unwrap();
    }
}

#[test]
fn small_boxes_write_na_for_the_undefined_reach() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("run");
    let cfg = config(2, 1.0, 6.0, 10);
    let out = run_chain(&cfg).unwrap();
    write_timeseries(&prefixed(&prefix, ".timeseries.csv"), &out.records).unwrap();
    let text = fs::read_to_string(prefixed(&prefix, ".timeseries.csv")).unwrap();
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",NA"), "line: {line}");
    }
    let pairs = summary_pairs("run", &cfg, &out);
    let lookup = |k: &str| {
        pairs
            .iter()
            .find(|(key, _)| key == k)
            .map(|(_, v)| v.clone())
            .unwrap()
    };
    assert_eq!(lookup("dperc_mean"), "NA");
    assert_eq!(lookup("dperc_stderr"), "NA");
}

#[test]
fn summary_echoes_config_and_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(3, 0.8, 12.0, 20);
    let out = run_chain(&cfg).unwrap();
    let path = dir.path().join("sub").join("deep").join("x.summary.txt");
    write_kv(&path, &summary_pairs("run", &cfg, &out)).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    for needle in [
        "command = run",
        "q = 3",
        "z = 0.8",
        "T = 0",
        "L = 12",
        "init = crystal",
        "variant = systematic",
        "burnin = 5",
        "sweeps = 20",
        "seed = 9",
        "stream = 0",
    ] {
        assert!(text.contains(needle), "missing {needle:?} in:\n{text}");
    }
    for key in [
        "rho_mean",
        "rho_stderr",
        "gamma_mean",
        "gamma_stderr",
        "rho_prime",
        "rho_prime_stderr",
        "blocks_truncated",
        "equilibrated",
    ] {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("{key} = "))),
            "missing key {key}"
        );
    }
}

#[test]
fn histogram_files_carry_bin_edges_and_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(2, 1.2, 10.0, 20);
    let out = run_chain(&cfg).unwrap();
    let hp = dir.path().join("h.histogram.csv");
    write_histogram(&hp, out.histogram.as_ref()).unwrap();
    let text = fs::read_to_string(&hp).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "bin_low,bin_high,weight");
    assert_eq!(lines.len(), 101);
    assert!(lines[1].starts_with("0,0.01,"));
    assert!(lines[100].starts_with("0.99,1,"));
    let mass: f64 = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((mass - 1.0).abs() < 1e-9, "mean histogram keeps unit mass");

    let sp = dir.path().join("h.smallclusters.csv");
    write_small_clusters(&sp, out.small_clusters.as_ref()).unwrap();
    let text = fs::read_to_string(&sp).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size,weight");
    assert_eq!(lines.len(), 101);
    assert!(lines[1].starts_with("1,"));
    assert!(lines[100].starts_with("100,"));
}

#[test]
fn chains_that_stay_empty_write_header_only_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(2, 1e-12, 2.0, 10);
    let out = run_chain(&cfg).unwrap();
    assert!(out.histogram.is_none());
    let hp = dir.path().join("e.histogram.csv");
    write_histogram(&hp, out.histogram.as_ref()).unwrap();
    assert_eq!(fs::read_to_string(&hp).unwrap(), "bin_low,bin_high,weight\n");
}

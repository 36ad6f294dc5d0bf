//! Classification logic on constructed scan rows: threshold behavior,
//! branch exclusion, and order invariance, all with hand-picked numbers.

use contpotts::{BlockingStats, InitialCondition, SlopeEstimate, SummaryStats};
use contpotts_cli::{classify, ChainResult, Evidence, TransitionOrder};

const STEP: f64 = 0.1;

fn stats(m: f64, s: f64) -> BlockingStats {
    BlockingStats {
        mean: m,
        stderr: s,
        truncated: false,
    }
}

fn row(
    z: f64,
    l: u32,
    init: InitialCondition,
    equilibrated: bool,
    rho: (f64, f64),
    rho_prime: Option<(f64, f64)>,
) -> ChainResult {
    ChainResult {
        level: 0,
        z,
        l,
        init,
        equilibrated,
        summary: SummaryStats {
            n0: 250,
            nm: 2500,
            rho: stats(rho.0, rho.1),
            gamma: stats(0.5, 0.01),
            dperc: None,
            rho_prime: rho_prime.map(|(v, s)| SlopeEstimate {
                value: v,
                stderr: Some(s),
            }),
        },
    }
}

fn ordered(z: f64, l: u32, rho: (f64, f64), rp: Option<(f64, f64)>) -> ChainResult {
    row(z, l, InitialCondition::Ordered, true, rho, rp)
}

fn disordered(z: f64, l: u32, rho: (f64, f64), rp: Option<(f64, f64)>) -> ChainResult {
    row(z, l, InitialCondition::DisorderedCrystal, true, rho, rp)
}

#[test]
fn branch_gap_at_one_grid_point_is_first_order() {
    let rows = vec![
        ordered(2.0, 8, (1.90, 0.01), None),
        disordered(2.0, 8, (1.905, 0.01), None),
        ordered(2.1, 8, (2.30, 0.01), None),
        disordered(2.1, 8, (2.00, 0.01), None),
        ordered(2.2, 8, (2.40, 0.01), None),
        disordered(2.2, 8, (2.395, 0.01), None),
    ];
    let v = classify(&rows, STEP).unwrap();
    assert_eq!(v.order, TransitionOrder::First);
    assert_eq!(v.evidence, Evidence::DensityGap);
    assert!((v.z_c - 2.1).abs() < 1e-12);
    assert!((v.z_c_error - STEP).abs() < 1e-12, "window of one point");
    assert!(v.inconclusive_z.is_empty());
}

#[test]
fn coexistence_window_spans_gapped_points() {
    let rows = vec![
        ordered(2.0, 8, (1.90, 0.01), None),
        disordered(2.0, 8, (1.905, 0.01), None),
        ordered(2.1, 8, (2.30, 0.01), None),
        disordered(2.1, 8, (2.00, 0.01), None),
        ordered(2.2, 8, (2.35, 0.01), None),
        disordered(2.2, 8, (2.05, 0.01), None),
    ];
    let v = classify(&rows, STEP).unwrap();
    assert_eq!(v.order, TransitionOrder::First);
    assert!((v.z_c - 2.15).abs() < 1e-12);
    assert!((v.z_c_error - (0.1 + STEP)).abs() < 1e-12);
}

#[test]
fn equal_branches_with_slope_peak_are_second_order() {
    let mut rows = Vec::new();
    let curve16 = [(1.0, 0.5), (1.5, 2.0), (2.0, 0.8)];
    let curve8 = [(1.0, 0.5), (1.5, 1.0), (2.0, 0.7)];
    for &(z, v) in &curve16 {
        rows.push(ordered(z, 16, (1.0, 0.01), Some((v, 0.05))));
        rows.push(disordered(z, 16, (1.0, 0.01), Some((v, 0.05))));
    }
    for &(z, v) in &curve8 {
        rows.push(ordered(z, 8, (1.0, 0.01), Some((v, 0.05))));
        rows.push(disordered(z, 8, (1.0, 0.01), Some((v, 0.05))));
    }
    let v = classify(&rows, 0.5).unwrap();
    assert_eq!(v.order, TransitionOrder::Second);
    assert_eq!(v.evidence, Evidence::RhoPrimePeak);
    assert!((v.z_c - 1.5).abs() < 1e-12);
    // One step past the peak the two boxes agree: 0.8 vs 0.7 within
    // 2 * sqrt(0.05^2 + 0.05^2).
    assert!((v.z_c_error - 0.5).abs() < 1e-12);
}

#[test]
fn persistent_box_disagreement_widens_the_error() {
    let mut rows = Vec::new();
    for &(z, v16, v8) in &[(1.0, 0.5, 0.5), (1.5, 2.0, 1.0), (2.0, 0.8, 0.3)] {
        rows.push(disordered(z, 16, (1.0, 0.01), Some((v16, 0.01))));
        rows.push(disordered(z, 8, (1.0, 0.01), Some((v8, 0.01))));
    }
    let v = classify(&rows, 0.5).unwrap();
    assert_eq!(v.order, TransitionOrder::Second);
    // 0.8 vs 0.3 disagrees at z = 2.0, so delta = 1 step fails and the
    // next step has nothing left to check.
    assert!((v.z_c_error - 1.0).abs() < 1e-12);
}

#[test]
fn verdict_ignores_row_order() {
    let mut rows = Vec::new();
    for &(z, v) in &[(1.0, 0.5), (1.5, 2.0), (2.0, 0.8)] {
        rows.push(ordered(z, 16, (1.0, 0.01), Some((v, 0.05))));
        rows.push(disordered(z, 16, (1.0, 0.01), Some((v + 0.01, 0.05))));
        rows.push(disordered(z, 8, (1.0, 0.01), Some((v * 0.6, 0.05))));
    }
    let forward = classify(&rows, 0.5).unwrap();
    rows.reverse();
    let backward = classify(&rows, 0.5).unwrap();
    assert_eq!(forward, backward);
}

#[test]
fn flagged_branches_never_enter_the_verdict() {
    // The ordered branch shows a huge gap at z = 1.5 but is flagged, so
    // no coexistence window may be declared from it.
    let rows = vec![
        row(
            1.0,
            8,
            InitialCondition::Ordered,
            true,
            (1.0, 0.01),
            Some((0.5, 0.05)),
        ),
        disordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05))),
        row(
            1.5,
            8,
            InitialCondition::Ordered,
            false,
            (9.0, 0.01),
            Some((99.0, 0.05)),
        ),
        disordered(1.5, 8, (1.0, 0.01), Some((2.0, 0.05))),
        row(
            2.0,
            8,
            InitialCondition::Ordered,
            true,
            (1.0, 0.01),
            Some((0.8, 0.05)),
        ),
        disordered(2.0, 8, (1.0, 0.01), Some((0.8, 0.05))),
    ];
    let v = classify(&rows, 0.5).unwrap();
    assert_eq!(v.order, TransitionOrder::Second);
    assert!((v.z_c - 1.5).abs() < 1e-12, "peak from the surviving branch");
    let flagged: Vec<_> = v.branch_flags.iter().filter(|f| !f.equilibrated).collect();
    assert_eq!(flagged.len(), 1);
    assert_eq!(flagged[0].init, InitialCondition::Ordered);
    assert!(v.inconclusive_z.is_empty());
}

#[test]
fn doubly_flagged_grid_points_are_inconclusive_but_not_fatal() {
    let rows = vec![
        ordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05))),
        disordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05))),
        row(1.5, 8, InitialCondition::Ordered, false, (2.0, 0.01), None),
        row(
            1.5,
            8,
            InitialCondition::DisorderedCrystal,
            false,
            (1.0, 0.01),
            None,
        ),
        ordered(2.0, 8, (1.0, 0.01), Some((0.9, 0.05))),
        disordered(2.0, 8, (1.0, 0.01), Some((0.9, 0.05))),
    ];
    let v = classify(&rows, 0.5).unwrap();
    assert_eq!(v.inconclusive_z, vec![1.5]);
    assert_eq!(v.order, TransitionOrder::Second);
}

#[test]
fn ordered_branch_fills_in_when_disordered_is_flagged() {
    let rows = vec![
        ordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05))),
        row(
            1.0,
            8,
            InitialCondition::DisorderedCrystal,
            false,
            (1.0, 0.01),
            Some((42.0, 0.05)),
        ),
        ordered(1.5, 8, (1.0, 0.01), Some((2.0, 0.05))),
        disordered(1.5, 8, (1.0, 0.01), Some((1.9, 0.05))),
    ];
    let v = classify(&rows, 0.5).unwrap();
    // Peak read from ordered 0.5 at z=1, disordered 1.9 at z=1.5.
    assert!((v.z_c - 1.5).abs() < 1e-12);
}

#[test]
fn single_box_schedules_fall_back_to_one_grid_step() {
    let rows = vec![
        disordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05))),
        disordered(1.5, 8, (1.0, 0.01), Some((2.0, 0.05))),
        disordered(2.0, 8, (1.0, 0.01), Some((0.8, 0.05))),
    ];
    let v = classify(&rows, 0.5).unwrap();
    assert_eq!(v.order, TransitionOrder::Second);
    assert!((v.z_c_error - 0.5).abs() < 1e-12);
}

#[test]
fn unusable_input_is_rejected() {
    assert!(classify(&[], 0.5).is_err());
    let rows = vec![
        row(1.0, 8, InitialCondition::Ordered, false, (1.0, 0.01), None),
        row(
            1.0,
            8,
            InitialCondition::DisorderedCrystal,
            false,
            (1.0, 0.01),
            None,
        ),
    ];
    assert!(classify(&rows, 0.5).is_err(), "nothing equilibrated");
    let ok = vec![disordered(1.0, 8, (1.0, 0.01), Some((0.5, 0.05)))];
    assert!(classify(&ok, 0.0).is_err(), "zero step");
}

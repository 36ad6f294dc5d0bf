//! Benchmarks for the hot paths of the simulator: full sweeps at a few
//! box sizes, grid construction, and cluster building.

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use std::hint::black_box;

use contpotts::{
    draw_edges, sample_poisson, sweep_systematic, union_find_clusters, ChainState,
    ColoredConfiguration, InitialCondition, ModelParams, Position, RngStream, SpatialGrid,
};

fn sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("sweep_systematic");
    group.sample_size(20);
    for (q, z, l) in [(2u16, 1.5, 16.0), (2, 1.5, 32.0), (10, 2.56, 32.0)] {
        let params = ModelParams { q, z, temperature: 0.0, box_side: l };
        let mut state = ChainState::new(
            &params,
            InitialCondition::DisorderedCrystal,
            RngStream::new(42, 0),
        )
        .unwrap();
        for _ in 0..20 {
            sweep_systematic(&mut state, &params);
        }
        group.bench_function(BenchmarkId::from_parameter(format!("q{q}_z{z}_L{l}")), |b| {
            b.iter(|| black_box(sweep_systematic(&mut state, &params)))
        });
    }
    group.finish();
}

fn grid_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("grid_build");
    for l in [16.0, 64.0] {
        let z = 1.5;
        let mut rng = RngStream::new(7, 0);
        let points = sample_poisson(z, l, &mut rng);
        group.bench_function(BenchmarkId::from_parameter(format!("L{l}")), |b| {
            b.iter(|| black_box(SpatialGrid::build_points(&points, z, l)))
        });
    }
    group.finish();
}

fn clusters(c: &mut Criterion) {
    let mut group = c.benchmark_group("clusters");
    let l = 32.0;
    let params = ModelParams { q: 1, z: 1.5, temperature: 0.0, box_side: l };
    let mut rng = RngStream::new(9, 0);
    let points: Vec<Position> = sample_poisson(params.z, l, &mut rng);
    let mut config = ColoredConfiguration::new();
    for &p in &points {
        config.push(p, 1);
    }
    let grid = SpatialGrid::build(&config, &params);
    let edges = draw_edges(&config, &grid, &params, &mut rng);
    group.bench_function("draw_edges_L32", |b| {
        b.iter_batched(
            || rng.derive(1),
            |mut r| black_box(draw_edges(&config, &grid, &params, &mut r)),
            BatchSize::SmallInput,
        )
    });
    group.bench_function("union_find_L32", |b| {
        b.iter(|| black_box(union_find_clusters(&points, &edges)))
    });
    group.finish();
}

criterion_group!(benches, sweep, grid_build, clusters);
criterion_main!(benches);

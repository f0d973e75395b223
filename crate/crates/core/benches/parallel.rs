use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mirrorpair::ot::{floyd_warshall, solve_entropic_with_cost, CostMatrix, Direction, EntropicConfig};
use mirrorpair::reflector::{export_sampling, GridSpec};
use mirrorpair::{design, Demo, DesignSettings, Exec, Kind};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn cost_assembly(c: &mut Criterion) {
    let (spec, _) = Demo::Gaussian2d.problem_with_cells(40).to_spec().unwrap();
    let mut group = c.benchmark_group("cost_assembly");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, spec.source.len()), |b| {
            b.iter(|| CostMatrix::quadratic(black_box(&spec.source), black_box(&spec.target), exec))
        });
    }
    group.finish();
}

fn envelope_eval(c: &mut Criterion) {
    let (spec, _) = Demo::Gaussian2d.problem_with_cells(12).to_spec().unwrap();
    let pair = design(&spec, Kind::TypeA, &DesignSettings::default()).unwrap().pair;
    let grid = GridSpec::covering(vec![0.0, 0.0], vec![1.0, 1.0], 128);
    let mut group = c.benchmark_group("envelope_eval");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, grid.len()), |b| {
            b.iter(|| export_sampling(black_box(&pair), &grid, &grid, exec).unwrap())
        });
    }
    group.finish();
}

fn shortest_paths(c: &mut Criterion) {
    let k = 300;
    let base: Vec<f64> = (0..k * k)
        .map(|e| {
            let (i, j) = (e / k, e % k);
            if i == j {
                0.0
            } else {
                ((i * 31 + j * 17) % 97) as f64 + 1.0
            }
        })
        .collect();
    let mut group = c.benchmark_group("floyd_warshall");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::new(name, k), |b| {
            b.iter(|| {
                let mut d = base.clone();
                floyd_warshall(&mut d, k, exec);
                d
            })
        });
    }
    group.finish();
}

fn sinkhorn(c: &mut Criterion) {
    let (spec, _) = Demo::Gaussian2d.problem_with_cells(16).to_spec().unwrap();
    let cost = CostMatrix::quadratic(&spec.source, &spec.target, Exec::Sequential);
    let mut group = c.benchmark_group("sinkhorn");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = EntropicConfig {
            epsilon_rel: 1e-2,
            max_iters: 200,
            tol: 0.0,
            exec,
        };
        group.bench_function(BenchmarkId::new(name, spec.source.len()), |b| {
            b.iter(|| solve_entropic_with_cost(&spec, &cost, Direction::MinCost, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cost_assembly, envelope_eval, shortest_paths, sinkhorn);
criterion_main!(benches);

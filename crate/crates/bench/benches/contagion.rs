use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use polya_core::exact::enumerate_joint;
use polya_core::graph::{generate, largest_eigenvalue, GraphKind, PowerIteration};
use polya_core::mass::ratio;
use polya_core::montecarlo::run_trials;
use polya_core::rng::trial_rng;
use polya_core::sis::sis_step;
use polya_core::{DeltaSchedule, MemoryMode, NetworkState, RunConfig, SisParams, SisState, UrnInit};

fn ba(nodes: usize) -> polya_core::Network {
    generate(&GraphKind::BarabasiAlbert { nodes, m: 2, seed: 1 }).unwrap()
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate_joint");
    let net = generate(&GraphKind::Cycle(4)).unwrap();
    let init = UrnInit::uniform(4, ratio(1, 1), ratio(2, 1)).unwrap();
    let sched = DeltaSchedule::constant(ratio(1, 1));
    for n in [2, 3, 4] {
        g.bench_with_input(BenchmarkId::new("c4_rational", n), &n, |b, &n| {
            b.iter(|| enumerate_joint(&net, &init, &sched, n).unwrap())
        });
    }
    let init = init.cast::<f64>();
    let sched = sched.cast::<f64>();
    g.bench_function("c4_f64/5", |b| b.iter(|| enumerate_joint(&net, &init, &sched, 5).unwrap()));
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sample_step");
    for (nodes, memory) in [(100, MemoryMode::Infinite), (100, MemoryMode::Finite(50)), (1000, MemoryMode::Infinite)] {
        let net = ba(nodes);
        let init = UrnInit::uniform(nodes, 1.0, 1.0).unwrap();
        let sched = DeltaSchedule::constant(1.0);
        let mut state = NetworkState::new(&net, &init, memory).unwrap();
        let mut rng = trial_rng(0, 0);
        let mut draws = vec![false; nodes];
        let mut probs = Vec::new();
        let label = format!("{nodes}_{}", memory.window().map_or("inf".to_string(), |m| m.to_string()));
        g.bench_function(label, |b| {
            b.iter(|| state.sample_step_into(&net, &sched, &mut rng, &mut draws, &mut probs))
        });
    }
    g.finish();
}

fn trials(c: &mut Criterion) {
    let mut g = c.benchmark_group("run_trials");
    g.sample_size(10);
    let net = ba(100);
    let cfg = RunConfig::new(net, UrnInit::uniform(100, 1.0, 1.0).unwrap(), DeltaSchedule::constant(1.0), 100, 256, 7);
    g.bench_function("ba100_256x100", |b| b.iter(|| run_trials(black_box(&cfg)).unwrap()));
    g.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("largest_eigenvalue");
    for nodes in [100, 1000] {
        let net = ba(nodes);
        g.bench_with_input(BenchmarkId::from_parameter(nodes), &net, |b, net| {
            b.iter(|| largest_eigenvalue(net, PowerIteration::default()).unwrap())
        });
    }
    g.finish();
}

fn sis(c: &mut Criterion) {
    let net = ba(1000);
    let state = SisState::new(vec![0.3; 1000]).unwrap();
    let params = SisParams::new(0.1, 0.2).unwrap();
    c.bench_function("sis_step/1000", |b| b.iter(|| sis_step(black_box(&state), &net, &params)));
}

criterion_group!(benches, enumeration, sampling, trials, spectrum, sis);
criterion_main!(benches);

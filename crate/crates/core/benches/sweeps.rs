//! Sequential against parallel execution for the main sweeps.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crlab::geodesic_lab::{cc_distance, closed_form_geodesic, GeodesicState, ShootingBudget};
use crlab::spectral_probe::spectrum_fragment;
use crlab::sphere_model::{SpherePoint, TangentVector};
use crlab::{run_suite, Config, Exec, RunOptions, SuiteName};

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn suites(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    let config = Config { trials: 20, ..Config::default() };
    for name in [SuiteName::Bochner, SuiteName::Lemmas] {
        for (label, exec) in STRATEGIES {
            let opts = RunOptions { exec, csv_dir: None };
            group.bench_with_input(BenchmarkId::new(name.to_string(), label), &opts, |bench, opts| {
                bench.iter(|| run_suite(name, &config, opts).unwrap())
            });
        }
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum_fragment");
    group.sample_size(10);
    for (label, exec) in STRATEGIES {
        group.bench_function(BenchmarkId::new("n2_degree4", label), |bench| {
            bench.iter(|| spectrum_fragment(2, 4, exec).unwrap())
        });
    }
    group.finish();
}

fn shooting(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = SpherePoint::random(1, &mut rng);
    let v = TangentVector::random_unit_horizontal(&x, &mut rng);
    let y = closed_form_geodesic(&GeodesicState::new(x.clone(), v, 0.7).unwrap(), 1.2).unwrap();
    let budget = ShootingBudget::default();
    let mut group = c.benchmark_group("cc_distance");
    group.sample_size(10);
    for (label, exec) in STRATEGIES {
        group.bench_function(label, |bench| bench.iter(|| cc_distance(&x, &y, &budget, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, suites, spectrum, shooting);
criterion_main!(benches);

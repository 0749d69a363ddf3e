use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nframes::dsub::DCat;
use nframes::exec::Exec;
use nframes::fincat::{closure_with, ClosureMode, MorphismClass};
use nframes::suites::{run_suite, SuiteConfig};

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn subdivision(c: &mut Criterion) {
    let mut group = c.benchmark_group("dsub_standard_2_cap3");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| DCat::standard(2, 3, exec).unwrap()));
    }
    group.finish();
}

fn two_of_six(c: &mut Criterion) {
    let d = DCat::standard(2, 2, Exec::Sequential).unwrap();
    let seed = MorphismClass::identities(d.category());
    let mut group = c.benchmark_group("two_of_six_closure");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| closure_with(d.category(), &seed, ClosureMode::TwoOfSix, exec))
        });
    }
    group.finish();
}

fn factorization_suite(c: &mut Criterion) {
    let mut group = c.benchmark_group("factorization_suite");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = SuiteConfig { cases: Some(40), exec, ..SuiteConfig::default() };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_suite("factorization", &cfg, None).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, subdivision, two_of_six, factorization_suite);
criterion_main!(benches);

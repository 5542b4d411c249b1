use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use jetav::suites::{run_suite, SuiteConfig};

fn suite_runs(c: &mut Criterion) {
    let cfg = SuiteConfig {
        order: 4,
        seed: 7,
        samples: 4,
        cutoff: 3,
        degree: 3,
        m_lo: 0,
        m_hi: 1,
    };
    let mut group = c.benchmark_group("suites_small");
    group.sample_size(10);
    for name in ["p1", "coproduct", "geometry"] {
        group.bench_function(name, |bench| {
            bench.iter(|| black_box(run_suite(name, &cfg).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, suite_runs);
criterion_main!(benches);

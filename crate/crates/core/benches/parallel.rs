use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use patchwork::complex::build_with;
use patchwork::constructions::{prop51, prop57};
use patchwork::critical::CriticalAnalysis;
use patchwork::par::Mode;
use patchwork::verify::{run_suite, SuiteConfig};

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("build+betti prop57(3,3,2)");
    let k = prop57(3, 3, 2).unwrap();
    for (name, mode) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| {
                let cx = build_with(mode, &k.triangulation, &k.signs, &k.ambient).unwrap();
                black_box(cx.betti_z2_with(mode))
            })
        });
    }
    g.finish();
}

fn visibility(c: &mut Criterion) {
    let mut g = c.benchmark_group("visibility prop51(3,10)");
    let k = prop51(3, 10).unwrap();
    let origin = patchwork::critical::find_generic_origin(&k.triangulation).unwrap();
    for (name, mode) in MODES {
        g.bench_function(name, |b| {
            b.iter(|| black_box(CriticalAnalysis::with_mode(mode, &k.triangulation, origin.clone()).unwrap().records().len()))
        });
    }
    g.finish();
}

fn suite(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify suite, 32 instances");
    g.sample_size(10);
    for (name, mode) in MODES {
        let cfg = SuiteConfig { instances: 32, mode, ..SuiteConfig::default() };
        g.bench_function(name, |b| b.iter(|| black_box(run_suite(&cfg).unwrap().instances)));
    }
    g.finish();
}

criterion_group!(benches, homology, visibility, suite);
criterion_main!(benches);

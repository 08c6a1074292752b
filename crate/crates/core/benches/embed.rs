use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rand::Rng;
use rand_distr::StandardNormal;

use jlt_core::seed::rng_from_seed;
use jlt_core::{JlParams, LinearEmbedding, TransformKind};

const M: usize = 256;

fn apply(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply");
    group.sample_size(20);
    for kind in TransformKind::catalog() {
        if matches!(kind, TransformKind::Identity) {
            continue;
        }
        for log_d in [12u32, 14, 16] {
            let d = 1usize << log_d;
            // dense kinds store m·d entries; skip the largest size
            let dense = matches!(
                kind,
                TransformKind::Gaussian { .. } | TransformKind::Rademacher | TransformKind::Achlioptas { .. }
            );
            if dense && log_d > 14 {
                continue;
            }
            let p = JlParams::new(d, M, 0.25, 0.05, 7).unwrap();
            let Ok(f) = kind.sample(&p) else { continue };
            let mut rng = rng_from_seed(1);
            let x: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
            group.throughput(Throughput::Elements(d as u64));
            group.bench_with_input(BenchmarkId::new(kind.name(), d), &x, |b, x| {
                b.iter(|| f.apply(black_box(x)).unwrap())
            });
        }
    }
    group.finish();
}

fn sample(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample");
    group.sample_size(20);
    let p = JlParams::new(1 << 12, M, 0.25, 0.05, 3).unwrap();
    for kind in [
        TransformKind::Rademacher,
        TransformKind::Dks { s: None },
        TransformKind::Fjlt { c_q: 1.0 },
        TransformKind::Srht,
    ] {
        group.bench_function(kind.name(), |b| b.iter(|| kind.sample(black_box(&p)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, apply, sample);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use weightcalc::analytic::{mittag_leffler, r_coefficients};
use weightcalc::indices::gamma_sequence;
use weightcalc::sequences::faa_di_bruno_sequence;
use weightcalc::stability::gevrey_pipeline;
use weightcalc::weights::log_convex_minorant;
use weightcalc::{RunConfig, WeightSequence};

fn wobbly(n: usize) -> WeightSequence {
    let log_m = (0..=n).map(|j| (j as f64) * (j as f64).ln_1p() + (j as f64 * 0.7).sin() * 3.0).collect();
    WeightSequence::from_logs("wobbly", log_m).unwrap()
}

fn kernels(c: &mut Criterion) {
    let cfg = RunConfig::default();
    let table = wobbly(1024);
    c.bench_function("minorant N=1024", |b| b.iter(|| log_convex_minorant(black_box(&table))));

    let g = WeightSequence::gevrey(1.5, 256);
    c.bench_function("faa di bruno N=256", |b| b.iter(|| faa_di_bruno_sequence(black_box(&g)).unwrap()));

    let g64 = WeightSequence::gevrey(1.0, 64);
    c.bench_function("R_j j<=64", |b| b.iter(|| r_coefficients(black_box(&g64), 64, 1e-10).unwrap()));

    c.bench_function("gamma bisection G^1", |b| b.iter(|| gamma_sequence(black_box(&g64), &cfg).unwrap()));

    let z = Complex64::new(-4.0, 2.5);
    let a = Complex64::new(1.5, 0.0);
    let bb = Complex64::new(2.5, 0.0);
    c.bench_function("mittag-leffler |z|~4.7", |b| b.iter(|| mittag_leffler(a, bb, black_box(z), &cfg).unwrap()));

    c.bench_function("gevrey map cell", |b| b.iter(|| gevrey_pipeline(black_box(0.7), black_box(1.3), &cfg).unwrap()));
}

criterion_group!(benches, kernels);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sgb_core::bounds::{BoundTransform, EtaShape, EtaSpec, PExponent};
use sgb_core::mc::{estimate_moment, estimate_quasinorm_ln};
use sgb_core::sim::em::{euler_maruyama, linear_sde};
use sgb_core::sim::{sample_block_sup, sharpness_block_path, simulate_convex_counterexample, BlockParams};
use sgb_core::RngStream;

fn samplers(c: &mut Criterion) {
    let bp = BlockParams::new(0.5, 0.5, 8).unwrap();
    let mut rng = RngStream::new(1, 0).rng();
    c.bench_function("block sup, k = 8", |b| b.iter(|| sample_block_sup(black_box(&bp), &mut rng)));
    c.bench_function("block path, k = 8", |b| b.iter(|| sharpness_block_path(black_box(&bp), &mut rng)));
    c.bench_function("convex counterexample, 500 steps", |b| {
        b.iter(|| simulate_convex_counterexample(0.5, 0.1, 0.5, 1e-3, &mut rng).unwrap())
    });
    let spec = linear_sde(0.5, 0.5, 1.0).unwrap();
    let mut i = 0;
    c.bench_function("euler-maruyama linear sde, 1000 steps", |b| {
        b.iter(|| {
            i += 1;
            euler_maruyama(&spec, 1.0, 1e-3, RngStream::new(2, i)).unwrap()
        })
    });
}

fn transforms(c: &mut Criterion) {
    let convex = EtaShape { convex: true, concave: false, zero_at_floor: true };
    let etas = [
        EtaSpec::squared_gaussian_exponent(0.5).unwrap(),
        EtaSpec::catalog().pop().unwrap(),
        EtaSpec::numeric("x atan x", 0.0, |x: f64| x * x.atan(), convex).unwrap(),
    ];
    let p = PExponent::new(0.5).unwrap();
    for eta in etas {
        let name = eta.label().to_string();
        let t = BoundTransform::with_default_reference(eta);
        c.bench_function(&format!("G^-1(G(x)), eta = {name}"), |b| b.iter(|| t.g_inv(t.g(black_box(7.3)).unwrap()).unwrap()));
        c.bench_function(&format!("G~_p, eta = {name}"), |b| b.iter(|| t.tilde_g_p(p, black_box(4.0)).unwrap()));
    }
}

fn estimators(c: &mut Criterion) {
    let bp = BlockParams::new(0.5, 0.5, 4).unwrap();
    let mut rng = RngStream::new(3, 0).rng();
    let xs: Vec<f64> = (0..100_000).map(|_| sample_block_sup(&bp, &mut rng)).collect();
    let logs: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let p = PExponent::new(0.5).unwrap();
    c.bench_function("moment estimate, 1e5 samples", |b| b.iter(|| estimate_moment(black_box(&xs), 0.5).unwrap()));
    c.bench_function("log quasinorm estimate, 1e5 samples", |b| b.iter(|| estimate_quasinorm_ln(black_box(&logs), p).unwrap()));
}

criterion_group!(benches, samplers, transforms, estimators);
criterion_main!(benches);

use std::hint::black_box;

use asianvol::{asian_price, mc_asian_price, rate_function, McConfig, OptionSide, Order, VolSource};
use asianvol_bench::{case5, strike_grid};
use criterion::{criterion_group, criterion_main, Criterion};

fn bench_rate_function(c: &mut Criterion) {
    let mut group = c.benchmark_group("rate_function");
    for k in [0.5, 1.005, 2.0] {
        group.bench_function(format!("k={k}"), |b| b.iter(|| rate_function(black_box(k)).unwrap()));
    }
    group.finish();
}

fn bench_smile(c: &mut Criterion) {
    let params = case5();
    let strikes = strike_grid(params.spot, 101);
    c.bench_function("smile_101_linear", |b| {
        b.iter(|| {
            strikes
                .iter()
                .map(|&k| asian_price(k, &params, VolSource::Expansion(Order::Linear), OptionSide::Call).unwrap())
                .sum::<f64>()
        })
    });
}

fn bench_monte_carlo(c: &mut Criterion) {
    let params = case5();
    let config = McConfig {
        paths: 20_000,
        steps: 64,
        ..McConfig::default()
    };
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    group.bench_function("20k_paths_64_steps", |b| {
        b.iter(|| mc_asian_price(2.0, &params, OptionSide::Call, black_box(&config)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_rate_function, bench_smile, bench_monte_carlo);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use erlangc_core::{
    delay_probability, erlang_c, normal, steady_state, AbandonmentModel, BirthDeathSpec, Method,
    OfferedLoad, ServerCount,
};

fn erlang_c_methods(c: &mut Criterion) {
    let mut group = c.benchmark_group("erlang_c");
    for servers in [10u64, 100, 1000] {
        let n = ServerCount::integer(servers);
        let rho = OfferedLoad::new(0.9 * servers as f64).unwrap();
        for method in Method::ALL {
            group.bench_with_input(BenchmarkId::new(method.name(), servers), &n, |b, &n| {
                b.iter(|| erlang_c(black_box(n), black_box(rho), method).unwrap())
            });
        }
    }
    group.finish();
}

fn real_n_large_load(c: &mut Criterion) {
    let rho: f64 = 1e6;
    let n = ServerCount::new(rho + rho.sqrt()).unwrap();
    let load = OfferedLoad::new(rho).unwrap();
    c.bench_function("erlang_c/quadrature-a/rho=1e6", |b| {
        b.iter(|| erlang_c(black_box(n), black_box(load), Method::QuadratureA).unwrap())
    });
    let m = AbandonmentModel::new(1.0, 1.0).unwrap();
    c.bench_function("delay_probability/rho=1e6", |b| {
        b.iter(|| delay_probability(black_box(n), black_box(load), &m).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let spec = BirthDeathSpec::new(45.0, 1.0, 50, 0.5);
    c.bench_function("steady_state/N=50", |b| {
        b.iter(|| steady_state(black_box(&spec)).unwrap())
    });
}

fn normal_kit(c: &mut Criterion) {
    c.bench_function("xi/grid", |b| {
        b.iter(|| {
            (-300..=300)
                .map(|k| normal::xi(black_box(k as f64 * 0.1)).unwrap())
                .sum::<f64>()
        })
    });
}

criterion_group!(
    benches,
    erlang_c_methods,
    real_n_large_load,
    oracle,
    normal_kit
);
criterion_main!(benches);

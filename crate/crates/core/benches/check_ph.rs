use criterion::{criterion_group, criterion_main, Criterion};
use pairham::check::{check_ph, CheckConfig, ExtenderChoice, Mode, Parallelism};
use pairham::graph::build_rook;

fn bench_check_ph(c: &mut Criterion) {
    let g = build_rook(4, 3).unwrap();
    let mut group = c.benchmark_group("check_ph rook 4 3");
    group.sample_size(10);
    for (name, parallelism) in [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)] {
        let config = CheckConfig { parallelism, ..CheckConfig::default() };
        group.bench_function(name, |b| {
            b.iter(|| check_ph(&g, Mode::Exhaustive, ExtenderChoice::Constructive, &config).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_check_ph);
criterion_main!(benches);

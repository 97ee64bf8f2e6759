use criterion::{criterion_group, criterion_main, Criterion};
use kpebble::{solve_game, Exec, SolveOptions, Structure};

fn fixpoint(c: &mut Criterion) {
    let a = Structure::cycle(7);
    let b = Structure::complete(3);
    let mut group = c.benchmark_group("c7_to_k3");
    for (name, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
        group.bench_function(name, |bench| {
            bench.iter(|| solve_game(&a, &b, 3, SolveOptions::default().with_exec(exec)).unwrap().winner)
        });
    }
    group.finish();
}

criterion_group!(benches, fixpoint);
criterion_main!(benches);

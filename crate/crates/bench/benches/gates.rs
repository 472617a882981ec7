use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};

use wavegate_bench::{channel_workload, random_state};
use wavegate_core::{apply_all, compose};

fn in_place(c: &mut Criterion) {
    let mut group = c.benchmark_group("apply_1000_gates");
    for mq in [10, 16, 20] {
        let gates = channel_workload(mq, 1000, 7);
        let psi = random_state(mq, 8);
        group.throughput(Throughput::Elements(gates.len() as u64));
        group.bench_with_input(BenchmarkId::from_parameter(mq), &mq, |b, _| {
            b.iter_batched_ref(
                || psi.clone(),
                |state| apply_all(&gates, state).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    group.finish();
}

fn dense(c: &mut Criterion) {
    let mut group = c.benchmark_group("compose_dense");
    for mq in [4, 6, 8] {
        let gates = channel_workload(mq, 100, 9);
        group.bench_with_input(BenchmarkId::from_parameter(mq), &mq, |b, &mq| {
            b.iter(|| compose(&gates, 1 << mq).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, in_place, dense);
criterion_main!(benches);

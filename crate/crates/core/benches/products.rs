use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use splitoct::{apply, batch, direct_mul, fast_mul, prepare, verify, SplitOctonion};

fn operands(n: usize, seed: u64) -> Vec<SplitOctonion<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| SplitOctonion::from_fn(|_| rng.gen_range(-1e3..=1e3))).collect()
}

fn single_product(c: &mut Criterion) {
    let x = operands(1, 1).remove(0);
    let b = operands(1, 2).remove(0);
    let p = prepare(&b);

    let mut group = c.benchmark_group("single_f64");
    group.bench_function("direct", |bench| bench.iter(|| direct_mul(black_box(&x), black_box(&b))));
    group.bench_function("fast", |bench| bench.iter(|| fast_mul(black_box(&x), black_box(&b))));
    group.bench_function("prepare", |bench| bench.iter(|| prepare(black_box(&b))));
    group.bench_function("prepared_apply", |bench| bench.iter(|| apply(black_box(&p), black_box(&x))));
    group.finish();
}

fn single_rational(c: &mut Criterion) {
    let (x, b) = verify::random_pair(0, 0);
    let mut group = c.benchmark_group("single_rational");
    group.bench_function("direct", |bench| bench.iter(|| direct_mul(black_box(&x), black_box(&b))));
    group.bench_function("fast", |bench| bench.iter(|| fast_mul(black_box(&x), black_box(&b))));
    group.finish();
}

fn batches(c: &mut Criterion) {
    for n in [1_000usize, 100_000] {
        let xs = operands(n, 3);
        let bs = operands(n, 4);
        let p = prepare(&bs[0]);

        let mut group = c.benchmark_group(format!("batch_f64_{n}"));
        group.throughput(Throughput::Elements(n as u64));
        group.bench_function(BenchmarkId::new("direct", "sequential"), |bench| {
            bench.iter(|| batch::sequential::direct_batch(&xs, &bs))
        });
        group.bench_function(BenchmarkId::new("fast", "sequential"), |bench| {
            bench.iter(|| batch::sequential::fast_batch(&xs, &bs))
        });
        group.bench_function(BenchmarkId::new("prepared_apply", "sequential"), |bench| {
            bench.iter(|| batch::sequential::apply_batch(&p, &xs))
        });
        #[cfg(feature = "parallel")]
        {
            group.bench_function(BenchmarkId::new("direct", "parallel"), |bench| {
                bench.iter(|| batch::parallel::direct_batch(&xs, &bs))
            });
            group.bench_function(BenchmarkId::new("fast", "parallel"), |bench| {
                bench.iter(|| batch::parallel::fast_batch(&xs, &bs))
            });
            group.bench_function(BenchmarkId::new("prepared_apply", "parallel"), |bench| {
                bench.iter(|| batch::parallel::apply_batch(&p, &xs))
            });
        }
        group.finish();
    }
}

fn exact_verification(c: &mut Criterion) {
    let mut group = c.benchmark_group("random_equivalence_1000");
    group.sample_size(10);
    group.bench_function("sequential", |bench| {
        bench.iter_batched(
            || (0..1000u64).map(|i| verify::random_pair(9, i)).collect::<Vec<_>>(),
            |pairs| pairs.iter().all(|(x, b)| direct_mul(x, b) == fast_mul(x, b)),
            BatchSize::LargeInput,
        )
    });
    #[cfg(feature = "parallel")]
    group.bench_function("parallel", |bench| bench.iter(|| verify::random_equivalence(1000, 9).pass()));
    group.finish();
}

criterion_group!(benches, single_product, single_rational, batches, exact_verification);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use sparse_mds::genmatrix::vandermonde;
use sparse_mds::patterns::check_mds_with;
use sparse_mds::verify::{min_distance_with, verify_mds_with, MinorOrder, MinorScan};
use sparse_mds::{Execution, FieldSpec, ZeroPattern};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn minors(c: &mut Criterion) {
    let field: FieldSpec = "32".parse().unwrap();
    let points: Vec<u32> = (0..16).collect();
    let m = vandermonde(&field, 8, &points);
    let mut g = c.benchmark_group("verify_mds_8x16_gf32");
    for (name, exec) in MODES {
        let scan = MinorScan { order: MinorOrder::Lexicographic, exec };
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| verify_mds_with(&field, &m, &scan).unwrap()));
    }
    let rd = MinorScan { order: MinorOrder::RevolvingDoor, exec: Execution::Sequential };
    g.bench_function(BenchmarkId::from_parameter("revolving_door"), |b| b.iter(|| verify_mds_with(&field, &m, &rd).unwrap()));
    g.finish();
}

fn distance(c: &mut Criterion) {
    let field: FieldSpec = "13".parse().unwrap();
    let points: Vec<u32> = (0..12).collect();
    let m = vandermonde(&field, 5, &points);
    let mut g = c.benchmark_group("min_distance_5x12_gf13");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| min_distance_with(&field, &m, 1 << 24, exec).unwrap())
        });
    }
    g.finish();
}

fn condition(c: &mut Criterion) {
    let sets: Vec<Vec<usize>> = (0..12).map(|i| vec![i % 14 + 1, (i + 3) % 14 + 1, (i + 7) % 14 + 1]).collect();
    let pat = ZeroPattern::new(14, 12, sets).unwrap();
    let mut g = c.benchmark_group("check_mds_12x14");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| check_mds_with(&pat, exec)));
    }
    g.finish();
}

criterion_group!(benches, minors, distance, condition);
criterion_main!(benches);

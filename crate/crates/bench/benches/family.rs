use criterion::{criterion_group, criterion_main, Criterion};

use pgf_bench::dataset;
use pgf_core::census::{run_census, CensusOptions};
use pgf_core::family::is_semiabelian;
use pgf_core::Limits;

fn semiabelian(c: &mut Criterion) {
    let limits = Limits::default();
    let recs = dataset(64);
    // (64,8) has no decomposition; (64,100) has one
    for index in [8, 100] {
        let g = recs[index - 1].presentation.to_perm_group(&limits).unwrap();
        c.bench_function(&format!("semiabelian search (64,{index})"), |b| {
            b.iter(|| is_semiabelian(&g, &limits).unwrap().flag)
        });
    }
}

fn census(c: &mut Criterion) {
    let recs = dataset(32);
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    group.bench_function("order 32, one worker", |b| {
        let opts = CensusOptions {
            jobs: Some(1),
            ..Default::default()
        };
        b.iter(|| run_census(&recs, &opts).unwrap().summary.non_semiabelian)
    });
    group.finish();
}

criterion_group!(benches, semiabelian, census);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qrrt_core::bailey::{verify_bailey_pair, DKParams};
use qrrt_core::dsl;
use qrrt_core::qdiff::{q_family, verify_q_system, FamilyIndex};
use qrrt_core::series::{pochhammer, PochhammerSpec};
use qrrt_core::Orders;

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    for n in [100, 200, 400] {
        g.bench_with_input(BenchmarkId::new("euler_inverse", n), &n, |b, &n| {
            b.iter(|| pochhammer(&PochhammerSpec::q_inf(1, 1), Orders::univariate(n)).unwrap().invert().unwrap())
        });
    }
    g.bench_function("q_family_2_3_3", |b| {
        let ix = FamilyIndex::new(2, 3, 3).unwrap();
        b.iter(|| q_family(black_box(ix), Orders::bivariate(20, 60)).unwrap())
    });
    g.finish();
}

fn catalog(c: &mut Criterion) {
    let mut g = c.benchmark_group("catalog");
    g.sample_size(20);
    for e in qrrt_bench::entries() {
        let (q, a) = if e.is_bivariate() { (60, 20) } else { (100, 0) };
        g.bench_function(&e.name, |b| b.iter(|| dsl::verify_entry(&e, q, a).unwrap()));
    }
    g.finish();
}

fn systems(c: &mut Criterion) {
    let mut g = c.benchmark_group("systems");
    g.sample_size(10);
    g.bench_function("bailey_3_5_n20", |b| {
        let p = DKParams::new(3, 5).unwrap();
        b.iter(|| verify_bailey_pair(&p, 20, Orders::bivariate(20, 60)).unwrap())
    });
    g.bench_function("q_system_4_6", |b| b.iter(|| verify_q_system(4, 6, Orders::bivariate(20, 60)).unwrap()));
    g.finish();
}

criterion_group!(benches, series, catalog, systems);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dehnfill_core::bivar::BivarLaurentPoly;
use dehnfill_core::fill::{specialize, FillingSlope};
use dehnfill_core::lab::load_fixture;
use dehnfill_core::measure::{mahler, mahler_graeffe};
use dehnfill_core::rootmodel::{root_geometry, solve_model};
use dehnfill_core::zfactor::{factor, UniIntPoly};

const SLOPES: [(i64, i64); 3] = [(13, 2), (31, 3), (59, 4)];

fn figure_eight() -> BivarLaurentPoly {
    let path = concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/fixtures/figure_eight.json"
    );
    load_fixture(path).expect("fixture").1
}

fn filling(f: &BivarLaurentPoly, p: i64, q: i64) -> UniIntPoly {
    specialize(f, FillingSlope::new(p, q).unwrap())
        .unwrap()
        .poly
}

fn bench_specialize(c: &mut Criterion) {
    let f = figure_eight();
    let mut g = c.benchmark_group("specialize");
    for (p, q) in SLOPES {
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{p}/{q}")),
            &(p, q),
            |b, &(p, q)| {
                b.iter(|| specialize(black_box(&f), FillingSlope::new(p, q).unwrap()).unwrap())
            },
        );
    }
    g.finish();
}

fn bench_factor(c: &mut Criterion) {
    let f = figure_eight();
    let mut g = c.benchmark_group("factor");
    g.sample_size(20);
    for (p, q) in SLOPES {
        let h = filling(&f, p, q);
        g.bench_with_input(
            BenchmarkId::from_parameter(format!("{p}/{q}")),
            &h,
            |b, h| b.iter(|| factor(black_box(h)).unwrap()),
        );
    }
    g.finish();
}

fn bench_mahler(c: &mut Criterion) {
    let lehmer = UniIntPoly::from_i64s(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let f = figure_eight();
    let mut g = c.benchmark_group("mahler");
    g.bench_function("roots/lehmer", |b| {
        b.iter(|| mahler(black_box(&lehmer)).unwrap())
    });
    g.bench_function("graeffe/lehmer", |b| {
        b.iter(|| mahler_graeffe(black_box(&lehmer), 8))
    });
    for (p, q) in SLOPES {
        let h = filling(&f, p, q);
        g.bench_with_input(BenchmarkId::new("roots", format!("{p}/{q}")), &h, |b, h| {
            b.iter(|| mahler(black_box(h)).unwrap())
        });
    }
    g.finish();
}

fn bench_roots(c: &mut Criterion) {
    let f = figure_eight();
    let mut g = c.benchmark_group("roots");
    for (p, q) in SLOPES {
        let fp = specialize(&f, FillingSlope::new(p, q).unwrap()).unwrap();
        g.bench_with_input(
            BenchmarkId::new("geometry", format!("{p}/{q}")),
            &fp,
            |b, fp| b.iter(|| root_geometry(black_box(fp)).unwrap()),
        );
    }
    for p in [50, 150] {
        g.bench_with_input(BenchmarkId::new("model", p), &p, |b, &p| {
            b.iter(|| solve_model(p, 1, 0.1).unwrap())
        });
    }
    g.finish();
}

criterion_group!(
    benches,
    bench_specialize,
    bench_factor,
    bench_mahler,
    bench_roots
);
criterion_main!(benches);

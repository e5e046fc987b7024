use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dihedral_bench::{knot_937, twist_sum};
use dihedral_core::cover::{double_cover_homology, linking_form};
use dihedral_core::linalg::snf;
use dihedral_core::obstruction::{characteristic_knot_classes, surjective_characters, DEFAULT_ENUM_CAP};
use dihedral_core::report::{analyze, twist_family, AnalyzeOptions, KnotRecord};
use dihedral_core::signature::{tristram_levine, Precision, RootOfUnity};

fn linear_algebra(c: &mut Criterion) {
    let a = twist_sum(&[2, 11, -7, 20]).symmetrize();
    c.bench_function("snf 8x8", |b| b.iter(|| snf(black_box(&a))));
    let v = twist_sum(&[2, 11, -7]);
    c.bench_function("linking form genus 3", |b| {
        b.iter(|| linking_form(&double_cover_homology(black_box(&v))))
    });
}

fn enumeration(c: &mut Criterion) {
    let v = twist_sum(&[2, 2, 2]);
    let l = linking_form(&double_cover_homology(&v));
    c.bench_function("surjective characters Z9^3 n=3", |b| {
        b.iter(|| surjective_characters(black_box(&l), 3, DEFAULT_ENUM_CAP))
    });
    c.bench_function("characteristic classes Z9^3 n=3", |b| {
        b.iter(|| characteristic_knot_classes(black_box(&v), 3, DEFAULT_ENUM_CAP))
    });
}

fn end_to_end(c: &mut Criterion) {
    let rec = KnotRecord {
        name: "9_37".into(),
        seifert: knot_937(),
        source: "bench".into(),
    };
    c.bench_function("analyze 9_37", |b| b.iter(|| analyze(black_box(&rec), &AnalyzeOptions::default())));
    c.bench_function("twist family -50..=50", |b| b.iter(|| twist_family(-50..=50)));
    let v = twist_sum(&[-1, -1, 2]);
    c.bench_function("tristram-levine genus 3", |b| {
        b.iter(|| tristram_levine(black_box(&v), RootOfUnity::minus_one(), Precision::default()))
    });
}

criterion_group!(benches, linear_algebra, enumeration, end_to_end);
criterion_main!(benches);

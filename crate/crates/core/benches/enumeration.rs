//! Benchmarks for the data-parallel enumeration paths against hand-rolled
//! sequential baselines built from the same public primitives.
//!
//! The library fans these loops out over rayon when the default `parallel`
//! feature is on; rerun with `--no-default-features` to measure the
//! sequential fallback of the library paths themselves.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use thompson_graphs::dyadic::Dyadic;
use thompson_graphs::forest::{word_to_forest, BinaryForest};
use thompson_graphs::gamma_s::build_gamma_s;
use thompson_graphs::lemmas::lemma2_check;
use thompson_graphs::plhomeo::PLHomeo;
use thompson_graphs::schreier::{folner_ratio, folner_tuple};
use thompson_graphs::word::{positive_words_of_length, Word};

fn bench_lemma2(c: &mut Criterion) {
    let v: Word = "x0 x1 x1".parse().unwrap();
    let vp: Word = "x1 x0 x1 x0 x1".parse().unwrap();
    let mut group = c.benchmark_group("lemma2_n5");
    group.sample_size(20);
    group.bench_function("library", |b| {
        b.iter(|| black_box(lemma2_check(5, &v, &vp).unwrap()))
    });
    group.bench_function("sequential_baseline", |b| {
        // same scan, plain iterators over the public forest calculus
        let target =
            word_to_forest(&"x5 x0 x1 x1 x1 x1 x0 x1 x0 x1".parse::<Word>().unwrap()).unwrap();
        let rest_len = 9usize;
        b.iter(|| {
            let competitors = positive_words_of_length(&[0, 1], rest_len);
            let mut unique = true;
            for m in 0..=(5 + rest_len as u32 + 1) {
                for w in &competitors {
                    if m == 5 && w.to_string() == "x0 x1 x1 x1 x1 x0 x1 x0 x1" {
                        continue;
                    }
                    let mut f = BinaryForest::generator(m);
                    for l in &w.letters {
                        f = f.add_caret(l.index as usize);
                    }
                    if f == target {
                        unique = false;
                    }
                }
            }
            black_box(unique)
        })
    });
    group.finish();
}

fn bench_folner(c: &mut Criterion) {
    let mut group = c.benchmark_group("folner_m800_n2");
    group.sample_size(10);
    group.bench_function("library", |b| {
        b.iter(|| black_box(folner_ratio(black_box(800), 2)))
    });
    group.bench_function("sequential_baseline", |b| {
        let gens = [PLHomeo::generator(0), PLHomeo::generator(1)];
        let invs = [gens[0].invert(), gens[1].invert()];
        b.iter(|| {
            let members: Vec<_> = (1..=800u64).map(|i| folner_tuple(i, 2)).collect();
            let inside: std::collections::BTreeSet<_> = members.iter().cloned().collect();
            let mut boundary = std::collections::BTreeSet::new();
            for t in &members {
                for h in gens.iter().chain(invs.iter()) {
                    let img = t.apply(h);
                    if !inside.contains(&img) {
                        boundary.insert(img);
                    }
                }
            }
            black_box(boundary.len())
        })
    });
    group.finish();
}

fn bench_gamma_s_build(c: &mut Criterion) {
    let mut group = c.benchmark_group("gamma_s_build_4_8");
    group.sample_size(10);
    group.bench_function("library", |b| {
        b.iter(|| black_box(build_gamma_s(4, 8).graph.len()))
    });
    group.finish();
}

fn bench_orbit(c: &mut Criterion) {
    use thompson_graphs::graph::Truncation;
    use thompson_graphs::schreier::dyadic_orbit_graph;
    let mut group = c.benchmark_group("dyadic_orbit_depth12");
    group.sample_size(20);
    group.bench_function("library", |b| {
        b.iter(|| black_box(dyadic_orbit_graph(&Dyadic::half(), Truncation::Depth(12)).len()))
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_lemma2,
    bench_folner,
    bench_gamma_s_build,
    bench_orbit
);
criterion_main!(benches);

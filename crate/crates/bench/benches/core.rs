use criterion::{black_box, criterion_group, criterion_main, Criterion};

use powerfree_core::enumerator::letter_histogram;
use powerfree_core::genfun::known_degree_bound;
use powerfree_core::morphism::{
    cubefree_binary_test, search_uniform_generating_sets, SearchOptions,
};
use powerfree_core::{
    build_transfer_system, count_powerfree, dominant_growth, exact_generating_function,
    is_powerfree, Alphabet, EnumerationConfig, FreenessSpec, Morphism, RwTestSet,
};

const B2: Alphabet = Alphabet::BINARY;
const CF: FreenessSpec = FreenessSpec::CUBEFREE;

fn enumeration(c: &mut Criterion) {
    let config = EnumerationConfig::with_workers(1);
    c.bench_function("count binary cubefree n=30", |b| {
        b.iter(|| count_powerfree(CF, B2, black_box(30), &config).unwrap())
    });
    c.bench_function("letter histogram n=26", |b| {
        b.iter(|| letter_histogram(CF, B2, black_box(26), &config).unwrap())
    });
    let tm = Morphism::thue_morse().iterate(0, 4096).unwrap();
    c.bench_function("is_powerfree thue-morse 4096", |b| {
        b.iter(|| is_powerfree(black_box(tm.letters()), CF))
    });
}

fn genfun(c: &mut Criterion) {
    c.bench_function("exact gf p=3", |b| {
        b.iter(|| {
            let ts = build_transfer_system(3, black_box(3), B2).unwrap();
            exact_generating_function(&ts, known_degree_bound(3, 3, B2).unwrap()).unwrap()
        })
    });
    c.bench_function("dominant growth p=8", |b| {
        b.iter(|| {
            let ts = build_transfer_system(3, black_box(8), B2).unwrap();
            dominant_growth(&ts, 1e-12).unwrap()
        })
    });
}

fn morphisms(c: &mut Criterion) {
    let m27 =
        Morphism::binary(&["011011010110110011011010110", "011011010110110011010110110"]).unwrap();
    c.bench_function("cubefree test 27-uniform", |b| {
        b.iter(|| cubefree_binary_test(black_box(&m27)).unwrap())
    });
    c.bench_function("test set k=3 over 3 letters", |b| {
        b.iter(|| {
            RwTestSet::new(3, Alphabet::new(black_box(3)).unwrap())
                .unwrap()
                .summary()
        })
    });
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    group.bench_function("3 -> 2 at length 6", |b| {
        b.iter(|| {
            search_uniform_generating_sets(3, 3, B2, black_box(6), SearchOptions::default())
                .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, enumeration, genfun, morphisms);
criterion_main!(benches);

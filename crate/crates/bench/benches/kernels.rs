use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use sigcert::certify::{legendrian_check, variety_check};
use sigcert::signature::{chen_mul, sig_pl, sig_richardson};
use sigcert::words::shuffle;
use sigcert::{CheckConfig, MultiPoly, PathModel, TensorElem, VarietySpec, Word};
use sigcert_bench::{cylinder, paraboloid_map, random_pl};

fn signatures(c: &mut Criterion) {
    let mut group = c.benchmark_group("sig_pl");
    for segments in [100, 1000, 10_000] {
        let x = random_pl(7, 3, segments);
        group.bench_with_input(BenchmarkId::new("d3_K6", segments), &x, |b, x| {
            b.iter(|| sig_pl(black_box(x), 6))
        });
    }
    group.finish();

    let a = sig_pl(&random_pl(1, 4, 10), 5);
    let b = sig_pl(&random_pl(2, 4, 10), 5);
    c.bench_function("chen_mul d4 K5", |bench| {
        bench.iter(|| chen_mul(black_box(&a), black_box(&b), 5).unwrap())
    });

    let PathModel::Sampled(s) = cylinder(2000) else {
        unreachable!()
    };
    c.bench_function("sig_richardson n2000 K5", |b| {
        b.iter(|| sig_richardson(black_box(&s), 5))
    });
}

fn symbolic(c: &mut Criterion) {
    let u = TensorElem::from_word(Word::new(3, vec![1, 2, 3]).unwrap());
    let v = TensorElem::from_word(Word::new(3, vec![3, 2, 1, 1]).unwrap());
    c.bench_function("shuffle 3x4", |b| {
        b.iter(|| shuffle(black_box(&u), black_box(&v)).unwrap())
    });

    let words: Vec<Word> = Word::all_up_to(3, 4).collect();
    c.bench_function("m_push all words up to 4", |b| {
        b.iter(|| {
            let map = paraboloid_map();
            for w in &words {
                black_box(map.m_push(w).unwrap());
            }
        })
    });
}

fn certificates(c: &mut Criterion) {
    let x = cylinder(2000);
    let cfg = CheckConfig::sampled(5, 2);
    c.bench_function("legendrian_check n2000", |b| {
        b.iter(|| legendrian_check(black_box(&x), &cfg).unwrap())
    });
    let spec =
        VarietySpec::new(vec![MultiPoly::parse("x1^2 + x3^2 - 1", 3).unwrap()], true).unwrap();
    c.bench_function("variety_check n2000", |b| {
        b.iter(|| variety_check(black_box(&x), &spec, &cfg).unwrap())
    });
}

criterion_group!(benches, signatures, symbolic, certificates);
criterion_main!(benches);

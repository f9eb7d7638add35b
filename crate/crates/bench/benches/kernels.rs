//! Shuffle products, straightening, constant terms and zig-zag vertex images.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qloop_core::freealg::RhoData;
use qloop_core::*;

fn word(letters: &[(usize, i32)]) -> Word {
    Word::new(letters.iter().copied())
}

fn shuffle(c: &mut Criterion) {
    let m = CartanMatrix::a2();
    let mut group = c.benchmark_group("upsilon");
    for w in [
        word(&[(0, 1), (1, 0), (0, -1)]),
        word(&[(0, 1), (1, 0), (0, -1), (1, 2)]),
        word(&[(0, 0), (1, 1), (0, -1), (1, 0), (0, 2)]),
    ] {
        group.bench_with_input(BenchmarkId::from_parameter(w.len()), &w, |b, w| {
            b.iter(|| upsilon(&m, &FreeElem::word(w.clone()), Sign::Plus).unwrap())
        });
    }
    group.finish();
}

fn straightening(c: &mut Criterion) {
    let m = CartanMatrix::a2();
    let w = FreeElem::word(word(&[(1, -3), (0, 2), (1, 3), (0, -2)]));
    c.bench_function("straighten/4-letter", |b| b.iter(|| straighten(&m, &w).unwrap()));
}

fn pairing(c: &mut Criterion) {
    let m = CartanMatrix::a2();
    let x = FreeElem::word(word(&[(0, 1), (1, 0), (0, 0)]));
    let y = FreeElem::word(word(&[(0, 0), (1, 0), (0, -1)]));
    c.bench_function("pair_uu/3-letter", |b| b.iter(|| pair_uu(&m, &x, &y).unwrap()));
}

fn vertex_images(c: &mut Criterion) {
    let m = CartanMatrix::rank_two(-2);
    let z = DistZigZag::new(&m, 0, 1, 2, 0, 1, 0).unwrap();
    let data = RhoData::new(&z).unwrap();
    c.bench_function("vertex_image/d=-2,m=1", |b| b.iter(|| data.vertex_image(&m, Kernel::Plus).unwrap()));
}

criterion_group!(benches, shuffle, straightening, pairing, vertex_images);
criterion_main!(benches);

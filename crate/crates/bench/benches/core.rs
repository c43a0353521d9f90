use criterion::{black_box, criterion_group, criterion_main, Criterion};
use jpgeom::jordan::{Flavor, JordanContext};
use jpgeom::sample::Sampler;
use jpgeom::symspace::{flip_space, jordan_units_for};
use jpgeom::RingDescriptor;

fn quasi_inverse(c: &mut Criterion) {
    for ring in [RingDescriptor::Rational, RingDescriptor::Float64] {
        let ctx = JordanContext::new(ring.clone(), 3, Flavor::Full).unwrap();
        let mut s = Sampler::new(ring.clone(), 7);
        let (x, y) = loop {
            let (x, y) = (s.square(3), s.square(3));
            if ctx.quasi_inverse(&x, &y).is_ok() {
                break (x, y);
            }
        };
        c.bench_function(&format!("quasi_inverse/{ring}/n3"), |b| {
            b.iter(|| ctx.quasi_inverse(black_box(&x), black_box(&y)).unwrap())
        });
    }
}

fn sym_mul(c: &mut Criterion) {
    let ring = RingDescriptor::Rational;
    let units = jordan_units_for(ring.clone(), 2, Flavor::Full).unwrap();
    let mut s = Sampler::new(ring.clone(), 11);
    let x = units.chart().point(&s.invertible(2).unwrap());
    let y = units.chart().point(&s.invertible(2).unwrap());
    c.bench_function("sym_mul/jordan_units/n2", |b| b.iter(|| units.sym_mul(black_box(&x), black_box(&y)).unwrap()));

    let flip = flip_space(&ring, 2);
    let (x, y) = loop {
        let (a, b) = (s.square(2), s.square(2));
        let (x, y) = (flip.chart().point(&a), flip.chart().point(&b));
        if flip.sym_mul(&x, &y).is_ok() {
            break (x, y);
        }
    };
    c.bench_function("sym_mul/projective/n2", |b| b.iter(|| flip.sym_mul(black_box(&x), black_box(&y)).unwrap()));
}

fn lts_numeric(c: &mut Criterion) {
    let ring = RingDescriptor::Rational;
    let units = jordan_units_for(ring.clone(), 2, Flavor::Full).unwrap();
    let mut s = Sampler::new(ring, 13);
    let (u, v, w) = (s.square(2), s.square(2), s.square(2));
    let mut group = c.benchmark_group("lts");
    group.sample_size(20);
    group.bench_function("numeric/jordan_units/n2", |b| b.iter(|| units.lts_numeric(&u, &v, &w).unwrap()));
    group.bench_function("closed/jordan_units/n2", |b| b.iter(|| units.lts_bracket(&u, &v, &w).unwrap()));
    group.finish();
}

criterion_group!(benches, quasi_inverse, sym_mul, lts_numeric);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use eigenfloor_core::bounds::{evaluate, BoundName, BoundSpec, DomainData};
use eigenfloor_core::polyid::{expand_laplacian_sides, expand_poly_sides};
use eigenfloor_core::profiles::{check_lemma, jensen_grid_laplacian, random_profile, solve_a};
use eigenfloor_core::spectra::{bessel_zero, ModelDomain};

fn identities(c: &mut Criterion) {
    c.bench_function("expand_laplacian_sides n=64", |b| b.iter(|| expand_laplacian_sides(black_box(64))));
    c.bench_function("expand_poly_sides 32x32", |b| b.iter(|| expand_poly_sides(black_box(32), black_box(32))));
}

fn profiles(c: &mut Criterion) {
    let ps: Vec<_> = (0..64).map(random_profile).collect();
    c.bench_function("check_lemma x64 n=4 l=2", |b| {
        b.iter(|| ps.iter().map(|p| check_lemma(p, 4, 2).unwrap().slack).sum::<f64>())
    });
    c.bench_function("solve_a n=5", |b| b.iter(|| solve_a(5, black_box(123.4))));
    c.bench_function("jensen grid n=3 50x50", |b| b.iter(|| jensen_grid_laplacian(3, 50, 10.0)));
}

fn spectra(c: &mut Criterion) {
    let square = ModelDomain::unit_cube(2);
    let rect = ModelDomain::box_from_lengths(&[1.0, 1.3, 0.7]).unwrap();
    let disk = ModelDomain::ball(2, 1.0).unwrap();
    let ball = ModelDomain::ball(3, 1.0).unwrap();
    c.bench_function("square spectrum K=1000", |b| b.iter(|| square.spectrum(1000)));
    c.bench_function("3-box spectrum K=1000", |b| b.iter(|| rect.spectrum(1000)));
    c.bench_function("disk spectrum K=200", |b| b.iter(|| disk.spectrum(200)));
    c.bench_function("3-ball spectrum K=200", |b| b.iter(|| ball.spectrum(200)));
    c.bench_function("bessel_zero nu=10.5 p=20", |b| b.iter(|| bessel_zero(black_box(10.5), 20)));
}

fn bounds(c: &mut Criterion) {
    let d = DomainData::new(3, 2.0, 3.0, Some(8.0), "b").unwrap();
    c.bench_function("all bounds k=1..100", |b| {
        b.iter(|| {
            let mut total = 0.0;
            for k in 1..=100 {
                for name in [BoundName::Melas, BoundName::ThmMain, BoundName::CorMelasImproved] {
                    total += evaluate(&d, k, &BoundSpec::new(name, 1)).unwrap().value;
                }
                total += evaluate(&d, k, &BoundSpec::new(BoundName::ThmPoly, 2)).unwrap().value;
            }
            total
        })
    });
}

criterion_group!(benches, identities, profiles, spectra, bounds);
criterion_main!(benches);

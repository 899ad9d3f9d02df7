use criterion::{black_box, criterion_group, criterion_main, Criterion};
use darboux_core::catalog::catalog_get;
use darboux_core::exactrat::rat;
use darboux_core::scattering::{default_radius, numeric_phase_shift, ScatteringPiece};
use darboux_core::schrodinger::{eigenvalues, Grid, GridOptions};
use darboux_core::spectral::{chain_polynomial, spectral_equation_build, spectral_roots};
use darboux_core::Family;

fn chain(c: &mut Criterion) {
    c.bench_function("chain_polynomial_n4", |b| b.iter(|| chain_polynomial(black_box(4)).unwrap()));
}

fn levels(c: &mut Criterion) {
    let spec = catalog_get(&Family::ZeroEnergyPartner { n: 2, mu: rat(1) }).unwrap();
    let grid = Grid::new(&spec, &spec.pieces[1], GridOptions::default()).unwrap();
    c.bench_function("eigenvalues_n2_five", |b| b.iter(|| eigenvalues(&grid, (0.0, 2000.0), 5).unwrap()));
}

fn phase(c: &mut Criterion) {
    let (spec, idx) = ScatteringPiece::Left(2).realize(&rat(1)).unwrap();
    c.bench_function("phase_shift_left_n2_k1", |b| {
        b.iter(|| numeric_phase_shift(&spec, idx, black_box(1.0), default_radius(1.0), 1e-3).unwrap())
    });
}

fn roots(c: &mut Criterion) {
    let eq = spectral_equation_build(3, 1.0).unwrap();
    c.bench_function("spectral_roots_n3_twenty", |b| b.iter(|| spectral_roots(&eq, black_box(20))));
}

criterion_group!(benches, chain, levels, phase, roots);
criterion_main!(benches);

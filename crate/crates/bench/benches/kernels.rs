use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use cotype_zeta::exact::{expand, rat_equal};
use cotype_zeta::formulas::{cotype_assembled, cotype_o4, xi_12_from_w_scaled, xi_12_p_formula};
use cotype_zeta::lattice::{hnf_enumerate, paper_enumerate};
use cotype_zeta::measures::{s_oracle, SLemmaInput};
use cotype_zeta::{Cotype, DvrSpec, Predicates, Truncation};

fn series(c: &mut Criterion) {
    let f = cotype_o4();
    c.bench_function("expand cotype o4, total degree 7", |b| {
        b.iter(|| expand(black_box(&f), &Truncation::total(7)).unwrap())
    });
}

fn identities(c: &mut Criterion) {
    let (a, b) = (cotype_assembled().unwrap(), cotype_o4());
    c.bench_function("rat_equal cotype assembled vs o4", |x| {
        x.iter(|| rat_equal(black_box(&a), black_box(&b)))
    });
    let (a, b) = (xi_12_from_w_scaled(), xi_12_p_formula());
    c.bench_function("rat_equal xi12 W-sum vs P", |x| {
        x.iter(|| rat_equal(black_box(&a), black_box(&b)))
    });
}

fn lattices(c: &mut Criterion) {
    let z2 = DvrSpec::zp(2).unwrap();
    let z3 = DvrSpec::zp(3).unwrap();
    c.bench_function("hnf_enumerate closed n=3 e<=5 p=2", |b| {
        b.iter(|| hnf_enumerate(&z2, 3, 5, Predicates::CLOSED, u64::MAX).unwrap())
    });
    c.bench_function("hnf_enumerate closed n=3 e<=4 p=3", |b| {
        b.iter(|| hnf_enumerate(&z3, 3, 4, Predicates::CLOSED, u64::MAX).unwrap())
    });
    let cot = Cotype::from_exponents(&[3, 1, 1]).unwrap();
    c.bench_function("paper_enumerate (3,1,1) p=2", |b| {
        b.iter(|| paper_enumerate(&z2, black_box(&cot), u64::MAX).unwrap())
    });
}

fn measures(c: &mut Criterion) {
    let z3 = DvrSpec::zp(3).unwrap();
    let inp = SLemmaInput {
        alpha: 1,
        beta: 2,
        gamma: 0,
        v: [1, 2, 3, 1],
    };
    c.bench_function("s_oracle p=3 K=3", |b| {
        b.iter(|| s_oracle(&z3, black_box(&inp)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = series, identities, lattices, measures
}
criterion_main!(benches);

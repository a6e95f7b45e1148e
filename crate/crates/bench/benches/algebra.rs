use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use jumploci_core::algebra::factor::poly_factorize;
use jumploci_core::algebra::field::Field;
use jumploci_core::algebra::parse::parse_poly;
use jumploci_core::bruhat_tits::{ball, LatticeClass};
use jumploci_core::cohomology::{enumerate_exceptional_finite, h1};
use jumploci_core::metabelian::{alexander_matrix, minimal_prime_characters};
use jumploci_core::presentation::{Character, GroupPresentation};
use jumploci_core::valuation::DiscreteValuation;

fn genus2() -> GroupPresentation {
    GroupPresentation::parse("gens a1 b1 a2 b2\nrel [a1,b1] [a2,b2]").unwrap()
}

fn factorization(c: &mut Criterion) {
    let q = Field::rationals();
    let f = parse_poly(&q, "x", "x^8 - 1").unwrap();
    c.bench_function("factor x^8 - 1 over Q", |b| b.iter(|| poly_factorize(black_box(&f)).unwrap()));
    let f7 = Field::prime(7).unwrap();
    let g = parse_poly(&f7, "x", "x^12 + 3x^5 + x + 2").unwrap();
    c.bench_function("factor degree 12 over F7", |b| b.iter(|| poly_factorize(black_box(&g)).unwrap()));
}

fn cohomology(c: &mut Criterion) {
    let q = Field::rationals();
    let p = genus2();
    let chi = Character::new(&p, &q, [2, 3, 5, 7].map(|x| q.from_int(x)).to_vec()).unwrap();
    c.bench_function("H1 genus 2 over Q", |b| b.iter(|| h1(black_box(&chi))));
    let f5 = Field::prime(5).unwrap();
    c.bench_function("exceptional characters genus 2 over F5", |b| {
        b.iter(|| enumerate_exceptional_finite(black_box(&p), &f5).unwrap())
    });
}

fn tree(c: &mut Criterion) {
    let v = DiscreteValuation::p_adic(2).unwrap();
    let x = LatticeClass::standard(&v, 0);
    c.bench_function("ball radius 6 over (Q, v2)", |b| b.iter(|| ball(black_box(&x), 6).unwrap()));
}

fn alexander(c: &mut Criterion) {
    let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-6").unwrap();
    c.bench_function("minimal primes BS(1,6)", |b| {
        b.iter(|| minimal_prime_characters(&alexander_matrix(black_box(&p), 0).unwrap()).unwrap())
    });
}

criterion_group!(benches, factorization, cohomology, tree, alexander);
criterion_main!(benches);

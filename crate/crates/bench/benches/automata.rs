use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use twk_core::random::{random_2dfa, rng};
use twk_core::{
    build, compute_spectrum, convert_bounded_k, crossing_sequence_nfa, lambda_of_machine, minimize, run,
    shepherdson, Alphabet, EnumerationBudget, Family,
};

fn simulation(c: &mut Criterion) {
    let m = build(&Family::Awbwa2dfa { n: 4 }).unwrap();
    let word = m.alphabet().parse_chars("a1111b1111a").unwrap();
    c.bench_function("run awbwa_2dfa(4)", |b| b.iter(|| run(&m, black_box(&word), false).unwrap()));
}

fn conversions(c: &mut Criterion) {
    let mut group = c.benchmark_group("convert");
    for n in 1..=3 {
        let m = build(&Family::Suffix { n }).unwrap();
        group.bench_with_input(BenchmarkId::new("bounded_k", n), &m, |b, m| {
            b.iter(|| convert_bounded_k(m, n).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("shepherdson", n), &m, |b, m| b.iter(|| shepherdson(m).unwrap()));
        group.bench_with_input(BenchmarkId::new("crossing", n), &m, |b, m| {
            b.iter(|| crossing_sequence_nfa(m).unwrap())
        });
    }
    group.finish();
}

fn left_moves(c: &mut Criterion) {
    let alphabet = Alphabet::from_chars("01").unwrap();
    let mut r = rng(1);
    let machines: Vec<_> = (0..64).map(|_| random_2dfa(&mut r, 3, &alphabet, 0.2)).collect();
    c.bench_function("lambda_of_machine x64", |b| {
        b.iter(|| machines.iter().map(|m| lambda_of_machine(m).unwrap()).max())
    });
}

fn minimization(c: &mut Criterion) {
    let m = build(&Family::AwbwaDfa { i: 5 }).unwrap();
    c.bench_function("minimize awbwa_dfa(5)", |b| b.iter(|| minimize(black_box(&m)).unwrap()));
}

fn spectrum(c: &mut Criterion) {
    let l = build(&Family::Unary { n: 3 }).unwrap();
    let budget = EnumerationBudget::default();
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(10);
    group.bench_function("unary(3)", |b| b.iter(|| compute_spectrum(&l, &budget).unwrap()));
    group.finish();
}

criterion_group!(benches, simulation, conversions, left_moves, minimization, spectrum);
criterion_main!(benches);

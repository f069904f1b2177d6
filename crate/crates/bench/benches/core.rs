use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use kfold_core::commutant::{symmetrized_family, PermutationSign};
use kfold_core::ensembles::{haar_unitary, sample_gue, EnsembleSpec, PrecisionSpec, Sampler};
use kfold_core::hc::{hciz_exact, HcizProblem};
use kfold_core::repcore::c_coefficients;
use kfold_core::seed::rng;
use kfold_core::spectra::{summarize, SummaryOptions};
use kfold_core::{CharacterTable, ConstraintSet};

fn representation_theory(c: &mut Criterion) {
    let mut g = c.benchmark_group("repcore");
    for k in [4usize, 6, 8] {
        g.bench_with_input(BenchmarkId::new("character_table", k), &k, |b, &k| {
            b.iter(|| CharacterTable::new(black_box(k)).unwrap())
        });
    }
    g.bench_function("c_coefficients_k2_d4", |b| b.iter(|| c_coefficients(black_box(2), 4).unwrap()));
    g.bench_function("c_coefficients_k3_d3", |b| b.iter(|| c_coefficients(black_box(3), 3).unwrap()));
    g.finish();
}

fn invariant_families(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetrized_family");
    g.sample_size(10);
    for d in [2usize, 4] {
        let u = ConstraintSet::unitary(2, d);
        g.bench_with_input(BenchmarkId::new("unitary", d), &u, |b, &u| {
            b.iter(|| symmetrized_family(black_box(u)).unwrap())
        });
        let all = ConstraintSet::all(2, d);
        g.bench_with_input(BenchmarkId::new("all", d), &all, |b, &c| {
            b.iter(|| symmetrized_family(black_box(c)).unwrap())
        });
        let signed = u.with_permutations(PermutationSign::Sign);
        g.bench_with_input(BenchmarkId::new("signed", d), &signed, |b, &c| {
            b.iter(|| symmetrized_family(black_box(c)).unwrap())
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let mut g = c.benchmark_group("sampling");
    let mut r = rng(1);
    for n in [16usize, 64] {
        g.bench_with_input(BenchmarkId::new("gue", n), &n, |b, &n| b.iter(|| sample_gue(n, 1.0, &mut r).unwrap()));
        g.bench_with_input(BenchmarkId::new("haar_unitary", n), &n, |b, &n| {
            b.iter(|| haar_unitary(n, &mut r).unwrap())
        });
    }
    let sampler = Sampler::new(EnsembleSpec::Kfold {
        constraints: ConstraintSet::all(2, 4),
        precision: PrecisionSpec::Generic { strength: 0.7, seed: 5 },
    })
    .unwrap();
    let mut i = 0u64;
    g.bench_function("kfold_k2_d4", |b| {
        b.iter(|| {
            i += 1;
            sampler.sample(7, i).unwrap()
        })
    });
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("summarize");
    let mut r = rng(2);
    for n in [64usize, 256] {
        let h = sample_gue(n, 1.0, &mut r).unwrap();
        let opts = SummaryOptions::default();
        g.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| b.iter(|| summarize(h, &opts).unwrap()));
    }
    g.finish();
}

fn hciz(c: &mut Criterion) {
    let mut g = c.benchmark_group("hciz_exact");
    let generic = HcizProblem::new(vec![-0.4, 0.1, 0.7, 0.9], vec![0.3, -0.8, 0.5, 0.0], 1.0).unwrap();
    let degenerate = HcizProblem::new(vec![0.2, 0.2, 0.7, 0.9], vec![0.3, -0.8, 0.5, 0.0], 1.0).unwrap();
    g.bench_function("generic_n4", |b| b.iter(|| hciz_exact(black_box(&generic)).unwrap()));
    g.bench_function("degenerate_n4", |b| b.iter(|| hciz_exact(black_box(&degenerate)).unwrap()));
    g.finish();
}

criterion_group!(benches, representation_theory, invariant_families, sampling, spectra, hciz);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use torusnoise::{coherent_state, composed_matrix, evolve_with, spectrum, to_matrix, PhasePoint, Propagator};
use torusnoise_bench::{channel, dim, map};

const CHANNELS: [&str; 4] = ["dc", "pdc", "pdc-line:1,0,2", "adc"];

fn superoperator(c: &mut Criterion) {
    let mut g = c.benchmark_group("to_matrix");
    for n in [8, 16, 32] {
        for spec in CHANNELS {
            let ch = channel(spec, n);
            g.bench_with_input(BenchmarkId::new(spec, n), &ch, |b, ch| b.iter(|| to_matrix(black_box(ch))));
        }
    }
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let mut g = c.benchmark_group("spectrum");
    g.sample_size(10);
    for n in [8, 16, 32] {
        for spec in ["dc", "adc"] {
            let s = to_matrix(&channel(spec, n));
            g.bench_with_input(BenchmarkId::new(spec, n), &s, |b, s| b.iter(|| spectrum(black_box(s), 1e-6).unwrap()));
        }
        let s = composed_matrix(&channel("pdc", n), &map("cat-hyp", n)).unwrap();
        g.bench_with_input(BenchmarkId::new("pdc∘cat-hyp", n), &s, |b, s| {
            b.iter(|| spectrum(black_box(s), 1e-6).unwrap())
        });
    }
    g.finish();
}

fn evolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("evolve_20_steps");
    g.sample_size(10);
    for n in [16, 32] {
        let prop = Propagator::new(&channel("adc", n), &map("baker", n)).unwrap();
        let rho0 = coherent_state(PhasePoint::new(0.25, 0.25), dim(n)).projector();
        g.bench_with_input(BenchmarkId::new("adc∘baker", n), &prop, |b, p| {
            b.iter(|| evolve_with(black_box(p), &rho0, 20))
        });
    }
    g.finish();
}

criterion_group!(benches, superoperator, spectra, evolution);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use juoan2_bench::rng;
use juoan2_core::cryptanalysis::attack::build_ssp_lattice;
use juoan2_core::cryptanalysis::experiment::planted_ssp;
use juoan2_core::cryptanalysis::lattice::lll_reduce;
use num_rational::Rational64;
use std::hint::black_box;

fn lll(c: &mut Criterion) {
    let mut g = c.benchmark_group("lll_ssp_lattice");
    g.sample_size(10);
    for n in [10usize, 20, 30] {
        let p = planted_ssp(n, 0.5, &mut rng(n as u64)).unwrap();
        let lat = build_ssp_lattice(&p.weights, &p.target, &p.modulus).unwrap();
        g.bench_function(format!("n={n}"), |b| b.iter(|| lll_reduce(black_box(&lat), Rational64::new(3, 4)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, lll);
criterion_main!(benches);

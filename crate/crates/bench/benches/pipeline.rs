use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use slitkit::algebra::smith_normal_form;
use slitkit::complex::enumerate_nondegenerate;
use slitkit::{homology_from_cells, Coefficients, GradedMatrixComplex, ModuliIndex};

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    group.sample_size(10);
    for (g, m) in [(1, 1), (0, 4), (2, 0)] {
        let ix = ModuliIndex::new(g, 1, m).unwrap();
        group.bench_function(format!("g{g}m{m}"), |b| b.iter(|| enumerate_nondegenerate(black_box(&ix)).unwrap()));
    }
    group.finish();
}

fn assembly_and_homology(c: &mut Criterion) {
    let cells = enumerate_nondegenerate(&ModuliIndex::new(2, 1, 0).unwrap()).unwrap();
    let complex = GradedMatrixComplex::assemble(&cells).unwrap();
    let mut group = c.benchmark_group("g2m0");
    group.sample_size(10);
    group.bench_function("assemble", |b| b.iter(|| GradedMatrixComplex::assemble(black_box(&cells)).unwrap()));
    group.bench_function("homology Z", |b| b.iter(|| complex.homology_table(Coefficients::Integers).unwrap()));
    group.bench_function("homology F2", |b| b.iter(|| complex.homology_table(Coefficients::F2).unwrap()));
    group.bench_function("streamed homology Z", |b| {
        b.iter(|| homology_from_cells(black_box(cells.clone()), Coefficients::Integers).unwrap())
    });
    group.bench_function("snf of the widest coboundary", |b| {
        let widest = (0..complex.top_degree())
            .max_by_key(|&d| complex.coboundary(d).nnz())
            .unwrap();
        let m = complex.coboundary(widest);
        b.iter(|| smith_normal_form(black_box(&m), false))
    });
    group.finish();
}

criterion_group!(benches, enumeration, assembly_and_homology);
criterion_main!(benches);

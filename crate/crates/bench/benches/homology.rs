use criterion::{criterion_group, criterion_main, Criterion};
use torkh::braid::torus_braid;
use torkh::{complex, homology, BraidSpec, ComplexOptions, NormContext};

fn full_homology(c: &mut Criterion, n: usize, m: usize) {
    let d = torus_braid(BraidSpec::new(n, m).unwrap()).unwrap();
    c.bench_function(&format!("kh_T({n},{m})"), |b| {
        b.iter(|| {
            let cx = complex(&d, NormContext::ambient(&d), &ComplexOptions::default()).unwrap();
            homology(&cx).unwrap()
        })
    });
}

fn sliced_column(c: &mut Criterion, n: usize, m: usize, q: i32) {
    c.bench_function(&format!("kh_T({n},{m})_q{q}"), |b| {
        b.iter(|| torkh::homology_column(n, m, q, &ComplexOptions::default()).unwrap())
    });
}

fn benches(c: &mut Criterion) {
    full_homology(c, 2, 7);
    full_homology(c, 3, 4);
    sliced_column(c, 3, 5, 13);
    sliced_column(c, 4, 3, 11);
}

criterion_group! {
    name = group;
    config = Criterion::default().sample_size(10);
    targets = benches
}
criterion_main!(group);

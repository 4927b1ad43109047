use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use hermdens::density::verify_recursion;
use hermdens::hironaka::{orbit_sum, SLattice};
use hermdens::{alpha_poly, count_representations, mu_q, CanonicalForm, FieldParams, SType};
use hermdens_bench::count_job;

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_representations");
    g.sample_size(10);
    for ell in [1u32, 2] {
        let job = count_job(3, CanonicalForm::Diagonal { a: 1, b: 0, eps1: 1 }, ell);
        g.bench_with_input(BenchmarkId::new("p3_diag10", ell), &job, |b, job| {
            b.iter(|| count_representations(black_box(job)).unwrap())
        });
    }
    g.finish();
}

fn closed_forms(c: &mut Criterion) {
    let t = CanonicalForm::Diagonal { a: 9, b: 4, eps1: -1 };
    c.bench_function("alpha_poly_diag94", |b| b.iter(|| alpha_poly(black_box(7), &t, SType::NonSplit).unwrap()));
    c.bench_function("mu_q_10_10", |b| b.iter(|| mu_q(black_box(13), 10, 10).unwrap()));
}

fn recursion(c: &mut Criterion) {
    let params = FieldParams::new(5).unwrap();
    let t = CanonicalForm::Diagonal { a: 6, b: 3, eps1: 1 };
    c.bench_function("verify_recursion_diag63", |b| b.iter(|| verify_recursion(params, black_box(&t)).unwrap()));
}

fn orbit(c: &mut Criterion) {
    let s = SLattice::from(SType::Split);
    let t = CanonicalForm::Diagonal { a: 3, b: 2, eps1: 1 };
    c.bench_function("orbit_sum_diag32", |b| b.iter(|| orbit_sum(black_box(3), &t, &s).unwrap()));
}

criterion_group!(benches, counting, closed_forms, recursion, orbit);
criterion_main!(benches);

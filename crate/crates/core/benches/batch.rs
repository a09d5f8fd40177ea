use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use gog_core::cover::unfold_with;
use gog_core::elemabelian::{wreath_perm, FpVector, IndexSet};
use gog_core::exec::{trial_rng, Execution};
use gog_core::multigraph::random_tree;
use gog_core::paperlab::{cross_check_amalgam, pi_map};
use gog_core::permgroup::{closure_with, Perm};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn cross_check(c: &mut Criterion) {
    let mut group = c.benchmark_group("cross_check");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "p2n4x200"), &mode, |b, &mode| {
            b.iter(|| cross_check_amalgam(2, 4, 200, 0, mode).unwrap())
        });
    }
    group.finish();
}

fn closure(c: &mut Criterion) {
    // W_8 for p = 2: order 2^8 * 8 = 2048, degree 16.
    let q = pi_map(2, 8).unwrap();
    let mut gens: Vec<Perm> = q.letter_images().values().cloned().collect();
    let c0 = FpVector::basis(2, IndexSet::Finite(8), 0).unwrap();
    gens.push(wreath_perm(&c0, &Perm::identity(8)).unwrap());
    let mut group = c.benchmark_group("closure");
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "w8"), &mode, |b, &mode| {
            b.iter(|| closure_with(mode, 16, &gens, 1 << 20).unwrap())
        });
    }
    group.finish();
}

fn unfold(c: &mut Criterion) {
    let g = random_tree(6, &mut trial_rng(0, 0)).unwrap();
    let mut group = c.benchmark_group("unfold");
    group.sample_size(20);
    for (name, mode) in MODES {
        group.bench_with_input(BenchmarkId::new(name, "tree6r3"), &mode, |b, &mode| {
            b.iter(|| unfold_with(mode, &g, 3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cross_check, closure, unfold);
criterion_main!(benches);

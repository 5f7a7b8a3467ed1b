use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use maxstar::certify::{diagram_suite, verify_counterexample_with, Counterexample, DiagramKind};
use maxstar::{Exec, TNormSpec};

const EXECS: [(&str, Exec); 2] = [("seq", Exec::Sequential), ("par", Exec::Parallel)];

fn diagrams(c: &mut Criterion) {
    let mut g = c.benchmark_group("diagram_suite");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new(name, "4x1000"), &exec, |b, &exec| {
            b.iter(|| {
                for kind in DiagramKind::ALL {
                    black_box(diagram_suite(kind, &TNormSpec::Product, 1000, 7, exec));
                }
            })
        });
    }
    g.finish();
}

fn counterexamples(c: &mut Criterion) {
    let mut g = c.benchmark_group("verify_counterexample");
    g.sample_size(10);
    for case in [Counterexample::SectionInterval, Counterexample::MinSquare, Counterexample::TwoPointJoin] {
        let tn = case.default_tnorm();
        for (name, exec) in EXECS {
            g.bench_with_input(BenchmarkId::new(name, case.name()), &exec, |b, &exec| {
                b.iter(|| black_box(verify_counterexample_with(case, &tn, 1.0 / 16.0, exec).unwrap()))
            });
        }
    }
    g.finish();
}

fn axioms(c: &mut Criterion) {
    let mut g = c.benchmark_group("check_axioms");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_with_input(BenchmarkId::new(name, "sectionT/64"), &exec, |b, &exec| {
            b.iter(|| black_box(TNormSpec::SectionT.check_axioms_with(1.0 / 64.0, exec).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, diagrams, counterexamples, axioms);
criterion_main!(benches);

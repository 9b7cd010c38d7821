use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use satdef_core::enumerate::{Enumerator, Vocabulary};
use satdef_core::eval::{CtChecker, TruthOracle};
use satdef_core::forcing::{build_generic, forces, set_signature, Condition, ForcingMode};
use satdef_core::model::{build_hf, definable_elements};
use satdef_core::{decode, encode, parse, rank, Signature};

const LONG: &str = "(forall x (exists y (and (< x y) (forall z (or (not (< z y)) (exists w (= (+ z w) y)))))))";

fn complexity(c: &mut Criterion) {
    let f = parse(LONG, &Signature::arithmetic()).unwrap();
    c.bench_function("rank/nested", |b| b.iter(|| rank(black_box(&f))));
    let corpus = Enumerator::new(Vocabulary::arithmetic(&["x", "y"])).formulas_up_to(5);
    c.bench_function("rank/size<=5", |b| {
        b.iter(|| corpus.iter().map(|f| rank(f).sigma).sum::<usize>())
    });
}

fn coding(c: &mut Criterion) {
    let f = parse(LONG, &Signature::arithmetic()).unwrap();
    let code = encode(&f);
    c.bench_function("encode/nested", |b| b.iter(|| encode(black_box(&f))));
    c.bench_function("decode/nested", |b| b.iter(|| decode(black_box(&code)).unwrap()));
}

fn forcing(c: &mut Criterion) {
    let sig = set_signature();
    let f = parse("(forall v (implies (< v #5) (or (X v) (not (X (+ v 1))))))", &sig).unwrap();
    let s = Condition::parse("0110").unwrap();
    c.bench_function("forces/exact", |b| b.iter(|| forces(&s, &f, ForcingMode::Exact).unwrap()));

    let phis: Vec<_> = ["(X #3)", "(not (X #1))", "(exists v (and (< v #4) (X v)))", "(or (X #9) (X #10))"]
        .iter()
        .map(|t| parse(t, &sig).unwrap())
        .collect();
    let arith = Signature::arithmetic();
    let xis: Vec<_> = ["(= 0 0)", "(= 0 1)", "(< 0 1)", "(= 1 1)"]
        .iter()
        .map(|t| parse(t, &arith).unwrap())
        .collect();
    let truth = |x: &satdef_core::Formula| Ok(xis.iter().position(|y| y == x).is_some_and(|i| i != 1));
    c.bench_function("build_generic/8", |b| b.iter(|| build_generic(8, &phis, &xis, &truth).unwrap()));
}

fn definability(c: &mut Criterion) {
    let hf3 = build_hf(3).unwrap();
    let mut g = c.benchmark_group("definable_elements");
    g.sample_size(10);
    g.bench_function("hf3/size<=5", |b| b.iter(|| definable_elements(&hf3, 5, None).unwrap()));
    g.finish();
}

fn ct(c: &mut Criterion) {
    let checker = CtChecker::new(1, 4).unwrap();
    let oracle: TruthOracle = checker.codes().iter().map(|code| (code.clone(), true)).collect();
    c.bench_function("check_ct/depth1", |b| {
        b.iter_batched(|| oracle.clone(), |o| checker.check(&o), BatchSize::SmallInput)
    });
}

criterion_group!(benches, complexity, coding, forcing, definability, ct);
criterion_main!(benches);

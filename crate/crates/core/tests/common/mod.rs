//! Strategies and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use satdef_core::model::FiniteModel;
use satdef_core::syntax::{Formula, Term};

pub const VARS: [&str; 4] = ["x", "y", "z", "v0"];

pub fn arb_term(vars: &'static [&'static str]) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        proptest::sample::select(vars).prop_map(Term::var),
        Just(Term::zero()),
        Just(Term::one()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::times(a, b)),
        ]
    })
}

pub fn arb_formula_with(
    vars: &'static [&'static str],
    depth: u32,
    size: u32,
) -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (arb_term(vars), arb_term(vars)).prop_map(|(s, t)| Formula::eq(s, t)),
        (arb_term(vars), arb_term(vars)).prop_map(|(s, t)| Formula::less(s, t)),
    ];
    atom.prop_recursive(depth, size, 2, move |inner| {
        let v = proptest::sample::select(vars);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (v.clone(), inner.clone()).prop_map(|(v, g)| Formula::exists(v, g)),
            (v, inner).prop_map(|(v, g)| Formula::forall(v, g)),
        ]
    })
}

pub fn arb_formula() -> impl Strategy<Value = Formula> {
    arb_formula_with(&VARS, 6, 40)
}

/// Deterministic samples from a strategy.
pub fn samples<S: Strategy>(strategy: S, n: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..n)
        .map(|_| strategy.new_tree(&mut runner).expect("strategy").current())
        .collect()
}

/// Membership in the classes generated by the mutual grammar, read off
/// the productions directly.
pub fn in_s(f: &Formula, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    match f {
        Formula::Eq(..) | Formula::Rel(..) => true,
        Formula::Exists(_, g) => in_s(g, n),
        Formula::And(a, b) | Formula::Or(a, b) => in_s(a, n) && in_s(b, n),
        Formula::Not(g) => in_p(g, n),
        Formula::Forall(_, g) => in_p(g, n - 1),
    }
}

pub fn in_p(f: &Formula, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    match f {
        Formula::Eq(..) | Formula::Rel(..) => true,
        Formula::Forall(_, g) => in_p(g, n),
        Formula::And(a, b) | Formula::Or(a, b) => in_p(a, n) && in_p(b, n),
        Formula::Not(g) => in_s(g, n),
        Formula::Exists(_, g) => in_s(g, n - 1),
    }
}

/// Least levels by search over `n`.
pub fn grammar_rank(f: &Formula) -> (usize, usize) {
    let least = |pred: &dyn Fn(usize) -> bool| (1..).find(|&n| pred(n)).expect("every formula is ranked");
    (least(&|n| in_s(f, n)), least(&|n| in_p(f, n)))
}

fn collect_vars(f: &Formula, out: &mut BTreeSet<String>) {
    fn term(t: &Term, out: &mut BTreeSet<String>) {
        match t {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| term(a, out)),
        }
    }
    match f {
        Formula::Eq(s, t) => {
            term(s, out);
            term(t, out);
        }
        Formula::Rel(_, args) => args.iter().for_each(|a| term(a, out)),
        Formula::Not(g) => collect_vars(g, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            out.insert(v.clone());
            collect_vars(g, out);
        }
    }
}

fn replace_term(t: &Term, map: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| replace_term(a, map)).collect()),
    }
}

/// Plain replacement: `map` applies to every variable occurrence not bound
/// by a binder below the root.
fn replace(f: &Formula, map: &BTreeMap<String, Term>) -> Formula {
    match f {
        Formula::Eq(s, t) => Formula::eq(replace_term(s, map), replace_term(t, map)),
        Formula::Rel(r, args) => Formula::rel(r.clone(), args.iter().map(|a| replace_term(a, map)).collect()),
        Formula::Not(g) => Formula::not(replace(g, map)),
        Formula::And(a, b) => Formula::and(replace(a, map), replace(b, map)),
        Formula::Or(a, b) => Formula::or(replace(a, map), replace(b, map)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let mut inner = map.clone();
            inner.remove(v);
            let body = replace(g, &inner);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(v.clone(), body)
            } else {
                Formula::forall(v.clone(), body)
            }
        }
    }
}

/// Renames every binder to a globally fresh `b<k>`.
fn freshen(f: &Formula, counter: &mut usize) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(g) => Formula::not(freshen(g, counter)),
        Formula::And(a, b) => Formula::and(freshen(a, counter), freshen(b, counter)),
        Formula::Or(a, b) => Formula::or(freshen(a, counter), freshen(b, counter)),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let name = format!("bound_{counter}");
            *counter += 1;
            let renamed = replace(g, &BTreeMap::from([(v.clone(), Term::var(&name))]));
            let body = freshen(&renamed, counter);
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(name, body)
            } else {
                Formula::forall(name, body)
            }
        }
    }
}

/// Substitution by freshening all binders first and then replacing
/// without any capture check.
pub fn naive_substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    let mut counter = 0;
    let fresh = freshen(f, &mut counter);
    replace(&fresh, &BTreeMap::from([(v.to_string(), t.clone())]))
}

pub fn all_variables(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_vars(f, &mut out);
    out
}

/// Value of a term with `u128` arithmetic; `None` on overflow or an
/// unassigned variable.
pub fn term_value(t: &Term, env: &BTreeMap<String, u128>) -> Option<u128> {
    match t {
        Term::Var(v) => env.get(v).copied(),
        Term::Const(c) if c == "0" => Some(0),
        Term::Const(c) if c == "1" => Some(1),
        Term::Const(_) => None,
        Term::App(f, args) => {
            let a = term_value(&args[0], env)?;
            let b = term_value(&args[1], env)?;
            match f.as_str() {
                "+" => a.checked_add(b),
                "*" => a.checked_mul(b),
                _ => None,
            }
        }
    }
}

/// Truth in the naturals with every quantifier ranging over `0..domain`.
/// Exact for formulas whose quantifiers are relativized to bounds at most
/// `domain`, and for pure equations once `domain` exceeds every constant
/// by the quantifier count.
pub fn truncated_truth(f: &Formula, env: &mut BTreeMap<String, u128>, domain: u128) -> Option<bool> {
    Some(match f {
        Formula::Eq(s, t) => term_value(s, env)? == term_value(t, env)?,
        Formula::Rel(r, args) if r == "<" => term_value(&args[0], env)? < term_value(&args[1], env)?,
        Formula::Rel(..) => return None,
        Formula::Not(g) => !truncated_truth(g, env, domain)?,
        Formula::And(a, b) => truncated_truth(a, env, domain)? && truncated_truth(b, env, domain)?,
        Formula::Or(a, b) => truncated_truth(a, env, domain)? || truncated_truth(b, env, domain)?,
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let existential = matches!(f, Formula::Exists(..));
            let saved = env.get(v).copied();
            let mut result = !existential;
            for d in 0..domain {
                env.insert(v.clone(), d);
                let r = truncated_truth(g, env, domain);
                match r {
                    Some(b) if b == existential => {
                        result = existential;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        restore(env, v, saved);
                        return None;
                    }
                }
            }
            restore(env, v, saved);
            result
        }
    })
}

fn restore(env: &mut BTreeMap<String, u128>, v: &str, saved: Option<u128>) {
    match saved {
        Some(x) => env.insert(v.to_string(), x),
        None => env.remove(v),
    };
}

/// Every model over `0..n` with one binary relation `E`.
pub fn binary_relation_models(n: usize) -> Vec<FiniteModel> {
    relation_models(n, "E")
}

/// Every model over `0..n` with one binary relation `name`.
pub fn relation_models(n: usize, name: &str) -> Vec<FiniteModel> {
    let pairs: Vec<Vec<usize>> = (0..n).flat_map(|a| (0..n).map(move |b| vec![a, b])).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut m = FiniteModel::with_size(n).expect("n >= 1");
            let tuples = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone());
            m.add_relation(name, 2, tuples).expect("in range");
            m
        })
        .collect()
}

/// Truth in a finite model by direct recursion, over `E` and equality.
pub fn model_truth(f: &Formula, m: &FiniteModel, env: &mut BTreeMap<String, usize>) -> bool {
    let val = |t: &Term, env: &BTreeMap<String, usize>| match t {
        Term::Var(v) => env[v],
        Term::Const(c) => m.constant(c).expect("constant"),
        Term::App(..) => panic!("relational only"),
    };
    match f {
        Formula::Eq(s, t) => val(s, env) == val(t, env),
        Formula::Rel(r, args) => {
            let tuple: Vec<usize> = args.iter().map(|a| val(a, env)).collect();
            m.relation(r).expect("relation").tuples.contains(&tuple)
        }
        Formula::Not(g) => !model_truth(g, m, env),
        Formula::And(a, b) => model_truth(a, m, env) && model_truth(b, m, env),
        Formula::Or(a, b) => model_truth(a, m, env) || model_truth(b, m, env),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            let existential = matches!(f, Formula::Exists(..));
            let saved = env.get(v).copied();
            let mut result = !existential;
            for d in 0..m.len() {
                env.insert(v.clone(), d);
                if model_truth(g, m, env) == existential {
                    result = existential;
                    break;
                }
            }
            match saved {
                Some(x) => env.insert(v.clone(), x),
                None => env.remove(v),
            };
            result
        }
    }
}

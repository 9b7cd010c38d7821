mod common;

use std::collections::BTreeMap;

use common::{arb_formula_with, binary_relation_models, model_truth, samples, truncated_truth};
use num_bigint::BigUint;
use proptest::prelude::*;
use satdef_core::enumerate::{Enumerator, Vocabulary};
use satdef_core::eval::{
    bound_term, eval_finite, eval_nat, relativize, CompositionalChecker, Context, EvalBudget,
    SatTable, Verdict,
};
use satdef_core::syntax::{free_vars, Formula};

static SMALL_VARS: [&str; 3] = ["x", "y", "z"];

fn assignment(f: &Formula, seed: u64) -> (BTreeMap<String, BigUint>, BTreeMap<String, u128>) {
    let mut big = BTreeMap::new();
    let mut small = BTreeMap::new();
    for (i, v) in free_vars(f).into_iter().enumerate() {
        let val = (seed >> (2 * i)) % 4;
        big.insert(v.clone(), BigUint::from(val));
        small.insert(v, val as u128);
    }
    (big, small)
}

proptest! {
    #[test]
    fn bounded_verdicts_match_truncated_search(f in arb_formula_with(&SMALL_VARS, 4, 16), seed: u64) {
        let g = relativize(&f, &bound_term(4));
        let (big, mut small) = assignment(&g, seed);
        let v = eval_nat(&g, &big, &EvalBudget::default()).unwrap();
        if let (Some(got), Some(want)) = (v.definite(), truncated_truth(&g, &mut small, 4)) {
            prop_assert_eq!(got, want, "{}", g);
        }
    }

    #[test]
    fn larger_budgets_never_flip(f in arb_formula_with(&SMALL_VARS, 4, 16), seed: u64) {
        let (big, _) = assignment(&f, seed);
        let mut seen: Option<bool> = None;
        for bound in [1u64, 3, 6, 12] {
            let budget = EvalBudget { bound, ..EvalBudget::default() };
            let v = eval_nat(&f, &big, &budget).unwrap();
            if let Some(b) = v.definite() {
                if let Some(prev) = seen {
                    prop_assert_eq!(prev, b);
                }
                seen = Some(b);
            } else {
                prop_assert!(seen.is_none(), "resolved verdict became unknown");
            }
        }
    }
}

#[test]
fn closed_numeral_sentences_are_decided() {
    for f in samples(arb_formula_with(&SMALL_VARS, 3, 10), 200) {
        let g = relativize(&f, &bound_term(3));
        let (big, mut small) = assignment(&g, 0x9e37);
        let v = eval_nat(&g, &big, &EvalBudget::default()).unwrap();
        assert_ne!(v, Verdict::Unknown, "{g}");
        if let Some(want) = truncated_truth(&g, &mut small, 3) {
            assert_eq!(v.definite(), Some(want));
        }
    }
}

#[test]
fn finite_evaluation_agrees_with_direct_recursion() {
    let voc = Vocabulary {
        relations: vec![("E".into(), 2)],
        ..Vocabulary::arithmetic(&["x", "y"])
    };
    let voc = Vocabulary { constants: vec![], functions: vec![], ..voc };
    let fs = Enumerator::new(voc).formulas_up_to(5);
    for m in binary_relation_models(2) {
        for f in &fs {
            let vars: Vec<String> = free_vars(f).into_iter().collect();
            for code in 0..(m.len() as u32).pow(vars.len() as u32) {
                let asn: BTreeMap<String, usize> = vars
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), (code as usize / m.len().pow(i as u32)) % m.len()))
                    .collect();
                let mut env = asn.clone();
                assert_eq!(eval_finite(f, &m, &asn).unwrap(), model_truth(f, &m, &mut env));
            }
        }
    }
}

#[test]
fn bounded_naturals_context_accepts_exact_table() {
    let fs: Vec<Formula> = samples(arb_formula_with(&SMALL_VARS, 3, 10), 30)
        .into_iter()
        .map(|f| relativize(&f, &bound_term(3)))
        .collect();
    let checker = CompositionalChecker::new(&fs, Context::NatBounded { bound: 3 }).unwrap();
    let report = checker.check(|code, asn| {
        let f = fs.iter().find(|f| satdef_core::encode(f) == *code).cloned().or_else(|| {
            satdef_core::coding::decode_formula(code).ok()
        })?;
        let nat: BTreeMap<String, BigUint> = asn.iter().map(|(k, &v)| (k.clone(), BigUint::from(v))).collect();
        eval_nat(&f, &nat, &EvalBudget::default()).unwrap().definite()
    });
    assert!(report.is_clean(), "{:?}", report.violations.first());
    let m = &binary_relation_models(2)[5];
    let table = SatTable::of_model(m, &[]).unwrap();
    assert!(table.is_empty());
}

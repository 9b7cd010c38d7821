mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{arb_formula_with, arb_term, binary_relation_models, samples};
use proptest::prelude::*;
use satdef_core::coding::{encode, numeral};
use satdef_core::complexity::rank;
use satdef_core::enumerate::{Enumerator, Vocabulary};
use satdef_core::eval::{eval_finite_in, eval_nat_in, EvalBudget, Expansion, NatExpansion, Val};
use satdef_core::schema::{
    def_axiom, instances, rsat_instances, skolem_axiom, tb_axiom, translate_predicate, twotb_axiom,
    usb_axiom, SchemaId,
};
use satdef_core::syntax::{alpha_eq, free_vars, parse, substitute, Formula, Signature, Term};

static VARS: [&str; 2] = ["x", "y"];

fn relational_formulas(max: usize) -> Vec<Formula> {
    let voc = Vocabulary {
        relations: vec![("E".into(), 2)],
        constants: vec![],
        functions: vec![],
        ..Vocabulary::arithmetic(&["x", "y"])
    };
    Enumerator::new(voc).formulas_up_to(max)
}

#[test]
fn instances_reparse_as_sentences() {
    let sentences: Vec<Formula> = samples(arb_formula_with(&VARS, 3, 8), 200)
        .into_iter()
        .filter(|f| free_vars(f).is_empty())
        .collect();
    let unary: Vec<Formula> = samples(arb_formula_with(&VARS, 3, 8), 400)
        .into_iter()
        .filter(|f| free_vars(f).len() == 1)
        .collect();
    assert!(sentences.len() > 10 && unary.len() > 10);
    for (schema, sources) in [
        (SchemaId::Tb, &sentences),
        (SchemaId::Twotb, &sentences),
        (SchemaId::Usb, &unary),
        (SchemaId::Def, &unary),
        (SchemaId::Skolem, &unary),
    ] {
        let even = &sources[..sources.len() / 2 * 2];
        let set = instances(schema, even).unwrap();
        for inst in &set.instances {
            assert!(free_vars(&inst.formula).is_empty(), "{schema:?}: {}", inst.instance);
            assert_eq!(parse(&inst.instance, &set.signature).unwrap(), inst.formula);
            rank(&inst.formula);
        }
    }
    let set = rsat_instances(&[parse("(< y x)", &Signature::arithmetic()).unwrap()], &7u32.into(), 1).unwrap();
    for inst in &set.instances {
        assert!(free_vars(&inst.formula).is_empty());
        assert_eq!(parse(&inst.instance, &set.signature).unwrap(), inst.formula);
    }
}

#[test]
fn tb_instances_detect_a_flipped_truth_bit() {
    let sentences = ["(= 0 0)", "(not (= 0 1))", "(< 1 (+ 1 1))", "(= (* 1 1) 0)"]
        .map(|t| parse(t, &Signature::arithmetic()).unwrap());
    let truth: BTreeSet<_> = [0usize, 1, 2].iter().map(|&i| encode(&sentences[i])).collect();
    let holds = |set: &BTreeSet<_>, f: &Formula| {
        let exp = NatExpansion::new().with_set("T", set.clone());
        eval_nat_in(&tb_axiom(f).unwrap(), &exp, &Default::default(), &EvalBudget::default())
            .unwrap()
            .definite()
            .unwrap()
    };
    assert!(sentences.iter().all(|f| holds(&truth, f)));
    for f in &sentences {
        let mut flipped = truth.clone();
        let c = encode(f);
        if !flipped.remove(&c) {
            flipped.insert(c);
        }
        assert!(!holds(&flipped, f));
    }
}

#[test]
fn twotb_holds_with_either_oracle() {
    let phi = parse("(= 0 0)", &Signature::arithmetic()).unwrap();
    let psi = parse("(not (= 0 0))", &Signature::arithmetic()).unwrap();
    let ax = twotb_axiom(&phi, &psi).unwrap();
    let truth: BTreeSet<_> = [encode(&phi)].into();
    for (t1, t2) in [(truth.clone(), BTreeSet::new()), (BTreeSet::new(), truth)] {
        let exp = NatExpansion::new().with_set("T1", t1).with_set("T2", t2);
        let v = eval_nat_in(&ax, &exp, &Default::default(), &EvalBudget::default()).unwrap();
        assert_eq!(v.definite(), Some(true));
    }
}

#[test]
fn skolem_instance_with_assigned_witness() {
    let phi = parse("(= x 0)", &Signature::arithmetic()).unwrap();
    let ax = skolem_axiom(&phi).unwrap();
    let exp = NatExpansion::new().with_function("H", 1, |_| 0u32.into());
    let v = eval_nat_in(&ax, &exp, &Default::default(), &EvalBudget::default()).unwrap();
    assert_eq!(v.definite(), Some(true));
}

#[test]
fn def_axiom_in_finite_models() {
    let voc_sig = Signature::empty().with_relation("E", 2).unwrap();
    let unique = parse("(forall y (not (E y x)))", &voc_sig).unwrap();
    let loose = parse("(= x x)", &voc_sig).unwrap();
    for m in binary_relation_models(2) {
        for phi in [&unique, &loose] {
            let sat: Vec<usize> = m
                .elements()
                .filter(|&e| common::model_truth(phi, &m, &mut BTreeMap::from([("x".to_string(), e)])))
                .collect();
            let table: Vec<Vec<Val>> = if sat.len() == 1 {
                vec![vec![Val::Code(encode(phi)), Val::Elem(sat[0])]]
            } else {
                vec![]
            };
            let exp = Expansion::new().with_relation("D", 2, table);
            let ax = def_axiom(phi).unwrap();
            assert!(eval_finite_in(&ax, &m, &exp, &BTreeMap::new()).unwrap());
        }
    }
}

/// Satisfaction table of `m` for one-variable formulas, as an expansion.
fn self_table(m: &satdef_core::FiniteModel, fs: &[Formula]) -> Expansion {
    let mut rows = Vec::new();
    for f in fs {
        let v = free_vars(f).into_iter().next().unwrap();
        for e in m.elements() {
            if common::model_truth(f, m, &mut BTreeMap::from([(v.clone(), e)])) {
                rows.push(vec![Val::Code(encode(f)), Val::Elem(e)]);
            }
        }
    }
    Expansion::new().with_relation("S", 2, rows)
}

#[test]
fn usb_holds_in_self_tables_sampled() {
    let fs: Vec<Formula> = relational_formulas(5).into_iter().filter(|f| free_vars(f).len() == 1).collect();
    for m in binary_relation_models(2) {
        let exp = self_table(&m, &fs);
        for f in &fs {
            assert!(eval_finite_in(&usb_axiom(f).unwrap(), &m, &exp, &BTreeMap::new()).unwrap(), "{f}");
        }
    }
}

fn arb_e_formula() -> impl Strategy<Value = Formula> {
    let atom = prop_oneof![
        (proptest::sample::select(&VARS[..]), proptest::sample::select(&VARS[..]))
            .prop_map(|(a, b)| Formula::rel("R", vec![Term::var(a), Term::var(b)])),
        (proptest::sample::select(&VARS[..]), proptest::sample::select(&VARS[..]))
            .prop_map(|(a, b)| Formula::eq(Term::var(a), Term::var(b))),
    ];
    atom.prop_recursive(4, 16, 2, |inner| {
        let v = proptest::sample::select(&VARS[..]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (v.clone(), inner.clone()).prop_map(|(v, g)| Formula::exists(v, g)),
            (v, inner).prop_map(|(v, g)| Formula::forall(v, g)),
        ]
    })
}

fn defn() -> Formula {
    // R(a, b) := exists x (E a x and E x b)
    let sig = Signature::empty().with_relation("E", 2).unwrap();
    parse("(exists x (and (E a x) (E x b)))", &sig).unwrap()
}

fn params() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

proptest! {
    #[test]
    fn translation_is_a_homomorphism(f in arb_e_formula(), g in arb_e_formula()) {
        let t = |h: &Formula| translate_predicate(h, "R", &params(), &defn()).unwrap();
        prop_assert!(!t(&f).mentions_relation("R"));
        prop_assert_eq!(t(&Formula::not(f.clone())), Formula::not(t(&f)));
        prop_assert_eq!(t(&Formula::and(f.clone(), g.clone())), Formula::and(t(&f), t(&g)));
        prop_assert_eq!(t(&Formula::or(f.clone(), g.clone())), Formula::or(t(&f), t(&g)));
        prop_assert!(alpha_eq(&t(&Formula::forall("y", f.clone())), &Formula::forall("y", t(&f))));
    }

    #[test]
    fn translation_commutes_with_substitution(f in arb_e_formula(), target in arb_term(&["y", "w"])) {
        let t = |h: &Formula| translate_predicate(h, "R", &params(), &defn()).unwrap();
        // y and w occur nowhere in the definition
        let left = t(&substitute(&f, "y", &target));
        let right = substitute(&t(&f), "y", &target);
        prop_assert!(alpha_eq(&left, &right), "{} vs {}", left, right);
    }

    #[test]
    fn translation_preserves_truth(f in arb_e_formula(), mask in 0u64..16) {
        let mut m = satdef_core::FiniteModel::with_size(2).unwrap();
        let pairs = [[0, 0], [0, 1], [1, 0], [1, 1]];
        m.add_relation("E", 2, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p.to_vec())).unwrap();
        let mut r_tuples = Vec::new();
        for p in pairs {
            let asn = BTreeMap::from([("a".to_string(), p[0]), ("b".to_string(), p[1])]);
            if satdef_core::eval::eval_finite(&defn(), &m, &asn).unwrap() {
                r_tuples.push(p.to_vec());
            }
        }
        let mut mr = m.clone();
        mr.add_relation("R", 2, r_tuples).unwrap();
        let translated = translate_predicate(&f, "R", &params(), &defn()).unwrap();
        let vars: Vec<String> = free_vars(&f).into_iter().collect();
        for code in 0..1usize << vars.len() {
            let asn: BTreeMap<String, usize> = vars.iter().enumerate().map(|(i, v)| (v.clone(), code >> i & 1)).collect();
            prop_assert_eq!(
                satdef_core::eval::eval_finite(&f, &mr, &asn).unwrap(),
                satdef_core::eval::eval_finite(&translated, &m, &asn).unwrap()
            );
        }
    }
}

#[test]
fn numeral_codes_in_instances() {
    let phi = parse("(= v 0)", &Signature::arithmetic()).unwrap();
    let inst = usb_axiom(&phi).unwrap();
    let Formula::Forall(_, body) = inst else { panic!() };
    let Formula::And(l, _) = *body else { panic!() };
    let Formula::Or(nl, _) = *l else { panic!() };
    let Formula::Not(s_atom) = *nl else { panic!() };
    assert_eq!(*s_atom, Formula::rel("S", vec![numeral(&encode(&phi)), Term::var("x")]));
}

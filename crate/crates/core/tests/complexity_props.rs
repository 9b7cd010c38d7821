mod common;

use std::collections::BTreeMap;

use common::{arb_formula, grammar_rank};
use proptest::prelude::*;
use satdef_core::complexity::{dp, in_pi, in_sigma, pdp, pdp_term, rank};
use satdef_core::enumerate::{Enumerator, Vocabulary};
use satdef_core::syntax::{Formula, Term};

fn max_term_pdp(f: &Formula) -> usize {
    match f {
        Formula::Eq(s, t) => pdp_term(s).max(pdp_term(t)),
        Formula::Rel(_, args) => args.iter().map(pdp_term).max().unwrap_or(0),
        _ => f.children().into_iter().map(max_term_pdp).max().unwrap_or(0),
    }
}

fn rename(f: &Formula, map: &BTreeMap<&str, &str>) -> Formula {
    fn term(t: &Term, map: &BTreeMap<&str, &str>) -> Term {
        match t {
            Term::Var(v) => Term::var(map.get(v.as_str()).copied().unwrap_or(v)),
            Term::Const(_) => t.clone(),
            Term::App(g, args) => Term::app(g.clone(), args.iter().map(|a| term(a, map)).collect()),
        }
    }
    let r = |v: &String| map.get(v.as_str()).copied().unwrap_or(v).to_string();
    match f {
        Formula::Eq(s, t) => Formula::eq(term(s, map), term(t, map)),
        Formula::Rel(n, args) => Formula::rel(n.clone(), args.iter().map(|a| term(a, map)).collect()),
        Formula::Not(g) => Formula::not(rename(g, map)),
        Formula::And(a, b) => Formula::and(rename(a, map), rename(b, map)),
        Formula::Or(a, b) => Formula::or(rename(a, map), rename(b, map)),
        Formula::Exists(v, g) => Formula::exists(r(v), rename(g, map)),
        Formula::Forall(v, g) => Formula::forall(r(v), rename(g, map)),
    }
}

#[test]
fn cross_embedding_and_monotonicity_exhaustive() {
    let mut e = Enumerator::new(Vocabulary::arithmetic(&["x", "y"]));
    for f in e.formulas_up_to(7) {
        let r = rank(&f);
        assert!(!in_sigma(&f, 0) && !in_pi(&f, 0));
        for n in 1..=r.sigma.max(r.pi) + 1 {
            if in_sigma(&f, n) {
                assert!(in_sigma(&f, n + 1) && in_pi(&f, n + 1), "{f}");
            }
            if in_pi(&f, n) {
                assert!(in_pi(&f, n + 1) && in_sigma(&f, n + 1), "{f}");
            }
        }
    }
}

proptest! {
    #[test]
    fn rank_matches_grammar(f in arb_formula()) {
        let r = rank(&f);
        prop_assert_eq!((r.sigma, r.pi), grammar_rank(&f));
    }

    #[test]
    fn duality(f in arb_formula()) {
        let (r, n) = (rank(&f), rank(&Formula::not(f.clone())));
        prop_assert_eq!(n.sigma, r.pi);
        prop_assert_eq!(n.pi, r.sigma);
    }

    #[test]
    fn pure_depth_bound(f in arb_formula()) {
        prop_assert!(pdp(&f) <= dp(&f) + max_term_pdp(&f));
    }

    #[test]
    fn depth_ignores_names(f in arb_formula()) {
        let map = BTreeMap::from([("x", "a"), ("y", "b"), ("z", "x"), ("v0", "y")]);
        prop_assert_eq!(dp(&rename(&f, &map)), dp(&f));
        prop_assert_eq!(pdp(&rename(&f, &map)), pdp(&f));
    }
}

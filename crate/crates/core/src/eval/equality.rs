//! Decision procedure for the pure-equality fragment over the naturals:
//! every atom is an equation between variables and closed terms of the
//! arithmetic core. Such a formula only sees which values are equal, so
//! quantifiers may range over the values of its closed terms plus one fresh
//! value per quantifier.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::nat::{eval_term, NatAssignment};
use crate::syntax::{Formula, Term};

fn simple_term(t: &Term) -> bool {
    matches!(t, Term::Var(_)) || (t.is_closed() && eval_term(t, &NatAssignment::new()).is_ok())
}

pub fn in_equality_fragment(f: &Formula) -> bool {
    match f {
        Formula::Eq(s, t) => simple_term(s) && simple_term(t),
        Formula::Rel(..) => false,
        _ => f.children().into_iter().all(in_equality_fragment),
    }
}

fn constants(f: &Formula, out: &mut BTreeSet<BigUint>) {
    match f {
        Formula::Eq(s, t) => {
            for u in [s, t] {
                if u.is_closed() {
                    out.insert(eval_term(u, &NatAssignment::new()).expect("fragment checked"));
                }
            }
        }
        _ => f.children().into_iter().for_each(|c| constants(c, out)),
    }
}

fn quantifiers(f: &Formula) -> usize {
    match f {
        Formula::Exists(_, g) | Formula::Forall(_, g) => 1 + quantifiers(g),
        _ => f.children().into_iter().map(quantifiers).sum(),
    }
}

fn value(t: &Term, env: &[(String, BigUint)]) -> BigUint {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(n, _)| n == v)
            .map(|(_, x)| x.clone())
            .expect("free variables are assigned"),
        _ => eval_term(t, &NatAssignment::new()).expect("fragment checked"),
    }
}

fn decide(f: &Formula, domain: &[BigUint], env: &mut Vec<(String, BigUint)>) -> bool {
    match f {
        Formula::Eq(s, t) => value(s, env) == value(t, env),
        Formula::Rel(..) => unreachable!("fragment checked"),
        Formula::Not(g) => !decide(g, domain, env),
        Formula::And(a, b) => decide(a, domain, env) && decide(b, domain, env),
        Formula::Or(a, b) => decide(a, domain, env) || decide(b, domain, env),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let existential = matches!(f, Formula::Exists(..));
            for d in domain {
                env.push((x.clone(), d.clone()));
                let v = decide(g, domain, env);
                env.pop();
                if v == existential {
                    return existential;
                }
            }
            !existential
        }
    }
}

/// Exact truth in the standard model for formulas of the pure-equality
/// fragment; `None` outside the fragment or when a free variable is unassigned.
pub fn decide_equality(f: &Formula, asn: &NatAssignment) -> Option<bool> {
    if !in_equality_fragment(f) || !crate::syntax::free_vars(f).iter().all(|v| asn.contains_key(v)) {
        return None;
    }
    let mut consts = BTreeSet::new();
    constants(f, &mut consts);
    consts.extend(asn.values().cloned());
    let mut domain: Vec<BigUint> = consts.iter().cloned().collect();
    let mut fresh = consts.iter().max().map_or(BigUint::from(0u32), |m| m + 1u32);
    for _ in 0..quantifiers(f) + 1 {
        domain.push(fresh.clone());
        fresh += 1u32;
    }
    let mut env = asn.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    Some(decide(f, &domain, &mut env))
}

use std::collections::BTreeSet;

use super::ast::{Formula, Term};

pub fn term_vars(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(v) => {
            out.insert(v.clone());
        }
        Term::Const(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| term_vars(a, out)),
    }
}

pub fn free_vars_term(t: &Term) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    term_vars(t, &mut out);
    out
}

pub fn free_vars(f: &Formula) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_free(f, &mut Vec::new(), &mut out);
    out
}

fn collect_free(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    let add_term = |t: &Term, out: &mut BTreeSet<String>| {
        let mut vs = BTreeSet::new();
        term_vars(t, &mut vs);
        out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
    };
    match f {
        Formula::Eq(s, t) => {
            add_term(s, out);
            add_term(t, out);
        }
        Formula::Rel(_, args) => args.iter().for_each(|a| add_term(a, out)),
        Formula::Not(g) => collect_free(g, bound, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            bound.push(v.clone());
            collect_free(g, bound, out);
            bound.pop();
        }
    }
}

pub fn is_sentence(f: &Formula) -> bool {
    free_vars(f).is_empty()
}

/// Every variable name occurring in `f`, free or bound (binder names included).
pub fn all_vars(f: &Formula) -> BTreeSet<String> {
    fn go(f: &Formula, out: &mut BTreeSet<String>) {
        match f {
            Formula::Eq(s, t) => {
                term_vars(s, out);
                term_vars(t, out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| term_vars(a, out)),
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                out.insert(v.clone());
                go(g, out);
            }
            _ => f.children().into_iter().for_each(|c| go(c, out)),
        }
    }
    let mut out = BTreeSet::new();
    go(f, &mut out);
    out
}

/// The variable `v<k>` with the smallest `k` not in `avoid`.
pub fn fresh_var(avoid: &BTreeSet<String>) -> String {
    (0..)
        .map(|k| format!("v{k}"))
        .find(|name| !avoid.contains(name))
        .expect("the v-namespace is infinite")
}

pub fn substitute_term(t: &Term, v: &str, s: &Term) -> Term {
    match t {
        Term::Var(x) if x == v => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(
            f.clone(),
            args.iter().map(|a| substitute_term(a, v, s)).collect(),
        ),
    }
}

/// Capture-avoiding substitution of `t` for the free occurrences of `v`.
///
/// A binder whose variable occurs in `t` is renamed to a fresh `v<k>` before
/// descending, but only when `v` actually occurs free below it; subformulas
/// without free `v` are returned untouched.
pub fn substitute(f: &Formula, v: &str, t: &Term) -> Formula {
    let t_vars = free_vars_term(t);
    subst(f, v, t, &t_vars)
}

fn subst(f: &Formula, v: &str, t: &Term, t_vars: &BTreeSet<String>) -> Formula {
    match f {
        Formula::Eq(a, b) => Formula::Eq(substitute_term(a, v, t), substitute_term(b, v, t)),
        Formula::Rel(r, args) => Formula::Rel(
            r.clone(),
            args.iter().map(|a| substitute_term(a, v, t)).collect(),
        ),
        Formula::Not(g) => Formula::not(subst(g, v, t, t_vars)),
        Formula::And(a, b) => Formula::and(subst(a, v, t, t_vars), subst(b, v, t, t_vars)),
        Formula::Or(a, b) => Formula::or(subst(a, v, t, t_vars), subst(b, v, t, t_vars)),
        Formula::Exists(x, body) | Formula::Forall(x, body) => {
            if x == v || !free_vars(body).contains(v) {
                return f.clone();
            }
            let (x, body) = if t_vars.contains(x) {
                let mut avoid = all_vars(body);
                avoid.extend(t_vars.iter().cloned());
                avoid.insert(v.to_string());
                avoid.insert(x.clone());
                let fresh = fresh_var(&avoid);
                let renamed = subst(body, x, &Term::Var(fresh.clone()), &BTreeSet::new());
                (fresh, renamed)
            } else {
                (x.clone(), (**body).clone())
            };
            let body = subst(&body, v, t, t_vars);
            match f {
                Formula::Exists(..) => Formula::exists(x, body),
                _ => Formula::forall(x, body),
            }
        }
    }
}

/// Alpha-equivalence: equal up to a consistent renaming of bound variables.
pub fn alpha_eq(f: &Formula, g: &Formula) -> bool {
    alpha(f, g, &mut Vec::new(), &mut Vec::new())
}

fn var_slot(env: &[String], v: &str) -> Option<usize> {
    env.iter().rposition(|b| b == v)
}

fn alpha_term(s: &Term, t: &Term, left: &[String], right: &[String]) -> bool {
    match (s, t) {
        (Term::Var(a), Term::Var(b)) => match (var_slot(left, a), var_slot(right, b)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => a == b,
            _ => false,
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, left, right))
        }
        _ => false,
    }
}

fn alpha(f: &Formula, g: &Formula, left: &mut Vec<String>, right: &mut Vec<String>) -> bool {
    match (f, g) {
        (Formula::Eq(a, b), Formula::Eq(c, d)) => {
            alpha_term(a, c, left, right) && alpha_term(b, d, left, right)
        }
        (Formula::Rel(r, xs), Formula::Rel(s, ys)) => {
            r == s
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| alpha_term(x, y, left, right))
        }
        (Formula::Not(a), Formula::Not(b)) => alpha(a, b, left, right),
        (Formula::And(a, b), Formula::And(c, d)) | (Formula::Or(a, b), Formula::Or(c, d)) => {
            alpha(a, c, left, right) && alpha(b, d, left, right)
        }
        (Formula::Exists(x, a), Formula::Exists(y, b))
        | (Formula::Forall(x, a), Formula::Forall(y, b)) => {
            left.push(x.clone());
            right.push(y.clone());
            let ok = alpha(a, b, left, right);
            left.pop();
            right.pop();
            ok
        }
        _ => false,
    }
}

//! The forcing relation for formulas with one set variable `X`.
//!
//! Clauses: `s ⊩ t ∈ X` iff bit `val(t)` of `s` is 1; arithmetic atoms are
//! forced iff true; `s ⊩ ¬ψ` iff no `t ⊇ s` forces `ψ`; `∨` and `∃` are
//! forced when a disjunct resp. a witness is. `∧` and `∀` abbreviate
//! `¬(¬a ∨ ¬b)` and `¬∃¬`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use super::Condition;
use crate::error::{Error, Result};
use crate::eval::{bounded_shape, eval_nat, eval_term, EvalBudget, Verdict};
use crate::syntax::{free_vars, free_vars_term, Formula, Signature, Term};

/// The set variable.
pub const SET_VAR: &str = "X";
/// Largest number of fresh bits an exact-mode extension search may range over.
pub const MAX_EXTENSION_BITS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForcingMode {
    Exact,
    /// Witness and extension searches capped by the budget.
    Budget(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcingVerdict {
    Forced,
    NotForced,
    Unknown,
}

impl ForcingVerdict {
    fn from_bool(b: bool) -> ForcingVerdict {
        if b {
            ForcingVerdict::Forced
        } else {
            ForcingVerdict::NotForced
        }
    }
}

/// Signature of set formulas: the arithmetic core plus unary `X`.
pub fn set_signature() -> Signature {
    Signature::arithmetic()
        .with_relation(SET_VAR, 1)
        .expect("X is not an arithmetic symbol")
}

fn check_set_formula(f: &Formula) -> Result<()> {
    set_signature().check_formula(f)
}

fn walk_bound(f: &Formula, env: &mut Env) -> Option<BigUint> {
    let closed = |t: &Term, env: &Env| {
        free_vars_term(t).iter().all(|v| env.iter().any(|(n, _)| n == v))
    };
    match f {
        Formula::Rel(r, args) if r == SET_VAR => {
            closed(&args[0], env).then(|| value(&args[0], env).ok()).flatten().map(|n| n + 1u32)
        }
        Formula::Eq(..) | Formula::Rel(..) => {
            free_vars(f).iter().all(|v| env.iter().any(|(n, _)| n == v)).then(BigUint::zero)
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            let q = bounded_shape(f)?;
            if !closed(q.bound, env) {
                return None;
            }
            // terms are monotone, so the largest index is reached at the top value
            let top = value(q.bound, env).ok()?;
            let top = if top.is_zero() { top } else { top - 1u32 };
            env.push((q.var.to_string(), top));
            let b = walk_bound(q.body, env);
            env.pop();
            b
        }
        _ => f
            .children()
            .into_iter()
            .map(|c| walk_bound(c, env))
            .try_fold(BigUint::zero(), |acc, b| Some(acc.max(b?))),
    }
}

/// `1 + ` the largest index a membership atom of `f` can query, with free
/// variables valued by `env` and bound variables ranging below their
/// bounds; 0 without membership atoms. `None` when a quantifier is
/// unbounded or a variable is unassigned.
pub fn bit_bound_in(f: &Formula, env: &BTreeMap<String, BigUint>) -> Option<usize> {
    let mut env: Env = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    walk_bound(f, &mut env)?.to_usize()
}

/// [`bit_bound_in`] for sentences.
pub fn bit_bound(f: &Formula) -> Option<usize> {
    bit_bound_in(f, &BTreeMap::new())
}

enum Node<'a> {
    /// No `X` below: forced iff true.
    Arith(&'a Formula),
    Mem(&'a Term),
    /// Negation, with a formula whose bit bound is that of the negated node.
    Not(Box<Node<'a>>, &'a Formula),
    Or(Box<Node<'a>>, Box<Node<'a>>),
    Exists {
        var: &'a str,
        bound: Option<&'a Term>,
        body: Box<Node<'a>>,
    },
}

fn not<'a>(n: Node<'a>, inner: &'a Formula) -> Node<'a> {
    Node::Not(Box::new(n), inner)
}

fn lower(f: &Formula) -> Node<'_> {
    if !f.mentions_relation(SET_VAR) {
        return Node::Arith(f);
    }
    match f {
        Formula::Rel(_, args) => Node::Mem(&args[0]),
        Formula::Eq(..) => unreachable!("equations do not mention X"),
        Formula::Not(g) => not(lower(g), g),
        Formula::Or(a, b) => Node::Or(Box::new(lower(a)), Box::new(lower(b))),
        Formula::And(a, b) => {
            let na = not(lower(a), a);
            let nb = not(lower(b), b);
            not(Node::Or(Box::new(na), Box::new(nb)), f)
        }
        Formula::Exists(x, g) => Node::Exists {
            var: x,
            bound: bounded_shape(f).map(|q| q.bound),
            body: Box::new(lower(g)),
        },
        Formula::Forall(x, g) => {
            let bound = bounded_shape(f).map(|q| q.bound);
            // the bit bound of `∃x¬g` equals that of `f`
            let body = not(lower(g), g);
            not(
                Node::Exists {
                    var: x,
                    bound,
                    body: Box::new(body),
                },
                f,
            )
        }
    }
}

type Env = Vec<(String, BigUint)>;

fn asn(env: &Env) -> BTreeMap<String, BigUint> {
    env.iter().cloned().collect()
}

fn value(t: &Term, env: &Env) -> Result<BigUint> {
    eval_term(t, &asn(env))
}

fn member(s: &Condition, n: &BigUint) -> bool {
    n.to_usize().and_then(|i| s.bit(i)).unwrap_or(false)
}

fn exact_budget() -> EvalBudget {
    EvalBudget {
        bound: 0,
        exact_limit: 1 << 20,
        depth_cap: 4096,
    }
}

fn exact(node: &Node, s: &Condition, env: &mut Env, bound: usize) -> Result<bool> {
    match node {
        Node::Arith(f) => match eval_nat(f, &asn(env), &exact_budget())? {
            Verdict::True => Ok(true),
            Verdict::False => Ok(false),
            Verdict::Unknown => Err(Error::Forcing(format!("cannot decide `{f}` exactly"))),
        },
        Node::Mem(t) => Ok(member(s, &value(t, env)?)),
        Node::Not(g, _) => exact_not(g, s, env, bound),
        Node::Or(a, b) => Ok(exact(a, s, env, bound)? || exact(b, s, env, bound)?),
        Node::Exists { var, bound: Some(t), body } => {
            let limit = value(t, env)?;
            let limit = limit
                .to_u64()
                .filter(|&l| l <= exact_budget().exact_limit)
                .ok_or_else(|| Error::SizeGuard(format!("quantifier bound {limit} too large")))?;
            for n in 0..limit {
                env.push((var.to_string(), n.into()));
                let v = exact(body, s, env, bound);
                env.pop();
                if v? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Node::Exists { bound: None, .. } => {
            Err(Error::Forcing("unbounded quantifier in exact mode".into()))
        }
    }
}

/// `s ⊩ ¬g`: no extension of length `max(|s|, bound)` forces `g`. Shorter
/// forcing extensions would stay forcing when padded to that length.
fn exact_not(g: &Node, s: &Condition, env: &mut Env, bound: usize) -> Result<bool> {
    let len = s.len().max(bound);
    if len - s.len() > MAX_EXTENSION_BITS {
        return Err(Error::SizeGuard(format!(
            "{} extension bits exceed {MAX_EXTENSION_BITS}",
            len - s.len()
        )));
    }
    for t in s.extensions_of_length(len) {
        if exact(g, &t, env, bound)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn bound_in_env(f: &Formula, env: &Env) -> Option<usize> {
    walk_bound(f, &mut env.clone())?.to_usize()
}

/// Extra bits examined by a budgeted extension search.
fn budget_depth(budget: u64) -> usize {
    (budget.max(1).ilog2() as usize).min(12)
}

fn budgeted(node: &Node, s: &Condition, env: &mut Env, budget: u64) -> Result<ForcingVerdict> {
    use ForcingVerdict::*;
    Ok(match node {
        Node::Arith(f) => {
            let b = EvalBudget {
                bound: budget,
                ..EvalBudget::default()
            };
            match eval_nat(f, &asn(env), &b)? {
                Verdict::True => Forced,
                Verdict::False => NotForced,
                Verdict::Unknown => Unknown,
            }
        }
        Node::Mem(t) => ForcingVerdict::from_bool(member(s, &value(t, env)?)),
        Node::Not(g, inner) if bound_in_env(inner, env).is_some_and(|b| s.len().max(b) - s.len() <= MAX_EXTENSION_BITS) => {
            let b = bound_in_env(inner, env).expect("guarded");
            ForcingVerdict::from_bool(exact_not(g, s, env, b)?)
        }
        Node::Not(g, _) => {
            let depth = budget_depth(budget);
            let mut found = false;
            'search: for len in s.len()..=s.len() + depth {
                for t in s.extensions_of_length(len) {
                    if budgeted(g, &t, env, budget)? == Forced {
                        found = true;
                        break 'search;
                    }
                }
            }
            if found {
                NotForced
            } else {
                Unknown
            }
        }
        Node::Or(a, b) => match (budgeted(a, s, env, budget)?, budgeted(b, s, env, budget)?) {
            (Forced, _) | (_, Forced) => Forced,
            (NotForced, NotForced) => NotForced,
            _ => Unknown,
        },
        Node::Exists { var, bound, body } => {
            let limit = match bound {
                Some(t) => value(t, env)?.to_u64(),
                None => None,
            };
            let searched = limit.map_or(budget, |l| l.min(budget));
            let mut all_not = true;
            for n in 0..searched {
                env.push((var.to_string(), n.into()));
                let v = budgeted(body, s, env, budget);
                env.pop();
                match v? {
                    Forced => return Ok(Forced),
                    NotForced => {}
                    Unknown => all_not = false,
                }
            }
            if all_not && limit.is_some_and(|l| l <= budget) {
                NotForced
            } else {
                Unknown
            }
        }
    })
}

/// Decides `s ⊩ f` for a formula whose free variables are assigned in `env`.
pub fn forces_in(
    s: &Condition,
    f: &Formula,
    mode: ForcingMode,
    env: &BTreeMap<String, BigUint>,
) -> Result<ForcingVerdict> {
    check_set_formula(f)?;
    let node = lower(f);
    let mut env: Env = env.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    match mode {
        ForcingMode::Exact => {
            let bound = bound_in_env(f, &env).ok_or_else(|| {
                Error::Forcing(format!(
                    "`{f}` is not bit-bounded: exact mode needs bounded quantifiers and assigned free variables"
                ))
            })?;
            exact(&node, s, &mut env, bound).map(ForcingVerdict::from_bool)
        }
        ForcingMode::Budget(b) => budgeted(&node, s, &mut env, b),
    }
}

pub fn forces(s: &Condition, f: &Formula, mode: ForcingMode) -> Result<ForcingVerdict> {
    forces_in(s, f, mode, &BTreeMap::new())
}

/// Exact-mode forcing as a boolean.
pub fn forces_exact(s: &Condition, f: &Formula) -> Result<bool> {
    Ok(forces(s, f, ForcingMode::Exact)? == ForcingVerdict::Forced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn sf(text: &str) -> Formula {
        parse(text, &set_signature()).unwrap()
    }

    fn c(text: &str) -> Condition {
        Condition::parse(text).unwrap()
    }

    #[test]
    fn bit_bounds() {
        assert_eq!(bit_bound(&sf("(X #3)")), Some(4));
        assert_eq!(bit_bound(&sf("(and (X 0) (not (X #2)))")), Some(3));
        assert_eq!(bit_bound(&sf("(exists v (X v))")), None);
        assert_eq!(bit_bound(&sf("(exists v (and (< v #3) (X v)))")), Some(3));
        assert_eq!(bit_bound(&sf("(forall v (or (not (< v #2)) (X (* v #5))))")), Some(6));
        assert_eq!(bit_bound(&sf("(exists v (and (< v 0) (X (+ v #4))))")), Some(5));
        assert_eq!(bit_bound(&sf("(X v)")), None);
        assert_eq!(bit_bound(&sf("(and (X 0) (< v v))")), None);
        assert_eq!(bit_bound(&sf("(= 0 0)")), Some(0));
    }

    #[test]
    fn basic_clauses() {
        let mem = sf("(X 0)");
        let neg = sf("(not (X 0))");
        assert!(forces_exact(&c("1"), &mem).unwrap());
        assert!(forces_exact(&c("0"), &neg).unwrap());
        assert!(!forces_exact(&c(""), &mem).unwrap());
        assert!(!forces_exact(&c(""), &neg).unwrap());
        let contradiction = sf("(and (X 0) (not (X 0)))");
        for s in Condition::all_up_to(3) {
            assert!(!forces_exact(&s, &contradiction).unwrap());
            assert!(forces_exact(&s, &Formula::not(contradiction.clone())).unwrap());
        }
    }

    #[test]
    fn bounded_quantifier_over_arithmetic() {
        let f = sf("(and (X 1) (exists v (and (< v #3) (= (+ v v) #4))))");
        assert!(forces_exact(&c("01"), &f).unwrap());
        assert!(!forces_exact(&c("00"), &f).unwrap());
    }

    #[test]
    fn budget_mode() {
        let f = sf("(exists v (X v))");
        assert_eq!(forces(&c("001"), &f, ForcingMode::Budget(8)).unwrap(), ForcingVerdict::Forced);
        assert_eq!(forces(&c("000"), &f, ForcingMode::Budget(8)).unwrap(), ForcingVerdict::Unknown);
        assert!(forces(&c("000"), &f, ForcingMode::Exact).is_err());
        let g = sf("(not (exists v (X v)))");
        assert_eq!(forces(&c("0"), &g, ForcingMode::Budget(8)).unwrap(), ForcingVerdict::NotForced);
    }
}

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{EvalBudget, Verdict};
use crate::coding::numeral;
use crate::error::{Error, Result};
use crate::syntax::{Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};

pub type NatAssignment = BTreeMap<String, BigUint>;

type RelFn = Arc<dyn Fn(&[BigUint]) -> bool + Send + Sync>;
type FunFn = Arc<dyn Fn(&[BigUint]) -> BigUint + Send + Sync>;

/// Interpretations of extra symbols on top of the standard model.
#[derive(Clone, Default)]
pub struct NatExpansion {
    relations: BTreeMap<String, (usize, RelFn)>,
    functions: BTreeMap<String, (usize, FunFn)>,
    constants: BTreeMap<String, BigUint>,
}

impl std::fmt::Debug for NatExpansion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NatExpansion")
            .field("relations", &self.relations.keys().collect::<Vec<_>>())
            .field("functions", &self.functions.keys().collect::<Vec<_>>())
            .field("constants", &self.constants)
            .finish()
    }
}

impl NatExpansion {
    pub fn new() -> NatExpansion {
        NatExpansion::default()
    }

    pub fn with_relation(
        mut self,
        name: &str,
        arity: usize,
        holds: impl Fn(&[BigUint]) -> bool + Send + Sync + 'static,
    ) -> NatExpansion {
        self.relations.insert(name.to_string(), (arity, Arc::new(holds)));
        self
    }

    /// A unary predicate given by its extension.
    pub fn with_set(self, name: &str, members: BTreeSet<BigUint>) -> NatExpansion {
        self.with_relation(name, 1, move |args| members.contains(&args[0]))
    }

    pub fn with_function(
        mut self,
        name: &str,
        arity: usize,
        value: impl Fn(&[BigUint]) -> BigUint + Send + Sync + 'static,
    ) -> NatExpansion {
        self.functions.insert(name.to_string(), (arity, Arc::new(value)));
        self
    }

    pub fn with_constant(mut self, name: &str, value: BigUint) -> NatExpansion {
        self.constants.insert(name.to_string(), value);
        self
    }
}

fn eval_err(msg: String) -> Error {
    Error::Eval(msg)
}

fn lookup<'a>(env: &'a [(String, BigUint)], v: &str) -> Option<&'a BigUint> {
    env.iter().rev().find(|(n, _)| n == v).map(|(_, x)| x)
}

fn term_value(t: &Term, exp: &NatExpansion, env: &[(String, BigUint)]) -> Result<BigUint> {
    match t {
        Term::Var(v) => lookup(env, v)
            .cloned()
            .ok_or_else(|| eval_err(format!("unbound variable `{v}`"))),
        Term::Const(c) if c == ZERO => Ok(BigUint::zero()),
        Term::Const(c) if c == ONE => Ok(BigUint::one()),
        Term::Const(c) => exp
            .constants
            .get(c)
            .cloned()
            .ok_or_else(|| eval_err(format!("no interpretation for constant `{c}`"))),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| term_value(a, exp, env))
                .collect::<Result<Vec<_>>>()?;
            match (f.as_str(), vals.as_slice()) {
                (PLUS, [a, b]) => Ok(a + b),
                (TIMES, [a, b]) => Ok(a * b),
                _ => match exp.functions.get(f) {
                    Some((arity, fun)) if *arity == vals.len() => Ok(fun(&vals)),
                    Some((arity, _)) => Err(eval_err(format!(
                        "`{f}` applied to {} arguments, arity {arity}",
                        vals.len()
                    ))),
                    None => Err(eval_err(format!("no interpretation for function `{f}`"))),
                },
            }
        }
    }
}

pub fn eval_term(t: &Term, asn: &NatAssignment) -> Result<BigUint> {
    eval_term_in(t, &NatExpansion::default(), asn)
}

pub fn eval_term_in(t: &Term, exp: &NatExpansion, asn: &NatAssignment) -> Result<BigUint> {
    let env: Vec<(String, BigUint)> = asn.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    term_value(t, exp, &env)
}

/// A quantifier of one of the shapes `exists x ((x < t) and body)` or
/// `forall x ((not (x < t)) or body)` with `x` not occurring in `t`.
#[derive(Clone, Copy, Debug)]
pub struct BoundedQuantifier<'a> {
    pub existential: bool,
    pub var: &'a str,
    pub bound: &'a Term,
    pub body: &'a Formula,
}

pub fn bounded_shape(f: &Formula) -> Option<BoundedQuantifier<'_>> {
    fn guard<'a>(g: &'a Formula, x: &str) -> Option<&'a Term> {
        match g {
            Formula::Rel(r, args) if r == LESS && args.len() == 2 => match &args[0] {
                Term::Var(v) if v == x && !args[1].mentions_var(x) => Some(&args[1]),
                _ => None,
            },
            _ => None,
        }
    }
    match f {
        Formula::Exists(x, inner) => match inner.as_ref() {
            Formula::And(g, body) => guard(g, x).map(|bound| BoundedQuantifier {
                existential: true,
                var: x,
                bound,
                body,
            }),
            _ => None,
        },
        Formula::Forall(x, inner) => match inner.as_ref() {
            Formula::Or(ng, body) => match ng.as_ref() {
                Formula::Not(g) => guard(g, x).map(|bound| BoundedQuantifier {
                    existential: false,
                    var: x,
                    bound,
                    body,
                }),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

/// Whether every quantifier in `f` has a bounded shape.
pub fn is_bounded(f: &Formula) -> bool {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => true,
        Formula::Exists(..) | Formula::Forall(..) => {
            bounded_shape(f).is_some_and(|q| is_bounded(q.body))
        }
        _ => f.children().into_iter().all(is_bounded),
    }
}

/// Rewrites every quantifier `Q x body` into its bounded shape with bound
/// `t`, so that quantifiers range over the values below `val(t)`.
pub fn relativize(f: &Formula, t: &Term) -> Formula {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => f.clone(),
        Formula::Not(g) => Formula::not(relativize(g, t)),
        Formula::And(a, b) => Formula::and(relativize(a, t), relativize(b, t)),
        Formula::Or(a, b) => Formula::or(relativize(a, t), relativize(b, t)),
        Formula::Exists(x, g) => Formula::exists(
            x.clone(),
            Formula::and(Formula::less(Term::Var(x.clone()), t.clone()), relativize(g, t)),
        ),
        Formula::Forall(x, g) => Formula::forall(
            x.clone(),
            Formula::or(
                Formula::not(Formula::less(Term::Var(x.clone()), t.clone())),
                relativize(g, t),
            ),
        ),
    }
}

struct NatEval<'a> {
    exp: &'a NatExpansion,
    budget: &'a EvalBudget,
    env: Vec<(String, BigUint)>,
}

impl NatEval<'_> {
    fn atom(&self, f: &Formula) -> Result<Verdict> {
        match f {
            Formula::Eq(s, t) => {
                let (a, b) = (term_value(s, self.exp, &self.env)?, term_value(t, self.exp, &self.env)?);
                Ok(Verdict::from_bool(a == b))
            }
            Formula::Rel(r, args) => {
                let vals = args
                    .iter()
                    .map(|a| term_value(a, self.exp, &self.env))
                    .collect::<Result<Vec<_>>>()?;
                if r == LESS && vals.len() == 2 {
                    return Ok(Verdict::from_bool(vals[0] < vals[1]));
                }
                match self.exp.relations.get(r) {
                    Some((arity, holds)) if *arity == vals.len() => {
                        Ok(Verdict::from_bool(holds(&vals)))
                    }
                    Some((arity, _)) => Err(eval_err(format!(
                        "`{r}` applied to {} arguments, arity {arity}",
                        vals.len()
                    ))),
                    None => Err(eval_err(format!("no interpretation for relation `{r}`"))),
                }
            }
            _ => unreachable!("atom called on a compound formula"),
        }
    }

    fn with<T>(&mut self, x: &str, n: BigUint, k: impl FnOnce(&mut Self) -> T) -> T {
        self.env.push((x.to_string(), n));
        let out = k(self);
        self.env.pop();
        out
    }

    fn eval(&mut self, f: &Formula, depth: usize) -> Result<Verdict> {
        if depth > self.budget.depth_cap {
            return Ok(Verdict::Unknown);
        }
        match f {
            Formula::Eq(..) | Formula::Rel(..) => self.atom(f),
            Formula::Not(g) => Ok(self.eval(g, depth + 1)?.negate()),
            Formula::And(a, b) => {
                let va = self.eval(a, depth + 1)?;
                if va == Verdict::False {
                    return Ok(va);
                }
                Ok(va.and(self.eval(b, depth + 1)?))
            }
            Formula::Or(a, b) => {
                let va = self.eval(a, depth + 1)?;
                if va == Verdict::True {
                    return Ok(va);
                }
                Ok(va.or(self.eval(b, depth + 1)?))
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let existential = matches!(f, Formula::Exists(..));
                // the verdict that a single instance can settle
                let decisive = Verdict::from_bool(existential);
                if let Some(q) = bounded_shape(f) {
                    if let Ok(limit) = term_value(q.bound, self.exp, &self.env) {
                        if let Some(limit) = limit.to_u64().filter(|&l| l <= self.budget.exact_limit)
                        {
                            let mut unknown = false;
                            for n in 0..limit {
                                let v = self.with(x, BigUint::from(n), |s| s.eval(q.body, depth + 1))?;
                                if v == decisive {
                                    return Ok(decisive);
                                }
                                unknown |= v == Verdict::Unknown;
                            }
                            return Ok(if unknown {
                                Verdict::Unknown
                            } else {
                                decisive.negate()
                            });
                        }
                    }
                }
                if !crate::syntax::free_vars(body).contains(x) {
                    // vacuous quantifier over a nonempty domain
                    return self.with(x, BigUint::zero(), |s| s.eval(body, depth + 1));
                }
                for n in 0..self.budget.bound {
                    let v = self.with(x, BigUint::from(n), |s| s.eval(body, depth + 1))?;
                    if v == decisive {
                        return Ok(decisive);
                    }
                }
                Ok(Verdict::Unknown)
            }
        }
    }
}

/// Three-valued evaluation in the standard model of arithmetic.
pub fn eval_nat(f: &Formula, asn: &NatAssignment, budget: &EvalBudget) -> Result<Verdict> {
    eval_nat_in(f, &NatExpansion::default(), asn, budget)
}

/// Three-valued evaluation in an expansion of the standard model. A definite
/// verdict is always the true one; `Unknown` means the search was inconclusive.
pub fn eval_nat_in(
    f: &Formula,
    exp: &NatExpansion,
    asn: &NatAssignment,
    budget: &EvalBudget,
) -> Result<Verdict> {
    let mut ev = NatEval {
        exp,
        budget,
        env: asn.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
    };
    ev.eval(f, 0)
}

/// `numeral(n)` as a bound term, for [`relativize`].
pub fn bound_term(n: u64) -> Term {
    numeral(&BigUint::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::numeral_u64;
    use crate::syntax::{parse, Signature};

    fn f(text: &str) -> Formula {
        parse(text, &Signature::arithmetic()).unwrap()
    }

    fn run(text: &str, bound: u64) -> Verdict {
        eval_nat(&f(text), &NatAssignment::new(), &EvalBudget::new(bound)).unwrap()
    }

    #[test]
    fn term_values() {
        assert_eq!(eval_term(&numeral_u64(5), &NatAssignment::new()).unwrap(), BigUint::from(5u32));
        assert_eq!(
            eval_term(&Term::plus(Term::one(), Term::one()), &NatAssignment::new()).unwrap(),
            BigUint::from(2u32)
        );
        let asn = NatAssignment::from([("v".to_string(), BigUint::from(7u32))]);
        assert_eq!(eval_term(&Term::var("v"), &asn).unwrap(), BigUint::from(7u32));
        assert!(eval_term(&Term::var("w"), &asn).is_err());
    }

    #[test]
    fn bounded_successor_check_is_exact() {
        let text = "(forall x (or (not (< x #5)) (exists y (and (< y #6) (= y (+ x 1))))))";
        assert!(is_bounded(&f(text)));
        assert_eq!(run(text, 0), Verdict::True);
    }

    #[test]
    fn unbounded_search_never_guesses_false() {
        assert_eq!(run("(exists x (= (* x x) #2))", 100), Verdict::Unknown);
        assert_eq!(run("(exists x (= (* x x) #4))", 100), Verdict::True);
        assert_eq!(run("(forall x (< x #3))", 100), Verdict::False);
        assert_eq!(run("(= 0 0)", 0), Verdict::True);
    }

    #[test]
    fn relativized_formula_is_bounded() {
        let g = relativize(&f("(forall x (exists y (< x y)))"), &bound_term(4));
        assert!(is_bounded(&g));
        // y < 4 cannot exceed x = 3
        assert_eq!(
            eval_nat(&g, &NatAssignment::new(), &EvalBudget::new(0)).unwrap(),
            Verdict::False
        );
    }

    #[test]
    fn expansion_symbols() {
        let exp = NatExpansion::new()
            .with_set("T", BTreeSet::from([BigUint::from(3u32)]))
            .with_function("H", 1, |a| &a[0] + 1u32);
        let g = Formula::rel("T", vec![Term::app("H", vec![numeral_u64(2)])]);
        let v = eval_nat_in(&g, &exp, &NatAssignment::new(), &EvalBudget::default()).unwrap();
        assert_eq!(v, Verdict::True);
        let missing = Formula::rel("S", vec![Term::zero()]);
        assert!(eval_nat(&missing, &NatAssignment::new(), &EvalBudget::default()).is_err());
    }
}

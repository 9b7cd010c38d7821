use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{Elem, FiniteModel};
use crate::syntax::{Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};

/// A value during finite-model evaluation. Closed terms of the arithmetic
/// core that the model does not interpret denote natural numbers (codes);
/// quantifiers range over elements only.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Elem(Elem),
    Code(BigUint),
}

/// Extra relations whose tuples may mix elements and codes, such as a
/// satisfaction table `S(code, element)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expansion {
    relations: BTreeMap<String, (usize, BTreeSet<Vec<Val>>)>,
}

impl Expansion {
    pub fn new() -> Expansion {
        Expansion::default()
    }

    pub fn with_relation(
        mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<Val>>,
    ) -> Expansion {
        self.relations
            .insert(name.to_string(), (arity, tuples.into_iter().collect()));
        self
    }

    pub fn relation(&self, name: &str) -> Option<&(usize, BTreeSet<Vec<Val>>)> {
        self.relations.get(name)
    }
}

fn mismatch(msg: String) -> Error {
    Error::Eval(msg)
}

struct FiniteEval<'a> {
    m: &'a FiniteModel,
    exp: &'a Expansion,
    env: Vec<(&'a str, Elem)>,
    /// Values of closed arithmetic subterms, keyed by node address.
    numbers: HashMap<*const Term, BigUint>,
}

impl<'a> FiniteEval<'a> {
    fn check_symbols(&self, f: &Formula) -> Result<()> {
        match f {
            Formula::Eq(s, t) => {
                self.check_term(s)?;
                self.check_term(t)
            }
            Formula::Rel(r, args) => {
                let arity = if let Some(rel) = self.m.relation(r) {
                    rel.arity
                } else if let Some((arity, _)) = self.exp.relation(r) {
                    *arity
                } else if r == LESS {
                    2
                } else {
                    return Err(mismatch(format!("model has no relation `{r}`")));
                };
                if arity != args.len() {
                    return Err(Error::Arity {
                        name: r.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            _ => f.children().into_iter().try_for_each(|c| self.check_symbols(c)),
        }
    }

    fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(_) => Ok(()),
            Term::Const(c) => {
                if self.m.constant(c).is_some() || c == ZERO || c == ONE {
                    Ok(())
                } else {
                    Err(mismatch(format!("model has no constant `{c}`")))
                }
            }
            Term::App(f, args) => {
                let arity = match self.m.function(f) {
                    Some(fun) => fun.arity,
                    None if f == PLUS || f == TIMES => 2,
                    None => return Err(mismatch(format!("model has no function `{f}`"))),
                };
                if arity != args.len() {
                    return Err(Error::Arity {
                        name: f.clone(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    /// Evaluates every maximal closed arithmetic subterm once.
    fn precompute(&mut self, f: &Formula) {
        match f {
            Formula::Eq(s, t) => {
                self.precompute_term(s);
                self.precompute_term(t);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| self.precompute_term(a)),
            _ => f.children().into_iter().for_each(|c| self.precompute(c)),
        }
    }

    fn precompute_term(&mut self, t: &Term) {
        if let Term::App(_, args) = t {
            if let Some(n) = self.number(t) {
                self.numbers.insert(t as *const Term, n);
            } else {
                args.iter().for_each(|a| self.precompute_term(a));
            }
        }
    }

    fn number(&self, t: &Term) -> Option<BigUint> {
        match t {
            Term::Var(_) => None,
            Term::Const(c) if self.m.constant(c).is_some() => None,
            Term::Const(c) if c == ZERO => Some(BigUint::zero()),
            Term::Const(c) if c == ONE => Some(BigUint::one()),
            Term::Const(_) => None,
            Term::App(f, args) if self.m.function(f).is_none() && args.len() == 2 => {
                let (a, b) = (self.number(&args[0])?, self.number(&args[1])?);
                match f.as_str() {
                    PLUS => Some(a + b),
                    TIMES => Some(a * b),
                    _ => None,
                }
            }
            Term::App(..) => None,
        }
    }

    fn term(&self, t: &Term) -> Result<Val> {
        if let Some(n) = self.numbers.get(&(t as *const Term)) {
            return Ok(Val::Code(n.clone()));
        }
        match t {
            Term::Var(v) => self
                .env
                .iter()
                .rev()
                .find(|(n, _)| *n == v)
                .map(|&(_, e)| Val::Elem(e))
                .ok_or_else(|| mismatch(format!("unbound variable `{v}`"))),
            Term::Const(c) => match self.m.constant(c) {
                Some(e) => Ok(Val::Elem(e)),
                None if c == ZERO => Ok(Val::Code(BigUint::zero())),
                None if c == ONE => Ok(Val::Code(BigUint::one())),
                None => Err(mismatch(format!("model has no constant `{c}`"))),
            },
            Term::App(f, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
                if self.m.function(f).is_some() {
                    let elems = vals
                        .iter()
                        .map(|v| match v {
                            Val::Elem(e) => Ok(*e),
                            Val::Code(_) => Err(mismatch(format!(
                                "sort mismatch: `{f}` applied to a number"
                            ))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    return Ok(Val::Elem(self.m.apply(f, &elems).expect("tables are total")));
                }
                match (f.as_str(), vals.as_slice()) {
                    (PLUS, [Val::Code(a), Val::Code(b)]) => Ok(Val::Code(a + b)),
                    (TIMES, [Val::Code(a), Val::Code(b)]) => Ok(Val::Code(a * b)),
                    _ => Err(mismatch(format!(
                        "sort mismatch: arithmetic `{f}` applied to an element"
                    ))),
                }
            }
        }
    }

    fn eval(&mut self, f: &'a Formula) -> Result<bool> {
        match f {
            Formula::Eq(s, t) => match (self.term(s)?, self.term(t)?) {
                (Val::Elem(a), Val::Elem(b)) => Ok(a == b),
                (Val::Code(a), Val::Code(b)) => Ok(a == b),
                _ => Err(mismatch(format!("sort mismatch in `{f}`"))),
            },
            Formula::Rel(r, args) => {
                let vals = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>>>()?;
                if self.m.relation(r).is_some() {
                    let elems = vals
                        .iter()
                        .map(|v| match v {
                            Val::Elem(e) => Ok(*e),
                            Val::Code(_) => Err(mismatch(format!(
                                "sort mismatch: number given to model relation `{r}`"
                            ))),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    return Ok(self.m.holds(r, &elems).expect("checked above"));
                }
                if let Some((_, tuples)) = self.exp.relation(r) {
                    return Ok(tuples.contains(&vals));
                }
                match vals.as_slice() {
                    [Val::Code(a), Val::Code(b)] if r == LESS => Ok(a < b),
                    _ => Err(mismatch(format!("sort mismatch in `{f}`"))),
                }
            }
            Formula::Not(g) => Ok(!self.eval(g)?),
            Formula::And(a, b) => Ok(self.eval(a)? && self.eval(b)?),
            Formula::Or(a, b) => Ok(self.eval(a)? || self.eval(b)?),
            Formula::Exists(x, g) | Formula::Forall(x, g) => {
                let existential = matches!(f, Formula::Exists(..));
                for e in self.m.elements() {
                    self.env.push((x, e));
                    let v = self.eval(g);
                    self.env.pop();
                    if v? == existential {
                        return Ok(existential);
                    }
                }
                Ok(!existential)
            }
        }
    }
}

/// Classical evaluation in a finite model.
pub fn eval_finite(f: &Formula, m: &FiniteModel, asn: &BTreeMap<String, Elem>) -> Result<bool> {
    eval_finite_in(f, m, &Expansion::default(), asn)
}

/// Classical evaluation in a finite model expanded by `exp`.
pub fn eval_finite_in(
    f: &Formula,
    m: &FiniteModel,
    exp: &Expansion,
    asn: &BTreeMap<String, Elem>,
) -> Result<bool> {
    for (v, &e) in asn {
        if e >= m.len() {
            return Err(mismatch(format!("`{v}` assigned outside the universe")));
        }
    }
    let mut ev = FiniteEval {
        m,
        exp,
        env: asn.iter().map(|(k, &v)| (k.as_str(), v)).collect(),
        numbers: HashMap::new(),
    };
    ev.check_symbols(f)?;
    ev.precompute(f);
    ev.eval(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::{encode, numeral};
    use crate::syntax::{parse, Signature};

    fn membership_sig() -> Signature {
        Signature::empty().with_relation("in", 2).unwrap()
    }

    fn two_chain() -> FiniteModel {
        let mut m = FiniteModel::with_size(2).unwrap();
        m.add_relation("in", 2, [vec![0, 1]]).unwrap();
        m
    }

    #[test]
    fn empty_set_axiom() {
        let f = parse("(exists x (forall y (not (in y x))))", &membership_sig()).unwrap();
        assert!(eval_finite(&f, &two_chain(), &BTreeMap::new()).unwrap());
        let mut full = FiniteModel::with_size(2).unwrap();
        full.add_relation("in", 2, [vec![0, 0], vec![0, 1]]).unwrap();
        assert!(!eval_finite(&f, &full, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn reflexive_equality_with_constant() {
        let mut m = two_chain();
        m.add_constant("a", 1).unwrap();
        let sig = membership_sig().with_constant("a").unwrap();
        assert!(eval_finite(&parse("(= a a)", &sig).unwrap(), &m, &BTreeMap::new()).unwrap());
    }

    #[test]
    fn codes_in_expansion_tables() {
        let phi = parse("(exists y (in x y))", &membership_sig()).unwrap();
        let c = encode(&phi);
        let exp = Expansion::new().with_relation("S", 2, [vec![Val::Code(c.clone()), Val::Elem(0)]]);
        let inst = Formula::rel("S", vec![numeral(&c), Term::var("x")]);
        let asn = BTreeMap::from([("x".to_string(), 0)]);
        assert!(eval_finite_in(&inst, &two_chain(), &exp, &asn).unwrap());
        let asn = BTreeMap::from([("x".to_string(), 1)]);
        assert!(!eval_finite_in(&inst, &two_chain(), &exp, &asn).unwrap());
        // an element compared with a number is a sort error
        let bad = Formula::eq(Term::var("x"), Term::zero());
        assert!(eval_finite(&bad, &two_chain(), &asn).is_err());
        assert!(eval_finite(&Formula::rel("P", vec![]), &two_chain(), &asn).is_err());
    }
}

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::ast::{Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};
use crate::error::{Error, Result};

/// A first-order signature. Equality is builtin and never listed here.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    #[serde(default)]
    constants: BTreeSet<String>,
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    relations: BTreeMap<String, usize>,
    /// Whether `0, 1, +, *, <` are present.
    #[serde(default)]
    arithmetic: bool,
}

const RESERVED: &[&str] = &[
    "=", "not", "and", "or", "implies", "->", "iff", "<->", "exists", "forall", "exists!",
];

fn is_reserved(name: &str) -> bool {
    RESERVED.contains(&name) || name.starts_with('#')
}

impl Signature {
    pub fn empty() -> Signature {
        Signature::default()
    }

    /// The language of ordered rings `{0, 1, +, *, <}`.
    pub fn arithmetic() -> Signature {
        let mut sig = Signature::default();
        sig.constants.insert(ZERO.into());
        sig.constants.insert(ONE.into());
        sig.functions.insert(PLUS.into(), 2);
        sig.functions.insert(TIMES.into(), 2);
        sig.relations.insert(LESS.into(), 2);
        sig.arithmetic = true;
        sig
    }

    /// Re-establishes the invariants after deserialization.
    pub fn validated(mut self) -> Result<Signature> {
        if self.arithmetic {
            for (name, arity) in [(PLUS, 2), (TIMES, 2)] {
                match self.functions.get(name) {
                    Some(&a) if a != arity => {
                        return Err(Error::Signature(format!(
                            "arithmetic symbol `{name}` must have arity {arity}"
                        )))
                    }
                    _ => {
                        self.functions.insert(name.into(), arity);
                    }
                }
            }
            match self.relations.get(LESS) {
                Some(&a) if a != 2 => {
                    return Err(Error::Signature("`<` must be binary".into()));
                }
                _ => {
                    self.relations.insert(LESS.into(), 2);
                }
            }
            self.constants.insert(ZERO.into());
            self.constants.insert(ONE.into());
        }
        let mut seen = BTreeSet::new();
        for name in self
            .constants
            .iter()
            .chain(self.functions.keys())
            .chain(self.relations.keys())
        {
            if is_reserved(name) {
                return Err(Error::Signature(format!("`{name}` is a reserved word")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::Signature(format!("`{name}` declared twice")));
            }
        }
        if let Some((name, _)) = self.functions.iter().find(|(_, &a)| a == 0) {
            return Err(Error::Signature(format!(
                "function `{name}` has arity 0; declare it as a constant"
            )));
        }
        Ok(self)
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if is_reserved(name) {
            return Err(Error::Signature(format!("`{name}` is a reserved word")));
        }
        if self.is_declared(name) {
            return Err(Error::Signature(format!("`{name}` already declared")));
        }
        Ok(())
    }

    pub fn with_constant(mut self, name: &str) -> Result<Signature> {
        self.check_fresh(name)?;
        self.constants.insert(name.into());
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Signature> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(Error::Signature(format!(
                "function `{name}` needs arity >= 1"
            )));
        }
        self.functions.insert(name.into(), arity);
        Ok(self)
    }

    /// Relations may be nullary (propositional letters).
    pub fn with_relation(mut self, name: &str, arity: usize) -> Result<Signature> {
        self.check_fresh(name)?;
        self.relations.insert(name.into(), arity);
        Ok(self)
    }

    pub fn is_arithmetic(&self) -> bool {
        self.arithmetic
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.constants.contains(name)
            || self.functions.contains_key(name)
            || self.relations.contains_key(name)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn relation_arity(&self, name: &str) -> Option<usize> {
        self.relations.get(name).copied()
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.constants.iter().map(String::as_str)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> {
        self.functions.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize)> {
        self.relations.iter().map(|(n, &a)| (n.as_str(), a))
    }

    pub fn is_relational(&self) -> bool {
        self.constants.is_empty() && self.functions.is_empty()
    }

    /// Checks that every symbol of `t` is declared with the right arity and
    /// that no variable shadows a declared name.
    pub fn check_term(&self, t: &Term) -> Result<()> {
        match t {
            Term::Var(v) => {
                if self.is_declared(v) || is_reserved(v) {
                    return Err(Error::Signature(format!(
                        "variable `{v}` clashes with a declared symbol"
                    )));
                }
                Ok(())
            }
            Term::Const(c) => {
                if self.constants.contains(c) {
                    Ok(())
                } else {
                    Err(Error::UndeclaredSymbol {
                        name: c.clone(),
                        pos: 0,
                    })
                }
            }
            Term::App(f, args) => {
                let expected = self.function_arity(f).ok_or_else(|| Error::UndeclaredSymbol {
                    name: f.clone(),
                    pos: 0,
                })?;
                if expected != args.len() {
                    return Err(Error::Arity {
                        name: f.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_formula(&self, f: &Formula) -> Result<()> {
        match f {
            Formula::Eq(s, t) => {
                self.check_term(s)?;
                self.check_term(t)
            }
            Formula::Rel(r, args) => {
                let expected = self.relation_arity(r).ok_or_else(|| Error::UndeclaredSymbol {
                    name: r.clone(),
                    pos: 0,
                })?;
                if expected != args.len() {
                    return Err(Error::Arity {
                        name: r.clone(),
                        expected,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                self.check_term(&Term::Var(v.clone()))?;
                self.check_formula(body)
            }
            _ => f.children().into_iter().try_for_each(|c| self.check_formula(c)),
        }
    }

    /// The smallest signature (on top of `self`) that declares every symbol
    /// used in `f`. Arity clashes are reported.
    pub fn extended_by(&self, f: &Formula) -> Result<Signature> {
        fn add_term(sig: &mut Signature, t: &Term) -> Result<()> {
            match t {
                Term::Var(_) => Ok(()),
                Term::Const(c) => {
                    if !sig.constants.contains(c) {
                        sig.check_fresh(c)?;
                        sig.constants.insert(c.clone());
                    }
                    Ok(())
                }
                Term::App(name, args) => {
                    match sig.function_arity(name) {
                        Some(a) if a != args.len() => {
                            return Err(Error::Arity {
                                name: name.clone(),
                                expected: a,
                                found: args.len(),
                            })
                        }
                        Some(_) => {}
                        None => {
                            sig.check_fresh(name)?;
                            sig.functions.insert(name.clone(), args.len());
                        }
                    }
                    args.iter().try_for_each(|a| add_term(sig, a))
                }
            }
        }
        fn add(sig: &mut Signature, f: &Formula) -> Result<()> {
            match f {
                Formula::Eq(s, t) => {
                    add_term(sig, s)?;
                    add_term(sig, t)
                }
                Formula::Rel(r, args) => {
                    match sig.relation_arity(r) {
                        Some(a) if a != args.len() => {
                            return Err(Error::Arity {
                                name: r.clone(),
                                expected: a,
                                found: args.len(),
                            })
                        }
                        Some(_) => {}
                        None => {
                            sig.check_fresh(r)?;
                            sig.relations.insert(r.clone(), args.len());
                        }
                    }
                    args.iter().try_for_each(|a| add_term(sig, a))
                }
                _ => f.children().into_iter().try_for_each(|c| add(sig, c)),
            }
        }
        let mut sig = self.clone();
        add(&mut sig, f)?;
        Ok(sig)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_core_has_expected_arities() {
        let sig = Signature::arithmetic();
        assert!(sig.is_constant("0") && sig.is_constant("1"));
        assert_eq!(sig.function_arity("+"), Some(2));
        assert_eq!(sig.function_arity("*"), Some(2));
        assert_eq!(sig.relation_arity("<"), Some(2));
    }

    #[test]
    fn names_must_be_distinct_across_kinds() {
        let sig = Signature::arithmetic().with_relation("T", 1).unwrap();
        assert!(sig.clone().with_function("T", 1).is_err());
        assert!(sig.clone().with_constant("+").is_err());
        assert!(sig.with_function("H", 0).is_err());
    }

    #[test]
    fn deserialized_signature_is_revalidated() {
        let sig: Signature =
            serde_json::from_str(r#"{"relations": {"in": 2}, "constants": ["in"]}"#).unwrap();
        assert!(sig.validated().is_err());
        let sig: Signature = serde_json::from_str(r#"{"arithmetic": true}"#).unwrap();
        assert_eq!(sig.validated().unwrap(), Signature::arithmetic());
    }
}

//! JSON mirror of the AST: every node is an object with a `kind` field.
//!
//! ```json
//! {"kind": "exists", "var": "x", "body": {"kind": "eq",
//!   "left": {"kind": "var", "name": "x"}, "right": {"kind": "const", "name": "0"}}}
//! ```

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ast::{Formula, Term};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum JTerm {
    Var { name: String },
    Const { name: String },
    App { name: String, args: Vec<JTerm> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum JFormula {
    Eq { left: JTerm, right: JTerm },
    Rel { name: String, args: Vec<JTerm> },
    Not { body: Box<JFormula> },
    And { left: Box<JFormula>, right: Box<JFormula> },
    Or { left: Box<JFormula>, right: Box<JFormula> },
    Exists { var: String, body: Box<JFormula> },
    Forall { var: String, body: Box<JFormula> },
}

impl From<&Term> for JTerm {
    fn from(t: &Term) -> JTerm {
        match t {
            Term::Var(name) => JTerm::Var { name: name.clone() },
            Term::Const(name) => JTerm::Const { name: name.clone() },
            Term::App(name, args) => JTerm::App {
                name: name.clone(),
                args: args.iter().map(JTerm::from).collect(),
            },
        }
    }
}

impl From<JTerm> for Term {
    fn from(t: JTerm) -> Term {
        match t {
            JTerm::Var { name } => Term::Var(name),
            JTerm::Const { name } => Term::Const(name),
            JTerm::App { name, args } => Term::App(name, args.into_iter().map(Term::from).collect()),
        }
    }
}

impl From<&Formula> for JFormula {
    fn from(f: &Formula) -> JFormula {
        let b = |g: &Formula| Box::new(JFormula::from(g));
        match f {
            Formula::Eq(s, t) => JFormula::Eq {
                left: s.into(),
                right: t.into(),
            },
            Formula::Rel(name, args) => JFormula::Rel {
                name: name.clone(),
                args: args.iter().map(JTerm::from).collect(),
            },
            Formula::Not(g) => JFormula::Not { body: b(g) },
            Formula::And(l, r) => JFormula::And {
                left: b(l),
                right: b(r),
            },
            Formula::Or(l, r) => JFormula::Or {
                left: b(l),
                right: b(r),
            },
            Formula::Exists(v, g) => JFormula::Exists {
                var: v.clone(),
                body: b(g),
            },
            Formula::Forall(v, g) => JFormula::Forall {
                var: v.clone(),
                body: b(g),
            },
        }
    }
}

impl From<JFormula> for Formula {
    fn from(f: JFormula) -> Formula {
        match f {
            JFormula::Eq { left, right } => Formula::Eq(left.into(), right.into()),
            JFormula::Rel { name, args } => {
                Formula::Rel(name, args.into_iter().map(Term::from).collect())
            }
            JFormula::Not { body } => Formula::not((*body).into()),
            JFormula::And { left, right } => Formula::and((*left).into(), (*right).into()),
            JFormula::Or { left, right } => Formula::or((*left).into(), (*right).into()),
            JFormula::Exists { var, body } => Formula::exists(var, (*body).into()),
            JFormula::Forall { var, body } => Formula::forall(var, (*body).into()),
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JTerm::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Term, D::Error> {
        JTerm::deserialize(d).map(Term::from)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JFormula::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Formula, D::Error> {
        JFormula::deserialize(d).map(Formula::from)
    }
}

pub fn formula_to_json(f: &Formula) -> String {
    serde_json::to_string(f).expect("AST serialization cannot fail")
}

/// Reads the JSON mirror. Nesting depth is not limited, since numerals of
/// large codes are deep.
pub fn formula_from_json(text: &str) -> Result<Formula> {
    let mut de = serde_json::Deserializer::from_str(text);
    de.disable_recursion_limit();
    let f = Formula::deserialize(&mut de).map_err(|e| Error::Json(e.to_string()))?;
    de.end().map_err(|e| Error::Json(e.to_string()))?;
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_roundtrip() {
        let f = Formula::exists(
            "x",
            Formula::and(
                Formula::eq(Term::var("x"), Term::plus(Term::zero(), Term::one())),
                Formula::not(Formula::rel("P", vec![])),
            ),
        );
        let text = formula_to_json(&f);
        assert!(text.starts_with(r#"{"kind":"exists","var":"x","body":{"kind":"and""#));
        assert_eq!(formula_from_json(&text).unwrap(), f);
    }

    #[test]
    fn rejects_unknown_kind() {
        assert!(formula_from_json(r#"{"kind":"implies"}"#).is_err());
        assert!(formula_from_json(r#"{"kind":"var","name":"x"}"#).is_err());
    }
}

//! A Hilbert-style proof checker.
//!
//! `a -> b` abbreviates `(or (not a) b)`. Axiom schemes, by rule name:
//!
//! | rule        | scheme                                                        |
//! |-------------|---------------------------------------------------------------|
//! | `K`         | `a -> (b -> a)`                                               |
//! | `S`         | `(a -> (b -> c)) -> ((a -> b) -> (a -> c))`                   |
//! | `N`         | `(not a -> not b) -> (b -> a)`                                |
//! | `or-def-1`  | `(or a b) -> (not (not a) -> b)`                              |
//! | `or-def-2`  | `(not (not a) -> b) -> (or a b)`                              |
//! | `and-def-1` | `(and a b) -> not (not a or not b)`                           |
//! | `and-def-2` | `not (not a or not b) -> (and a b)`                           |
//! | `ex-def-1`  | `(exists v a) -> not (forall v (not a))`                      |
//! | `ex-def-2`  | `not (forall v (not a)) -> (exists v a)`                      |
//! | `Q1`        | `(forall v a) -> a[t/v]`, `t` substitutable for `v` in `a`     |
//! | `Q2`        | `(forall v (a -> b)) -> (a -> forall v b)`, `v` not free in `a` |
//! | `refl`      | `t = t`                                                       |
//! | `leibniz`   | `s = t -> (A -> B)`, `A` atomic, `B` is `A` with some `s` replaced by `t` |
//!
//! Rules: `premise`; `mp` with refs `[i, j]` where line `j` is `line i -> this`;
//! `gen` with refs `[i]` where this line is `(forall v <line i>)` and `v` is
//! free in no premise line `i` depends on. References are 1-based and must
//! point to earlier lines.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::{free_vars, free_vars_term, parse, Formula, Signature, Term};

pub const AXIOM_SCHEMES: &[&str] = &[
    "K", "S", "N", "or-def-1", "or-def-2", "and-def-1", "and-def-2", "ex-def-1", "ex-def-2", "Q1",
    "Q2", "refl", "leibniz",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub rule: String,
    pub refs: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub lines: Vec<ProofLine>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LineJson {
    formula: String,
    rule: String,
    #[serde(default)]
    refs: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProofJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    signature: Option<Signature>,
    lines: Vec<LineJson>,
}

impl Proof {
    /// Reads `{lines: [{formula, rule, refs}]}`; formulas are s-expressions
    /// over the optional `signature` field, else over arithmetic.
    pub fn from_json(text: &str) -> Result<(Proof, Signature)> {
        let raw: ProofJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let sig = match raw.signature {
            Some(s) => s.validated()?,
            None => Signature::arithmetic(),
        };
        let lines = raw
            .lines
            .into_iter()
            .map(|l| {
                Ok(ProofLine {
                    formula: parse(&l.formula, &sig)?,
                    rule: l.rule,
                    refs: l.refs,
                })
            })
            .collect::<Result<_>>()?;
        Ok((Proof { lines }, sig))
    }

    pub fn to_json(&self) -> String {
        let raw = ProofJson {
            signature: None,
            lines: self
                .lines
                .iter()
                .map(|l| LineJson {
                    formula: l.formula.to_string(),
                    rule: l.rule.clone(),
                    refs: l.refs.clone(),
                })
                .collect(),
        };
        serde_json::to_string(&raw).expect("proofs serialize")
    }
}

/// Reads a premise list: a JSON array of s-expressions over `sig`.
pub fn parse_premises(text: &str, sig: &Signature) -> Result<Vec<Formula>> {
    let raw: Vec<String> = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    raw.iter().map(|t| parse(t, sig)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineError {
    /// 1-based line number.
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProofVerdict {
    pub valid: bool,
    pub lines: usize,
    pub conclusion: Option<String>,
    pub error: Option<LineError>,
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Or(a, b) => match a.as_ref() {
            Formula::Not(x) => Some((x, b)),
            _ => None,
        },
        _ => None,
    }
}

fn implies(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn not(a: &Formula) -> Formula {
    Formula::not(a.clone())
}

type Check = std::result::Result<(), String>;

fn shape(ok: bool, scheme: &str) -> Check {
    if ok {
        Ok(())
    } else {
        Err(format!("not an instance of {scheme}"))
    }
}

fn check_k(f: &Formula) -> Check {
    let ok = imp(f).and_then(|(a, r)| imp(r).map(|(_, a2)| a == a2)).unwrap_or(false);
    shape(ok, "K")
}

fn check_s(f: &Formula) -> Check {
    let ok = (|| {
        let (l, r) = imp(f)?;
        let (a, bc) = imp(l)?;
        let (b, c) = imp(bc)?;
        Some(*r == implies(&implies(a, b), &implies(a, c)))
    })()
    .unwrap_or(false);
    shape(ok, "S")
}

fn check_n(f: &Formula) -> Check {
    let ok = (|| {
        let (l, r) = imp(f)?;
        let (na, nb) = imp(l)?;
        let (Formula::Not(a), Formula::Not(b)) = (na, nb) else {
            return None;
        };
        Some(*r == implies(b, a))
    })()
    .unwrap_or(false);
    shape(ok, "N")
}

fn check_or_def(f: &Formula, forward: bool) -> Check {
    let name = if forward { "or-def-1" } else { "or-def-2" };
    let ok = (|| {
        let (l, r) = imp(f)?;
        let (disj, other) = if forward { (l, r) } else { (r, l) };
        let Formula::Or(a, b) = disj else { return None };
        Some(*other == implies(&not(a), b))
    })()
    .unwrap_or(false);
    shape(ok, name)
}

fn check_and_def(f: &Formula, forward: bool) -> Check {
    let name = if forward { "and-def-1" } else { "and-def-2" };
    let ok = (|| {
        let (l, r) = imp(f)?;
        let (conj, other) = if forward { (l, r) } else { (r, l) };
        let Formula::And(a, b) = conj else { return None };
        Some(*other == not(&Formula::or(not(a), not(b))))
    })()
    .unwrap_or(false);
    shape(ok, name)
}

fn check_ex_def(f: &Formula, forward: bool) -> Check {
    let name = if forward { "ex-def-1" } else { "ex-def-2" };
    let ok = (|| {
        let (l, r) = imp(f)?;
        let (ex, other) = if forward { (l, r) } else { (r, l) };
        let Formula::Exists(v, a) = ex else { return None };
        Some(*other == not(&Formula::forall(v.clone(), not(a))))
    })()
    .unwrap_or(false);
    shape(ok, name)
}

/// Finds `t` with `psi = phi[t/v]`, checking that no free variable of `t`
/// is captured at a replaced occurrence.
struct InstanceMatcher<'a> {
    v: &'a str,
    found: Option<Term>,
    bound: Vec<String>,
}

impl InstanceMatcher<'_> {
    fn term(&mut self, a: &Term, b: &Term) -> Check {
        match (a, b) {
            (Term::Var(x), _) if x == self.v && !self.bound.iter().any(|y| y == x) => {
                if let Some(t) = &self.found {
                    if t != b {
                        return Err(format!("`{x}` replaced by both `{t}` and `{b}`"));
                    }
                } else {
                    self.found = Some(b.clone());
                }
                if let Some(y) = free_vars_term(b).iter().find(|y| self.bound.contains(y)) {
                    return Err(format!("variable capture: `{y}` in `{b}` becomes bound"));
                }
                Ok(())
            }
            (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.term(x, y))
            }
            _ if a == b => Ok(()),
            _ => Err(format!("`{a}` does not match `{b}`")),
        }
    }

    fn formula(&mut self, a: &Formula, b: &Formula) -> Check {
        match (a, b) {
            (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => {
                self.term(s1, s2)?;
                self.term(t1, t2)
            }
            (Formula::Rel(r1, xs), Formula::Rel(r2, ys)) if r1 == r2 && xs.len() == ys.len() => {
                xs.iter().zip(ys).try_for_each(|(x, y)| self.term(x, y))
            }
            (Formula::Not(x), Formula::Not(y)) => self.formula(x, y),
            (Formula::And(x1, x2), Formula::And(y1, y2))
            | (Formula::Or(x1, x2), Formula::Or(y1, y2)) => {
                self.formula(x1, y1)?;
                self.formula(x2, y2)
            }
            (Formula::Exists(x, g), Formula::Exists(y, h))
            | (Formula::Forall(x, g), Formula::Forall(y, h))
                if x == y =>
            {
                self.bound.push(x.clone());
                let r = self.formula(g, h);
                self.bound.pop();
                r
            }
            _ => Err(format!("`{b}` is not an instance of `{a}`")),
        }
    }
}

fn check_q1(f: &Formula) -> Check {
    let (l, r) = imp(f).ok_or("not an instance of Q1")?;
    let Formula::Forall(v, body) = l else {
        return Err("not an instance of Q1".into());
    };
    let mut m = InstanceMatcher {
        v,
        found: None,
        bound: Vec::new(),
    };
    m.formula(body, r)
}

fn check_q2(f: &Formula) -> Check {
    let ok = (|| {
        let (l, r) = imp(f)?;
        let Formula::Forall(v, inner) = l else { return None };
        let (a, b) = imp(inner)?;
        Some((v, a, *r == implies(a, &Formula::forall(v.clone(), b.clone()))))
    })();
    match ok {
        Some((v, a, true)) => {
            if free_vars(a).contains(v) {
                Err(format!("`{v}` is free in the antecedent `{a}`"))
            } else {
                Ok(())
            }
        }
        _ => Err("not an instance of Q2".into()),
    }
}

fn check_refl(f: &Formula) -> Check {
    shape(matches!(f, Formula::Eq(s, t) if s == t), "refl")
}

fn replaced_term(a: &Term, b: &Term, s: &Term, t: &Term) -> bool {
    if a == b || (a == s && b == t) {
        return true;
    }
    match (a, b) {
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| replaced_term(x, y, s, t))
        }
        _ => false,
    }
}

fn check_leibniz(f: &Formula) -> Check {
    let ok = (|| {
        let (eq, r) = imp(f)?;
        let Formula::Eq(s, t) = eq else { return None };
        let (a, b) = imp(r)?;
        Some(match (a, b) {
            (Formula::Eq(a1, a2), Formula::Eq(b1, b2)) => {
                replaced_term(a1, b1, s, t) && replaced_term(a2, b2, s, t)
            }
            (Formula::Rel(p, xs), Formula::Rel(q, ys)) => {
                p == q
                    && xs.len() == ys.len()
                    && xs.iter().zip(ys).all(|(x, y)| replaced_term(x, y, s, t))
            }
            _ => false,
        })
    })()
    .unwrap_or(false);
    shape(ok, "leibniz")
}

fn check_axiom(rule: &str, f: &Formula) -> Option<Check> {
    Some(match rule {
        "K" => check_k(f),
        "S" => check_s(f),
        "N" => check_n(f),
        "or-def-1" => check_or_def(f, true),
        "or-def-2" => check_or_def(f, false),
        "and-def-1" => check_and_def(f, true),
        "and-def-2" => check_and_def(f, false),
        "ex-def-1" => check_ex_def(f, true),
        "ex-def-2" => check_ex_def(f, false),
        "Q1" => check_q1(f),
        "Q2" => check_q2(f),
        "refl" => check_refl(f),
        "leibniz" => check_leibniz(f),
        _ => return None,
    })
}

/// Checks every line; the verdict names the first invalid one.
pub fn check_proof(p: &Proof, premises: &[Formula]) -> ProofVerdict {
    // premise lines each line depends on (0-based indices)
    let mut deps: Vec<BTreeSet<usize>> = Vec::new();
    for (i, line) in p.lines.iter().enumerate() {
        let refs = |n: usize| -> std::result::Result<Vec<usize>, String> {
            if line.refs.len() != n {
                return Err(format!("`{}` takes {n} references, found {}", line.rule, line.refs.len()));
            }
            line.refs
                .iter()
                .map(|&r| {
                    if r == 0 || r > i {
                        Err(format!("reference {r} does not point to an earlier line"))
                    } else {
                        Ok(r - 1)
                    }
                })
                .collect()
        };
        let outcome: std::result::Result<BTreeSet<usize>, String> = match line.rule.as_str() {
            "premise" => refs(0).and_then(|_| {
                if premises.contains(&line.formula) {
                    Ok(BTreeSet::from([i]))
                } else {
                    Err("not among the premises".into())
                }
            }),
            "mp" => refs(2).and_then(|r| {
                let (minor, major) = (&p.lines[r[0]].formula, &p.lines[r[1]].formula);
                if *major == implies(minor, &line.formula) {
                    Ok(deps[r[0]].union(&deps[r[1]]).copied().collect())
                } else {
                    Err(format!("line {} is not `line {} -> this line`", r[1] + 1, r[0] + 1))
                }
            }),
            "gen" => refs(1).and_then(|r| {
                let Formula::Forall(v, body) = &line.formula else {
                    return Err("generalization must produce a universal formula".into());
                };
                if **body != p.lines[r[0]].formula {
                    return Err(format!("body differs from line {}", r[0] + 1));
                }
                match deps[r[0]].iter().find(|&&d| free_vars(&p.lines[d].formula).contains(v)) {
                    Some(&d) => Err(format!(
                        "eigenvariable `{v}` is free in premise line {}",
                        d + 1
                    )),
                    None => Ok(deps[r[0]].clone()),
                }
            }),
            rule => match check_axiom(rule, &line.formula) {
                None => Err(format!("unknown rule `{rule}`")),
                Some(check) => refs(0).and(check).map(|_| BTreeSet::new()),
            },
        };
        match outcome {
            Ok(d) => deps.push(d),
            Err(reason) => {
                return ProofVerdict {
                    valid: false,
                    lines: p.lines.len(),
                    conclusion: None,
                    error: Some(LineError { line: i + 1, reason }),
                }
            }
        }
    }
    match p.lines.last() {
        Some(last) => ProofVerdict {
            valid: true,
            lines: p.lines.len(),
            conclusion: Some(last.formula.to_string()),
            error: None,
        },
        None => ProofVerdict {
            valid: false,
            lines: 0,
            conclusion: None,
            error: Some(LineError {
                line: 0,
                reason: "empty proof".into(),
            }),
        },
    }
}

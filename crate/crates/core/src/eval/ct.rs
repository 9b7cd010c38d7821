//! Checks a truth oracle against the compositional truth axioms restricted
//! to sentences of bounded depth.
//!
//! The corpus is the closed part of a small fixed language: formulas in the
//! single variable `v` built from equations between `v` and `0` with `not`,
//! `or` and `exists v` up to depth `x`, together with every instance of an
//! open one at a numeral below `b`. The clauses are
//!
//! ```text
//! CT1  T(s = t)        iff  val s = val t
//! CT2  T(p or q)       iff  T(p) or T(q)
//! CT3  T(not p)        iff  not T(p)
//! CT4  T(exists v p)   iff  T(p(y)) for some numeral y < b
//! ```
//!
//! CT4 only looks at witnesses below `b`, so it is a bounded approximation
//! of the axiom, which quantifies over all `y`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::nat::{eval_term, NatAssignment};
use crate::coding::{dot_substitute, encode, GodelCode};
use crate::complexity::dp;
use crate::error::{Error, Result};
use crate::serde_code::{code_from_string, code_string};
use crate::syntax::{free_vars, is_sentence, render, Formula, Term};

pub const CT_VAR: &str = "v";
const MAX_DEPTH: usize = 2;
const MAX_NUMERALS: u64 = 64;
const CT4_NOTE: &str = "bounded approximation";

/// A map from sentence codes to truth values. Codes outside the map are
/// outside the oracle's domain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruthOracle {
    entries: BTreeMap<GodelCode, bool>,
}

#[derive(Serialize, Deserialize)]
struct JEntry(
    #[serde(serialize_with = "code_string", deserialize_with = "code_from_string")] BigUint,
    bool,
);

impl TruthOracle {
    pub fn new() -> TruthOracle {
        TruthOracle::default()
    }

    pub fn insert(&mut self, code: GodelCode, value: bool) {
        self.entries.insert(code, value);
    }

    pub fn get(&self, code: &GodelCode) -> Option<bool> {
        self.entries.get(code).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GodelCode, bool)> {
        self.entries.iter().map(|(c, &v)| (c, v))
    }

    /// The codes mapped to true.
    pub fn true_codes(&self) -> BTreeSet<GodelCode> {
        self.iter().filter(|(_, v)| *v).map(|(c, _)| c.clone()).collect()
    }

    /// Parses `[["code", bool], ...]`.
    pub fn from_json(text: &str) -> Result<TruthOracle> {
        let items: Vec<JEntry> =
            serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut oracle = TruthOracle::new();
        for JEntry(c, v) in items {
            if oracle.entries.insert(c.clone(), v).is_some_and(|old| old != v) {
                return Err(Error::Json(format!("conflicting entries for code {c}")));
            }
        }
        Ok(oracle)
    }

    pub fn to_json(&self) -> String {
        let items: Vec<JEntry> = self.iter().map(|(c, v)| JEntry(c.clone(), v)).collect();
        serde_json::to_string(&items).expect("oracle serialization cannot fail")
    }
}

impl FromIterator<(GodelCode, bool)> for TruthOracle {
    fn from_iter<I: IntoIterator<Item = (GodelCode, bool)>>(iter: I) -> TruthOracle {
        TruthOracle {
            entries: iter.into_iter().collect(),
        }
    }
}

fn formulas_up_to(x: usize) -> Vec<Formula> {
    let v = || Term::var(CT_VAR);
    let terms = [v(), Term::zero()];
    let mut layers: Vec<Vec<Formula>> = vec![terms
        .iter()
        .flat_map(|s| terms.iter().map(move |t| Formula::eq(s.clone(), t.clone())))
        .collect()];
    for d in 1..=x {
        let prev = &layers[d - 1];
        let below: Vec<&Formula> = layers.iter().flatten().collect();
        let mut layer: Vec<Formula> = prev.iter().map(|f| Formula::not(f.clone())).collect();
        for a in &below {
            for b in &below {
                if dp(a).max(dp(b)) == d - 1 {
                    layer.push(Formula::or((*a).clone(), (*b).clone()));
                }
            }
        }
        layer.extend(prev.iter().map(|f| Formula::exists(CT_VAR, f.clone())));
        layers.push(layer);
    }
    layers.into_iter().flatten().collect()
}

/// The sentences of the fixed corpus for depth bound `x` and numeral bound
/// `b`, sorted by code.
pub fn ct_corpus(x: usize, b: u64) -> Result<Vec<Formula>> {
    if x > MAX_DEPTH || b > MAX_NUMERALS {
        return Err(Error::SizeGuard(format!(
            "corpus limited to depth <= {MAX_DEPTH} and numerals < {MAX_NUMERALS}"
        )));
    }
    let mut out: BTreeMap<GodelCode, Formula> = BTreeMap::new();
    for f in formulas_up_to(x) {
        if is_sentence(&f) {
            out.insert(encode(&f), f);
        } else {
            for y in 0..b {
                let g = dot_substitute(&f, CT_VAR, &BigUint::from(y));
                out.insert(encode(&g), g);
            }
        }
    }
    Ok(out.into_values().collect())
}

#[derive(Clone, Debug)]
enum CtClause {
    Ct1(bool),
    Ct2(usize, usize),
    Ct3(usize),
    Ct4(Vec<usize>),
    Unchecked,
}

impl CtClause {
    fn name(&self) -> &'static str {
        match self {
            CtClause::Ct1(_) => "CT1",
            CtClause::Ct2(..) => "CT2",
            CtClause::Ct3(_) => "CT3",
            CtClause::Ct4(_) => "CT4",
            CtClause::Unchecked => "none",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CtViolation {
    pub clause: &'static str,
    #[serde(serialize_with = "code_string")]
    pub code: GodelCode,
    pub sentence: String,
    pub expected: bool,
    pub got: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
    #[serde(skip)]
    pub entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CtReport {
    pub depth: usize,
    pub numeral_bound: u64,
    pub sentences: usize,
    pub checked: BTreeMap<&'static str, usize>,
    pub violations: Vec<CtViolation>,
    /// Corpus sentences the oracle has no value for.
    #[serde(serialize_with = "crate::serde_code::code_strings")]
    pub gaps: Vec<GodelCode>,
}

impl CtReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.gaps.is_empty()
    }
}

/// Precomputed plan over the corpus; the oracle is queried once per sentence.
pub struct CtChecker {
    depth: usize,
    numeral_bound: u64,
    sentences: Vec<Formula>,
    codes: Vec<GodelCode>,
    clauses: Vec<CtClause>,
}

impl CtChecker {
    pub fn new(x: usize, b: u64) -> Result<CtChecker> {
        let sentences = ct_corpus(x, b)?;
        let codes: Vec<GodelCode> = sentences.iter().map(encode).collect();
        let index: HashMap<&Formula, usize> =
            sentences.iter().enumerate().map(|(i, f)| (f, i)).collect();
        let at = |f: &Formula| {
            index.get(f).copied().ok_or_else(|| {
                Error::Eval(format!("corpus is not closed under components: `{f}`"))
            })
        };
        let mut clauses = Vec::with_capacity(sentences.len());
        for f in &sentences {
            let clause = match f {
                Formula::Eq(s, t) => {
                    let empty = NatAssignment::new();
                    CtClause::Ct1(eval_term(s, &empty)? == eval_term(t, &empty)?)
                }
                Formula::Or(a, c) => CtClause::Ct2(at(a)?, at(c)?),
                Formula::Not(a) => CtClause::Ct3(at(a)?),
                Formula::Exists(v, body) => {
                    let instances = (0..b)
                        .map(|y| {
                            if free_vars(body).contains(v) {
                                at(&dot_substitute(body, v, &BigUint::from(y)))
                            } else {
                                at(body)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    CtClause::Ct4(instances)
                }
                _ => CtClause::Unchecked,
            };
            clauses.push(clause);
        }
        Ok(CtChecker {
            depth: x,
            numeral_bound: b,
            sentences,
            codes,
            clauses,
        })
    }

    pub fn sentences(&self) -> &[Formula] {
        &self.sentences
    }

    pub fn codes(&self) -> &[GodelCode] {
        &self.codes
    }

    /// Entries read by the clause of sentence `i`.
    pub fn inputs(&self, i: usize) -> Vec<usize> {
        match &self.clauses[i] {
            CtClause::Ct1(_) | CtClause::Unchecked => vec![],
            CtClause::Ct2(a, b) => vec![*a, *b],
            CtClause::Ct3(a) => vec![*a],
            CtClause::Ct4(is) => is.clone(),
        }
    }

    pub fn clause_name(&self, i: usize) -> &'static str {
        self.clauses[i].name()
    }

    pub fn query(&self, oracle: &TruthOracle) -> Vec<Option<bool>> {
        self.codes.iter().map(|c| oracle.get(c)).collect()
    }

    pub fn check(&self, oracle: &TruthOracle) -> CtReport {
        self.check_values(&self.query(oracle))
    }

    pub fn check_values(&self, values: &[Option<bool>]) -> CtReport {
        let mut report = CtReport {
            depth: self.depth,
            numeral_bound: self.numeral_bound,
            sentences: self.sentences.len(),
            checked: BTreeMap::new(),
            violations: Vec::new(),
            gaps: Vec::new(),
        };
        for (i, clause) in self.clauses.iter().enumerate() {
            let Some(got) = values[i] else {
                report.gaps.push(self.codes[i].clone());
                continue;
            };
            let expected = match clause {
                CtClause::Ct1(v) => Some(*v),
                CtClause::Ct2(a, b) => values[*a].zip(values[*b]).map(|(p, q)| p || q),
                CtClause::Ct3(a) => values[*a].map(|p| !p),
                CtClause::Ct4(is) => is
                    .iter()
                    .map(|&j| values[j])
                    .collect::<Option<Vec<bool>>>()
                    .map(|vs| vs.into_iter().any(|p| p)),
                CtClause::Unchecked => None,
            };
            let Some(expected) = expected else { continue };
            *report.checked.entry(clause.name()).or_default() += 1;
            if expected != got {
                report.violations.push(CtViolation {
                    clause: clause.name(),
                    code: self.codes[i].clone(),
                    sentence: render(&self.sentences[i]),
                    expected,
                    got,
                    note: matches!(clause, CtClause::Ct4(_)).then_some(CT4_NOTE),
                    entry: i,
                });
            }
        }
        report
    }
}

/// Checks `oracle` on the corpus for depth `x` and numeral bound `b`.
pub fn check_ct(oracle: &TruthOracle, x: usize, b: u64) -> Result<CtReport> {
    Ok(CtChecker::new(x, b)?.check(oracle))
}

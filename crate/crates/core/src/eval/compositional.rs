//! Checks a satisfaction oracle against the Tarskian compositional clauses.
//!
//! The oracle answers `S(code, assignment)` where the assignment covers
//! exactly the free variables of the coded formula. For every formula of
//! the input, every subformula and every assignment over the context domain
//! one clause is checked:
//!
//! ```text
//! atomic       S(A, a)        iff  the model satisfies A under a
//! not          S(not p, a)    iff  not S(p, a)
//! and / or     S(p op q, a)   iff  S(p, a|p) op S(q, a|q)
//! exists v     S(exists v p, a) iff S(p, b|p) for some b agreeing with a off v
//! forall v     S(forall v p, a) iff S(p, b|p) for all such b
//! ```

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigUint;
use serde::Serialize;

use super::finite::eval_finite;
use super::nat::{eval_nat, is_bounded, NatAssignment};
use super::{EvalBudget, Verdict};
use crate::coding::{encode, GodelCode};
use crate::error::{Error, Result};
use crate::model::FiniteModel;
use crate::syntax::{free_vars, render, Formula, Term};

/// Assignment restricted to the free variables of one formula. Values are
/// element indices or natural numbers depending on the context.
pub type Asn = BTreeMap<String, usize>;

/// Where quantifiers range.
#[derive(Clone, Copy, Debug)]
pub enum Context<'a> {
    Finite(&'a FiniteModel),
    /// The naturals below `bound`; every formula must be bounded.
    NatBounded { bound: usize },
}

impl Context<'_> {
    fn size(&self) -> usize {
        match self {
            Context::Finite(m) => m.len(),
            Context::NatBounded { bound } => *bound,
        }
    }

    fn label(&self, d: usize) -> String {
        match self {
            Context::Finite(m) => m.name(d).to_string(),
            Context::NatBounded { .. } => d.to_string(),
        }
    }

    fn atom(&self, f: &Formula, asn: &Asn) -> Result<bool> {
        match self {
            Context::Finite(m) => eval_finite(f, m, asn),
            Context::NatBounded { .. } => {
                let nat: NatAssignment = asn.iter().map(|(k, &v)| (k.clone(), BigUint::from(v))).collect();
                match eval_nat(f, &nat, &EvalBudget::default())? {
                    Verdict::Unknown => Err(Error::Eval(format!("atom `{f}` undecided"))),
                    v => Ok(v == Verdict::True),
                }
            }
        }
    }
}

/// Exact satisfaction table keyed by code and restricted assignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SatTable {
    entries: HashMap<(GodelCode, Asn), bool>,
}

impl SatTable {
    pub fn new() -> SatTable {
        SatTable::default()
    }

    pub fn insert(&mut self, code: GodelCode, asn: Asn, value: bool) {
        self.entries.insert((code, asn), value);
    }

    pub fn get(&self, code: &GodelCode, asn: &Asn) -> Option<bool> {
        self.entries.get(&(code.clone(), asn.clone())).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GodelCode, &Asn, bool)> {
        self.entries.iter().map(|((c, a), &v)| (c, a, v))
    }

    /// The table of a finite model on `fs` and all their subformulas.
    pub fn of_model(m: &FiniteModel, fs: &[Formula]) -> Result<SatTable> {
        let checker = CompositionalChecker::new(fs, Context::Finite(m))?;
        let mut table = SatTable::new();
        for i in 0..checker.entry_count() {
            let (f, asn) = checker.entry(i);
            let value = eval_finite(f, m, asn)?;
            table.insert(checker.code_of(i).clone(), asn.clone(), value);
        }
        Ok(table)
    }
}

#[derive(Clone, Debug)]
enum Clause {
    Atomic { kind: &'static str, value: bool },
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Quant { existential: bool, instances: Vec<usize> },
}

impl Clause {
    fn name(&self) -> &'static str {
        match self {
            Clause::Atomic { kind, .. } => kind,
            Clause::Not(_) => "not",
            Clause::And(..) => "and",
            Clause::Or(..) => "or",
            Clause::Quant { existential: true, .. } => "exists",
            Clause::Quant { .. } => "forall",
        }
    }

    fn inputs(&self) -> Vec<usize> {
        match self {
            Clause::Atomic { .. } => vec![],
            Clause::Not(i) => vec![*i],
            Clause::And(i, j) | Clause::Or(i, j) => vec![*i, *j],
            Clause::Quant { instances, .. } => instances.clone(),
        }
    }
}

struct PlanFormula {
    formula: Formula,
    code: GodelCode,
    vars: Vec<String>,
    first_entry: usize,
}

struct Entry {
    formula: usize,
    asn: Asn,
    clause: Clause,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: &'static str,
    #[serde(serialize_with = "crate::serde_code::code_string")]
    pub code: GodelCode,
    pub formula: String,
    pub assignment: BTreeMap<String, String>,
    pub expected: bool,
    pub got: bool,
    /// Index of the offending entry in the checker's plan.
    #[serde(skip)]
    pub entry: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DomainGap {
    #[serde(serialize_with = "crate::serde_code::code_string")]
    pub code: GodelCode,
    pub formula: String,
    pub missing: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CompositionalReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
    pub gaps: Vec<DomainGap>,
}

impl CompositionalReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.gaps.is_empty()
    }
}

/// Precomputed plan: every (subformula, assignment) entry with the entries
/// its clause reads. The oracle is queried once per entry.
pub struct CompositionalChecker {
    formulas: Vec<PlanFormula>,
    entries: Vec<Entry>,
    labels: Vec<String>,
}

fn atomic_kind(f: &Formula) -> &'static str {
    let flat = |t: &Term| matches!(t, Term::Var(_) | Term::Const(_));
    let graph = |t: &Term| matches!(t, Term::App(_, args) if args.iter().all(flat));
    match f {
        Formula::Rel(_, args) if args.iter().all(flat) => "atomic-relation",
        Formula::Eq(s, t) if flat(s) && flat(t) => "atomic-equality",
        Formula::Eq(s, t) if (flat(s) && graph(t)) || (graph(s) && flat(t)) => "atomic-function",
        _ => "atomic-term",
    }
}

impl CompositionalChecker {
    pub fn new(fs: &[Formula], ctx: Context<'_>) -> Result<CompositionalChecker> {
        if let Context::NatBounded { .. } = ctx {
            if let Some(f) = fs.iter().find(|f| !is_bounded(f)) {
                return Err(Error::Eval(format!(
                    "formula `{f}` has an unbounded quantifier"
                )));
            }
        }
        let n = ctx.size();
        let mut checker = CompositionalChecker {
            formulas: Vec::new(),
            entries: Vec::new(),
            labels: (0..n).map(|d| ctx.label(d)).collect(),
        };
        let mut index: HashMap<Formula, usize> = HashMap::new();
        for f in fs {
            checker.add(f, &ctx, &mut index)?;
        }
        Ok(checker)
    }

    fn entry_of(&self, formula: usize, asn: &Asn) -> usize {
        let pf = &self.formulas[formula];
        let n = self.labels.len();
        let offset = pf.vars.iter().fold(0, |acc, v| acc * n + asn[v]);
        pf.first_entry + offset
    }

    fn add(&mut self, f: &Formula, ctx: &Context<'_>, index: &mut HashMap<Formula, usize>) -> Result<usize> {
        if let Some(&i) = index.get(f) {
            return Ok(i);
        }
        let children = f
            .children()
            .into_iter()
            .map(|c| self.add(c, ctx, index))
            .collect::<Result<Vec<_>>>()?;
        let vars: Vec<String> = free_vars(f).into_iter().collect();
        let n = self.labels.len();
        let idx = self.formulas.len();
        self.formulas.push(PlanFormula {
            formula: f.clone(),
            code: encode(f),
            vars: vars.clone(),
            first_entry: self.entries.len(),
        });
        let total = n.pow(vars.len() as u32);
        for code in 0..total {
            let mut rest = code;
            let mut values = vec![0; vars.len()];
            for slot in values.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            let asn: Asn = vars.iter().cloned().zip(values).collect();
            let restrict = |this: &Self, child: usize, asn: &Asn| {
                let sub: Asn = this.formulas[child]
                    .vars
                    .iter()
                    .map(|v| (v.clone(), asn[v]))
                    .collect();
                this.entry_of(child, &sub)
            };
            let clause = match f {
                Formula::Eq(..) | Formula::Rel(..) => Clause::Atomic {
                    kind: atomic_kind(f),
                    value: ctx.atom(f, &asn)?,
                },
                Formula::Not(_) => Clause::Not(restrict(self, children[0], &asn)),
                Formula::And(..) => Clause::And(
                    restrict(self, children[0], &asn),
                    restrict(self, children[1], &asn),
                ),
                Formula::Or(..) => Clause::Or(
                    restrict(self, children[0], &asn),
                    restrict(self, children[1], &asn),
                ),
                Formula::Exists(v, _) | Formula::Forall(v, _) => {
                    let instances = (0..n)
                        .map(|d| {
                            let mut beta = asn.clone();
                            beta.insert(v.clone(), d);
                            restrict(self, children[0], &beta)
                        })
                        .collect();
                    Clause::Quant {
                        existential: matches!(f, Formula::Exists(..)),
                        instances,
                    }
                }
            };
            self.entries.push(Entry {
                formula: idx,
                asn,
                clause,
            });
        }
        index.insert(f.clone(), idx);
        Ok(idx)
    }

    pub fn entry_count(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize) -> (&Formula, &Asn) {
        let e = &self.entries[i];
        (&self.formulas[e.formula].formula, &e.asn)
    }

    pub fn code_of(&self, i: usize) -> &GodelCode {
        &self.formulas[self.entries[i].formula].code
    }

    /// Entries read by the clause of entry `i`.
    pub fn inputs(&self, i: usize) -> Vec<usize> {
        self.entries[i].clause.inputs()
    }

    /// Asks the oracle once per entry.
    pub fn query(&self, oracle: impl Fn(&GodelCode, &Asn) -> Option<bool>) -> Vec<Option<bool>> {
        self.entries
            .iter()
            .map(|e| oracle(&self.formulas[e.formula].code, &e.asn))
            .collect()
    }

    pub fn check(&self, oracle: impl Fn(&GodelCode, &Asn) -> Option<bool>) -> CompositionalReport {
        self.check_values(&self.query(oracle))
    }

    /// Checks every clause against precomputed oracle answers (indexed like
    /// the entries). Clauses that read a missing answer are skipped and the
    /// gap is reported per formula.
    pub fn check_values(&self, values: &[Option<bool>]) -> CompositionalReport {
        let mut report = CompositionalReport::default();
        let mut missing: BTreeMap<usize, usize> = BTreeMap::new();
        for (i, e) in self.entries.iter().enumerate() {
            let Some(got) = values[i] else {
                *missing.entry(e.formula).or_default() += 1;
                continue;
            };
            let expected = match &e.clause {
                Clause::Atomic { value, .. } => Some(*value),
                Clause::Not(j) => values[*j].map(|v| !v),
                Clause::And(j, k) => values[*j].zip(values[*k]).map(|(a, b)| a && b),
                Clause::Or(j, k) => values[*j].zip(values[*k]).map(|(a, b)| a || b),
                Clause::Quant {
                    existential,
                    instances,
                } => instances
                    .iter()
                    .map(|&j| values[j])
                    .collect::<Option<Vec<bool>>>()
                    .map(|vs| {
                        if *existential {
                            vs.into_iter().any(|b| b)
                        } else {
                            vs.into_iter().all(|b| b)
                        }
                    }),
            };
            let Some(expected) = expected else { continue };
            report.checked += 1;
            if expected != got {
                let pf = &self.formulas[e.formula];
                report.violations.push(Violation {
                    clause: e.clause.name(),
                    code: pf.code.clone(),
                    formula: render(&pf.formula),
                    assignment: e
                        .asn
                        .iter()
                        .map(|(k, &v)| (k.clone(), self.labels[v].clone()))
                        .collect(),
                    expected,
                    got,
                    entry: i,
                });
            }
        }
        report
            .violations
            .sort_by(|a, b| (&a.code, &a.assignment).cmp(&(&b.code, &b.assignment)));
        report.gaps = missing
            .into_iter()
            .map(|(fi, count)| DomainGap {
                code: self.formulas[fi].code.clone(),
                formula: render(&self.formulas[fi].formula),
                missing: count,
            })
            .collect();
        report.gaps.sort_by(|a, b| a.code.cmp(&b.code));
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn sig() -> Signature {
        Signature::empty().with_relation("in", 2).unwrap()
    }

    fn model() -> FiniteModel {
        let mut m = FiniteModel::with_size(2).unwrap();
        m.add_relation("in", 2, [vec![0, 1]]).unwrap();
        m
    }

    #[test]
    fn exact_table_is_compositional() {
        let fs: Vec<Formula> = ["(exists x (forall y (not (in y x))))", "(or (in x y) (= x y))"]
            .iter()
            .map(|t| parse(t, &sig()).unwrap())
            .collect();
        let m = model();
        let table = SatTable::of_model(&m, &fs).unwrap();
        let checker = CompositionalChecker::new(&fs, Context::Finite(&m)).unwrap();
        let report = checker.check(|c, a| table.get(c, a));
        assert!(report.is_clean(), "{report:?}");
        assert!(report.checked > 0);
    }

    #[test]
    fn flipped_entry_is_localized() {
        let fs = vec![parse("(not (in x y))", &sig()).unwrap()];
        let m = model();
        let table = SatTable::of_model(&m, &fs).unwrap();
        let checker = CompositionalChecker::new(&fs, Context::Finite(&m)).unwrap();
        let mut values = checker.query(|c, a| table.get(c, a));
        // flip `in x y` at x=0, y=1
        let target = (0..checker.entry_count())
            .find(|&i| {
                let (f, a) = checker.entry(i);
                f.is_atomic() && a["x"] == 0 && a["y"] == 1
            })
            .unwrap();
        values[target] = values[target].map(|v| !v);
        let report = checker.check_values(&values);
        let clauses: Vec<&str> = report.violations.iter().map(|v| v.clause).collect();
        assert_eq!(clauses, vec!["atomic-relation", "not"]);
        for v in &report.violations {
            assert!(v.entry == target || checker.inputs(v.entry).contains(&target));
        }
    }

    #[test]
    fn empty_input_and_gaps() {
        let m = model();
        let checker = CompositionalChecker::new(&[], Context::Finite(&m)).unwrap();
        assert_eq!(checker.check(|_, _| None), CompositionalReport::default());
        let fs = vec![parse("(in x x)", &sig()).unwrap()];
        let checker = CompositionalChecker::new(&fs, Context::Finite(&m)).unwrap();
        let report = checker.check(|_, _| None);
        assert_eq!(report.gaps.len(), 1);
        assert_eq!(report.gaps[0].missing, 2);
    }

    #[test]
    fn bounded_arithmetic_context() {
        let ar = Signature::arithmetic();
        let fs = vec![parse("(exists y (and (< y x) (= (+ y 1) x)))", &ar).unwrap()];
        let ctx = Context::NatBounded { bound: 5 };
        let checker = CompositionalChecker::new(&fs, ctx).unwrap();
        // exact answers computed over the naturals
        let values: Vec<Option<bool>> = (0..checker.entry_count())
            .map(|i| {
                let (f, a) = checker.entry(i);
                let nat = a.iter().map(|(k, &v)| (k.clone(), BigUint::from(v))).collect();
                eval_nat(f, &nat, &EvalBudget::default()).unwrap().definite()
            })
            .collect();
        assert!(checker.check_values(&values).is_clean());
        let unbounded = vec![parse("(exists y (= y x))", &ar).unwrap()];
        assert!(CompositionalChecker::new(&unbounded, ctx).is_err());
    }
}

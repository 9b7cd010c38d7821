//! Axiom-schema instances over fresh symbols, and predicate translation.
//!
//! Every generator returns concrete formulas; codes enter as binary numerals.
//! Internal quantification over codes is not produced as object syntax.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::coding::{encode, numeral, GodelCode};
use crate::error::{Error, Result};
use crate::eval::eval_term;
use crate::serde_code::code_string;
use crate::syntax::{
    all_vars, exists_unique, free_vars, fresh_var, substitute, term_vars, Formula,
    Signature, Term,
};

pub const TRUTH: &str = "T";
pub const SATISFACTION: &str = "S";
pub const DEFINABILITY: &str = "D";
pub const SKOLEM: &str = "H";
pub const TRUTH_LEFT: &str = "T1";
pub const TRUTH_RIGHT: &str = "T2";
pub const REALIZER: &str = "R";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaId {
    Tb,
    Usb,
    Def,
    UtbTerm,
    Skolem,
    Uskolem,
    Twotb,
    Rsat,
}

impl SchemaId {
    pub fn parse(s: &str) -> Option<SchemaId> {
        Some(match s {
            "tb" => SchemaId::Tb,
            "usb" => SchemaId::Usb,
            "def" => SchemaId::Def,
            "utb-term" => SchemaId::UtbTerm,
            "skolem" => SchemaId::Skolem,
            "uskolem" => SchemaId::Uskolem,
            "twotb" => SchemaId::Twotb,
            "rsat" => SchemaId::Rsat,
            _ => return None,
        })
    }

    /// The fresh symbols the schema introduces, with arities.
    pub fn fresh_symbols(self) -> &'static [(&'static str, usize)] {
        match self {
            SchemaId::Tb | SchemaId::UtbTerm => &[(TRUTH, 1)],
            SchemaId::Usb => &[(SATISFACTION, 2)],
            SchemaId::Def => &[(DEFINABILITY, 2)],
            SchemaId::Skolem => &[(SKOLEM, 1)],
            SchemaId::Uskolem => &[(SKOLEM, 2)],
            SchemaId::Twotb => &[(TRUTH_LEFT, 1), (TRUTH_RIGHT, 1)],
            SchemaId::Rsat => &[(REALIZER, 3)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaInstance {
    pub sources: Vec<String>,
    #[serde(serialize_with = "crate::serde_code::code_strings")]
    pub source_codes: Vec<GodelCode>,
    pub instance: String,
    #[serde(serialize_with = "code_string")]
    pub code: GodelCode,
    #[serde(skip)]
    pub formula: Formula,
}

impl SchemaInstance {
    fn new(sources: &[&Formula], formula: Formula) -> SchemaInstance {
        SchemaInstance {
            sources: sources.iter().map(|f| f.to_string()).collect(),
            source_codes: sources.iter().map(|f| encode(f)).collect(),
            instance: formula.to_string(),
            code: encode(&formula),
            formula,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchemaInstanceSet {
    pub schema: SchemaId,
    pub instances: Vec<SchemaInstance>,
    #[serde(skip)]
    pub signature: Signature,
}

impl SchemaInstanceSet {
    fn build(schema: SchemaId, instances: Vec<SchemaInstance>) -> Result<SchemaInstanceSet> {
        let mut signature = Signature::arithmetic();
        for (name, arity) in schema.fresh_symbols() {
            signature = if *name == SKOLEM {
                signature.with_function(name, *arity)?
            } else {
                signature.with_relation(name, *arity)?
            };
        }
        for inst in &instances {
            signature = signature.extended_by(&inst.formula)?;
        }
        Ok(SchemaInstanceSet {
            schema,
            instances,
            signature,
        })
    }
}

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

fn require_sentence(f: &Formula) -> Result<()> {
    let fv = free_vars(f);
    if fv.is_empty() {
        Ok(())
    } else {
        Err(schema_err(format!(
            "expected a sentence, `{f}` has free variables {:?}",
            fv
        )))
    }
}

fn single_free_var(f: &Formula) -> Result<String> {
    let fv = free_vars(f);
    match fv.len() {
        1 => Ok(fv.into_iter().next().expect("one element")),
        k => Err(schema_err(format!(
            "expected exactly one free variable in `{f}`, found {k}"
        ))),
    }
}

fn require_fresh(f: &Formula, names: &[&str]) -> Result<()> {
    for name in names {
        if f.mentions_relation(name) || f.mentions_function(name) {
            return Err(schema_err(format!("`{f}` already uses the fresh symbol `{name}`")));
        }
    }
    Ok(())
}

/// `preferred` unless it occurs in `f`, else the first fresh `v<k>`.
fn pick_var(preferred: &str, f: &Formula) -> String {
    let used = all_vars(f);
    if used.contains(preferred) {
        fresh_var(&used)
    } else {
        preferred.to_string()
    }
}

fn code_of(f: &Formula) -> Term {
    numeral(&encode(f))
}

/// `T(code(phi)) <-> phi`.
pub fn tb_axiom(phi: &Formula) -> Result<Formula> {
    require_sentence(phi)?;
    require_fresh(phi, &[TRUTH])?;
    Ok(Formula::iff(Formula::rel(TRUTH, vec![code_of(phi)]), phi.clone()))
}

/// `forall x (S(code(phi), x) <-> phi(x))` for `phi` with one free variable.
pub fn usb_axiom(phi: &Formula) -> Result<Formula> {
    let v = single_free_var(phi)?;
    require_fresh(phi, &[SATISFACTION])?;
    let x = pick_var("x", phi);
    let body = substitute(phi, &v, &Term::var(&x));
    Ok(Formula::forall(
        x.clone(),
        Formula::iff(
            Formula::rel(SATISFACTION, vec![code_of(phi), Term::var(x)]),
            body,
        ),
    ))
}

/// `forall y (D(code(phi), y) <-> (exists! v phi and phi(y)))`.
pub fn def_axiom(phi: &Formula) -> Result<Formula> {
    let v = single_free_var(phi)?;
    require_fresh(phi, &[DEFINABILITY])?;
    let y = pick_var("y", phi);
    let unique = exists_unique(&v, phi);
    let at_y = substitute(phi, &v, &Term::var(&y));
    Ok(Formula::forall(
        y.clone(),
        Formula::iff(
            Formula::rel(DEFINABILITY, vec![code_of(phi), Term::var(y)]),
            Formula::and(unique, at_y),
        ),
    ))
}

/// `T(code(phi(t))) <-> phi(num(val t))`, with the value of `t` computed
/// outside the object language.
pub fn utb_term_instance(phi: &Formula, t: &Term) -> Result<Formula> {
    let v = single_free_var(phi)?;
    require_fresh(phi, &[TRUTH])?;
    if !t.is_closed() {
        return Err(schema_err(format!("term `{t}` is not closed")));
    }
    let value = eval_term(t, &Default::default())?;
    let inner = substitute(phi, &v, t);
    Ok(Formula::iff(
        Formula::rel(TRUTH, vec![code_of(&inner)]),
        substitute(phi, &v, &numeral(&value)),
    ))
}

/// `exists v phi -> phi(H(code(phi)))`.
pub fn skolem_axiom(phi: &Formula) -> Result<Formula> {
    let v = single_free_var(phi)?;
    require_fresh(phi, &[SKOLEM])?;
    let witness = Term::app(SKOLEM, vec![code_of(phi)]);
    Ok(Formula::implies(
        Formula::exists(v.clone(), phi.clone()),
        substitute(phi, &v, &witness),
    ))
}

/// Uniform Skolem axiom for `phi(w, p)` with witness variable `w` and one
/// parameter `p`: `forall p (exists w phi -> phi(H(code(phi), p), p))`.
pub fn uskolem_axiom(phi: &Formula, witness: &str) -> Result<Formula> {
    let fv = free_vars(phi);
    if fv.len() != 2 || !fv.contains(witness) {
        return Err(schema_err(format!(
            "expected free variables {{{witness}, parameter}} in `{phi}`"
        )));
    }
    require_fresh(phi, &[SKOLEM])?;
    let p = fv.iter().find(|v| *v != witness).expect("two variables").clone();
    let h = Term::app(SKOLEM, vec![code_of(phi), Term::var(&p)]);
    Ok(Formula::forall(
        p,
        Formula::implies(
            Formula::exists(witness, phi.clone()),
            substitute(phi, witness, &h),
        ),
    ))
}

/// `(T1(code(phi)) <-> phi) or (T2(code(psi)) <-> psi)`.
pub fn twotb_axiom(phi: &Formula, psi: &Formula) -> Result<Formula> {
    require_sentence(phi)?;
    require_sentence(psi)?;
    require_fresh(phi, &[TRUTH_LEFT, TRUTH_RIGHT])?;
    require_fresh(psi, &[TRUTH_LEFT, TRUTH_RIGHT])?;
    Ok(Formula::or(
        Formula::iff(Formula::rel(TRUTH_LEFT, vec![code_of(phi)]), phi.clone()),
        Formula::iff(Formula::rel(TRUTH_RIGHT, vec![code_of(psi)]), psi.clone()),
    ))
}

/// `2z = (a + b)(a + b + 1) + 2b`: `z` is the Cantor pair of `a` and `b`.
pub fn pair_formula(a: &Term, b: &Term, z: &Term) -> Formula {
    let s = Term::plus(a.clone(), b.clone());
    Formula::eq(
        Term::plus(z.clone(), z.clone()),
        Term::plus(
            Term::times(s.clone(), Term::plus(s, Term::one())),
            Term::plus(b.clone(), b.clone()),
        ),
    )
}

/// Folds the parameters `params` of `phi` into the single parameter `y`:
/// `exists p1 exists p2 (y = <p1, p2> and phi)`, nesting pairs to the right
/// for more parameters. One parameter is renamed to `y`.
pub fn tuple_parameters(phi: &Formula, params: &[&str], y: &str) -> Result<Formula> {
    match params {
        [] => Err(schema_err("no parameters to tuple")),
        [p] => Ok(substitute(phi, p, &Term::var(y))),
        [p, rest @ ..] => {
            let mut avoid = all_vars(phi);
            avoid.insert(y.to_string());
            let tail = fresh_var(&avoid);
            let inner = tuple_parameters(phi, rest, &tail)?;
            Ok(Formula::exists(
                p.to_string(),
                Formula::exists(
                    tail.clone(),
                    Formula::and(
                        pair_formula(&Term::var(*p), &Term::var(tail), &Term::var(y)),
                        inner,
                    ),
                ),
            ))
        }
    }
}

/// Optimality instances for the first `m` formulas of `ptype`, `1 <= m <= n`:
/// `forall y (exists x C_m -> forall x (R(num p, x, y) -> C_m))`, followed by
/// nonemptiness `forall y exists x R(num p, x, y)`. `C_m` is the conjunction
/// of the first `m` formulas; for `n = 0` only nonemptiness is emitted.
pub fn rsat_instances(ptype: &[Formula], p: &GodelCode, n: usize) -> Result<SchemaInstanceSet> {
    if n > ptype.len() {
        return Err(schema_err(format!(
            "cutoff {n} exceeds the {} formulas given",
            ptype.len()
        )));
    }
    let allowed: BTreeSet<String> = ["x".to_string(), "y".to_string()].into();
    for phi in ptype {
        if let Some(stray) = free_vars(phi).difference(&allowed).next() {
            return Err(schema_err(format!("stray free variable `{stray}` in `{phi}`")));
        }
        require_fresh(phi, &[REALIZER])?;
    }
    let r = || {
        Formula::rel(
            REALIZER,
            vec![numeral(p), Term::var("x"), Term::var("y")],
        )
    };
    let mut instances = Vec::new();
    for m in 1..=n {
        let conj = Formula::conjunction(ptype[..m].to_vec());
        let op = Formula::forall(
            "y",
            Formula::implies(
                Formula::exists("x", conj.clone()),
                Formula::forall("x", Formula::implies(r(), conj)),
            ),
        );
        let sources: Vec<&Formula> = ptype[..m].iter().collect();
        instances.push(SchemaInstance::new(&sources, op));
    }
    let ne = Formula::forall("y", Formula::exists("x", r()));
    instances.push(SchemaInstance::new(&[], ne));
    SchemaInstanceSet::build(SchemaId::Rsat, instances)
}

/// Instances of a one-source schema for each formula in `sources`.
pub fn instances(schema: SchemaId, sources: &[Formula]) -> Result<SchemaInstanceSet> {
    let gen: fn(&Formula) -> Result<Formula> = match schema {
        SchemaId::Tb => tb_axiom,
        SchemaId::Usb => usb_axiom,
        SchemaId::Def => def_axiom,
        SchemaId::Skolem => skolem_axiom,
        SchemaId::Twotb => {
            let pairs = sources
                .chunks(2)
                .map(|c| match c {
                    [a, b] => Ok(SchemaInstance::new(&[a, b], twotb_axiom(a, b)?)),
                    _ => Err(schema_err("twotb needs an even number of sentences")),
                })
                .collect::<Result<_>>()?;
            return SchemaInstanceSet::build(schema, pairs);
        }
        _ => {
            return Err(schema_err(format!(
                "{schema:?} needs extra arguments beyond a formula list"
            )))
        }
    };
    let out = sources
        .iter()
        .map(|f| Ok(SchemaInstance::new(&[f], gen(f)?)))
        .collect::<Result<_>>()?;
    SchemaInstanceSet::build(schema, out)
}

/// Term-variant truth instances for each closed term in `terms`.
pub fn utb_term_instances(phi: &Formula, terms: &[Term]) -> Result<SchemaInstanceSet> {
    let out = terms
        .iter()
        .map(|t| {
            let inst = utb_term_instance(phi, t)?;
            Ok(SchemaInstance::new(&[phi], inst))
        })
        .collect::<Result<_>>()?;
    SchemaInstanceSet::build(SchemaId::UtbTerm, out)
}

/// Whether `f` is an admissible source for `schema`.
pub fn admits(schema: SchemaId, f: &Formula) -> bool {
    let fv = free_vars(f).len();
    let fresh = schema
        .fresh_symbols()
        .iter()
        .all(|(s, _)| !f.mentions_relation(s) && !f.mentions_function(s));
    fresh
        && match schema {
            SchemaId::Tb | SchemaId::Twotb => fv == 0,
            SchemaId::Usb | SchemaId::Def | SchemaId::Skolem | SchemaId::UtbTerm => fv == 1,
            SchemaId::Uskolem => fv == 2,
            SchemaId::Rsat => true,
        }
}

/// Replaces every atom `R(t..)` in `phi` by `defn` with `params` replaced
/// simultaneously and capture-avoidingly by `t..`.
pub fn translate_predicate(
    phi: &Formula,
    r: &str,
    params: &[String],
    defn: &Formula,
) -> Result<Formula> {
    let distinct: BTreeSet<&String> = params.iter().collect();
    if distinct.len() != params.len() {
        return Err(schema_err("distinguished variables must be distinct"));
    }
    translate(phi, r, params, defn)
}

fn instantiate(defn: &Formula, params: &[String], args: &[Term]) -> Formula {
    let mut avoid = all_vars(defn);
    avoid.extend(params.iter().cloned());
    for a in args {
        term_vars(a, &mut avoid);
    }
    let mut body = defn.clone();
    let mut temps = Vec::new();
    for p in params {
        let tmp = fresh_var(&avoid);
        avoid.insert(tmp.clone());
        body = substitute(&body, p, &Term::var(&tmp));
        temps.push(tmp);
    }
    for (tmp, a) in temps.iter().zip(args) {
        body = substitute(&body, tmp, a);
    }
    body
}

fn translate(phi: &Formula, r: &str, params: &[String], defn: &Formula) -> Result<Formula> {
    Ok(match phi {
        Formula::Rel(name, args) if name == r => {
            if args.len() != params.len() {
                return Err(Error::Arity {
                    name: r.to_string(),
                    expected: params.len(),
                    found: args.len(),
                });
            }
            instantiate(defn, params, args)
        }
        Formula::Eq(..) | Formula::Rel(..) => phi.clone(),
        Formula::Not(g) => Formula::not(translate(g, r, params, defn)?),
        Formula::And(a, b) => Formula::and(translate(a, r, params, defn)?, translate(b, r, params, defn)?),
        Formula::Or(a, b) => Formula::or(translate(a, r, params, defn)?, translate(b, r, params, defn)?),
        Formula::Exists(v, g) | Formula::Forall(v, g) => {
            // a free variable of defn other than the distinguished ones must
            // not be captured by this binder
            let params_set: BTreeSet<&String> = params.iter().collect();
            let captured = free_vars(defn)
                .iter()
                .any(|x| x == v && !params_set.contains(x))
                && g.mentions_relation(r);
            let (v, g) = if captured {
                let mut avoid = all_vars(g);
                avoid.extend(all_vars(defn));
                avoid.insert(v.clone());
                let fresh = fresh_var(&avoid);
                (fresh.clone(), substitute(g, v, &Term::var(fresh)))
            } else {
                (v.clone(), (**g).clone())
            };
            let body = translate(&g, r, params, defn)?;
            match phi {
                Formula::Exists(..) => Formula::exists(v, body),
                _ => Formula::forall(v, body),
            }
        }
    })
}

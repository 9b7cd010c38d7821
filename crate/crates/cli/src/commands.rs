use std::collections::BTreeMap;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context as _};
use num_bigint::BigUint;
use satdef_core::coding::{decode as decode_code, decode_formula, encode_term, Decoded};
use satdef_core::complexity::{dp, pdp, pdp_term};
use satdef_core::eval::{
    eval_finite, eval_nat_in, CompositionalChecker, Context, CtChecker, EvalBudget, NatExpansion, SatTable,
    Verdict,
};
use satdef_core::forcing::{
    audit_genericity, bit_bound, build_generic as run_generic, forces, set_signature, verify_trace,
    Condition, ForcingMode, Justification, StageTrace,
};
use satdef_core::model::{automorphisms, check_as, definable_elements, n_equiv};
use satdef_core::proof::{check_proof as run_proof, parse_premises, Proof};
use satdef_core::schema::{admits, instances, rsat_instances, utb_term_instances, SchemaId, TRUTH, TRUTH_LEFT, TRUTH_RIGHT};
use satdef_core::syntax::{formula_to_json, free_vars, parse as parse_formula, parse_term, Formula};
use satdef_core::{encode as encode_formula, rank};
use serde::Serialize;
use serde_json::{json, Value};

use crate::inputs;
use crate::{Output, SigArgs};

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Compact JSON with fields in declaration order.
fn render(x: &impl Serialize) -> String {
    serde_json::to_string(x).expect("reports serialize")
}

pub fn parse(text: &str, sig: &SigArgs) -> anyhow::Result<Output> {
    let f = parse_formula(text, &inputs::signature(sig)?)?;
    let ast: Value = serde_json::from_str(&formula_to_json(&f)).expect("AST JSON is valid");
    let fv: Vec<String> = free_vars(&f).into_iter().collect();
    let text = format!("{f}\nfree: {}\nsize: {}", fv.join(" "), f.size());
    Ok(Output::Json(
        json!({"formula": f.to_string(), "free_vars": fv, "size": f.size(), "ast": ast}).to_string(),
        text,
    ))
}

#[derive(Serialize)]
struct Classification {
    sigma: usize,
    pi: usize,
    dp: usize,
    pdp: usize,
}

pub fn classify(text: &str, sig: &SigArgs) -> anyhow::Result<Output> {
    let f = parse_formula(text, &inputs::signature(sig)?)?;
    let r = rank(&f);
    let (d, p) = (dp(&f), pdp(&f));
    Ok(Output::Json(
        render(&Classification {
            sigma: r.sigma,
            pi: r.pi,
            dp: d,
            pdp: p,
        }),
        format!("sigma {} pi {} dp {d} pdp {p}", r.sigma, r.pi),
    ))
}

pub fn encode(text: &str, term: bool, sig: &SigArgs) -> anyhow::Result<Output> {
    let sig = inputs::signature(sig)?;
    let (code, rendered, kind) = if term {
        let t = parse_term(text, &sig)?;
        (encode_term(&t), t.to_string(), "term")
    } else {
        let f = parse_formula(text, &sig)?;
        (encode_formula(&f), f.to_string(), "formula")
    };
    let code = code.to_string();
    Ok(Output::Json(
        json!({"code": code, "kind": kind, "sexp": rendered}).to_string(),
        code,
    ))
}

pub fn decode(code: &str) -> anyhow::Result<Output> {
    let c = inputs::code(code)?;
    let (kind, rendered, depth) = match decode_code(&c)? {
        Decoded::Formula(f) => ("formula", f.to_string(), pdp(&f)),
        Decoded::Term(t) => ("term", t.to_string(), pdp_term(&t)),
    };
    Ok(Output::Json(
        json!({"code": c.to_string(), "kind": kind, "sexp": rendered, "pdp": depth}).to_string(),
        rendered,
    ))
}

pub struct SchemaRequest<'a> {
    pub schema: &'a str,
    pub max_code: Option<u64>,
    pub sources: Option<&'a str>,
    pub terms: Option<&'a str>,
    pub p: Option<&'a str>,
    pub cutoff: usize,
    pub manifest: Option<&'a str>,
    pub sig: &'a SigArgs,
}

/// Largest `--max-code` scanned; codes are decoded one by one.
const MAX_CODE_SCAN: u64 = 1 << 24;

pub fn gen_schema(req: SchemaRequest<'_>) -> anyhow::Result<Output> {
    let schema = inputs::schema_id(req.schema)?;
    let sig = inputs::signature(req.sig)?;
    let sources: Vec<Formula> = match (req.max_code, req.sources) {
        (Some(n), _) => {
            if n > MAX_CODE_SCAN {
                bail!("--max-code is limited to {MAX_CODE_SCAN}");
            }
            (1..=n)
                .filter_map(|c| decode_formula(&BigUint::from(c)).ok())
                .filter(|f| sig.check_formula(f).is_ok() && admits(schema, f))
                .collect()
        }
        (None, Some(path)) => inputs::formulas(path, &sig)?,
        (None, None) => bail!("give --max-code or --sources"),
    };
    if let Some(f) = sources.iter().find(|f| !admits(schema, f)) {
        bail!("`{f}` is not an admissible {} source", req.schema);
    }
    let set = match schema {
        SchemaId::UtbTerm => {
            let path = req.terms.ok_or_else(|| anyhow!("utb-term needs --terms"))?;
            let terms = inputs::read(path)?
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with(';'))
                .map(|l| parse_term(l, &sig))
                .collect::<Result<Vec<_>, _>>()?;
            let mut all = Vec::new();
            for phi in &sources {
                all.extend(utb_term_instances(phi, &terms)?.instances);
            }
            json!({"schema": "utb-term", "instances": all})
        }
        SchemaId::Rsat => {
            let p = inputs::code(req.p.ok_or_else(|| anyhow!("rsat needs --p"))?)?;
            to_value(&rsat_instances(&sources, &p, req.cutoff)?)
        }
        _ => to_value(&instances(schema, &sources)?),
    };
    let mut lines = String::new();
    for inst in set["instances"].as_array().expect("instance list") {
        writeln!(lines, "{}", inst["instance"].as_str().expect("rendered instance")).unwrap();
    }
    if let Some(path) = req.manifest {
        let manifest = json!({
            "schema": set["schema"],
            "instances": set["instances"]
                .as_array()
                .unwrap()
                .iter()
                .map(|i| json!({"source_codes": i["source_codes"], "code": i["code"]}))
                .collect::<Vec<_>>(),
        });
        std::fs::write(path, format!("{manifest}\n")).with_context(|| format!("writing {path}"))?;
    }
    Ok(Output::Raw(lines))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::True => "true",
        Verdict::False => "false",
        Verdict::Unknown => "unknown",
    }
}

pub fn eval(
    formula: Option<&str>,
    model: Option<&str>,
    truth: Option<&str>,
    schema: Option<&str>,
    bound: u64,
    sig: &SigArgs,
) -> anyhow::Result<Output> {
    let model = model.map(inputs::model).transpose()?;
    let mut signature = match &model {
        Some(m) if sig.sig.is_none() => {
            let mut s = m.signature();
            for r in &sig.relations {
                let (name, arity) = r.split_once('/').ok_or_else(|| anyhow!("`{r}`: expected NAME/ARITY"))?;
                s = s.with_relation(name, arity.parse()?)?;
            }
            s
        }
        _ => inputs::signature(sig)?,
    };
    if let Some(s) = schema {
        signature = inputs::with_schema(signature, inputs::schema_id(s)?)?;
    }
    let texts: Vec<String> = match formula {
        Some(f) => vec![f.to_string()],
        None => inputs::read("-")?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with(';'))
            .map(String::from)
            .collect(),
    };
    let mut exp = NatExpansion::new();
    if let Some(path) = truth {
        if model.is_some() {
            bail!("--truth interprets symbols over the naturals, not in a model");
        }
        if !signature.is_declared(TRUTH) {
            signature = signature.with_relation(TRUTH, 1)?;
        }
        let set = inputs::oracle(path)?.true_codes();
        for name in [TRUTH, TRUTH_LEFT, TRUTH_RIGHT] {
            exp = exp.with_set(name, set.clone());
        }
    }
    let budget = EvalBudget::new(bound);
    let mut items = Vec::new();
    let mut text = String::new();
    for line in &texts {
        let f = parse_formula(line, &signature)?;
        if !free_vars(&f).is_empty() {
            bail!("`{f}` is not a sentence");
        }
        let value = match &model {
            Some(m) => verdict_name(Verdict::from_bool(eval_finite(&f, m, &BTreeMap::new())?)),
            None => verdict_name(eval_nat_in(&f, &exp, &Default::default(), &budget)?),
        };
        writeln!(text, "{value}\t{f}").unwrap();
        items.push(json!({"formula": f.to_string(), "value": value}).to_string());
    }
    Ok(Output::Stream(items, text))
}

pub fn check_model(spec: &str) -> anyhow::Result<Output> {
    let m = inputs::model(spec)?;
    let r = check_as(&m)?;
    let mut text = format!("AS1 {}", if r.as1.holds { "holds" } else { "fails" });
    if let Some(w) = &r.as1.witness {
        write!(text, " (empty set {w})").unwrap();
    }
    for (name, v) in [("AS2", &r.as2), ("EXT", &r.ext)] {
        write!(text, "\n{name} {}", if v.holds { "holds" } else { "fails" }).unwrap();
        if let Some((x, y)) = &v.counterexample {
            write!(text, " at ({x}, {y})").unwrap();
        }
    }
    Ok(Output::Json(render(&json!({"size": m.len(), "report": r})), text))
}

pub fn definables(spec: &str, max_size: usize, level: Option<usize>) -> anyhow::Result<Output> {
    let m = inputs::model(spec)?;
    let r = definable_elements(&m, max_size, level)?;
    let mut text = String::new();
    for d in &r.definitions {
        writeln!(text, "{}\tsize {}\t{}", d.element, d.size, d.formula).unwrap();
    }
    for u in &r.undefinable {
        writeln!(text, "{u}\tundefinable").unwrap();
    }
    Ok(Output::Json(render(&r), text))
}

pub fn autos(spec: &str) -> anyhow::Result<Output> {
    let m = inputs::model(spec)?;
    let r = automorphisms(&m)?;
    let mut text = String::new();
    for a in &r.automorphisms {
        writeln!(text, "{}", a.join(" ")).unwrap();
    }
    write!(text, "fixpoint-free: {}", r.fixpoint_free).unwrap();
    Ok(Output::Json(render(&r), text))
}

pub fn nequiv(left: &str, right: &str, level: usize, max_size: usize) -> anyhow::Result<Output> {
    let r = n_equiv(&inputs::model(left)?, &inputs::model(right)?, level, max_size)?;
    let text = match &r.distinguishing {
        None => format!("equivalent up to level {level}, size {max_size}"),
        Some(d) => format!(
            "distinguished by {} (true in the {} model)",
            d.sentence,
            if d.holds_in_left { "left" } else { "right" }
        ),
    };
    Ok(Output::Json(render(&r), text))
}

fn condition(text: &str) -> anyhow::Result<Condition> {
    if text == "-" {
        return Ok(Condition::empty());
    }
    Ok(Condition::parse(text)?)
}

pub fn force(cond: &str, text: &str, budget: Option<u64>) -> anyhow::Result<Output> {
    let s = condition(cond)?;
    let f = parse_formula(text, &set_signature())?;
    let mode = match budget {
        Some(b) => ForcingMode::Budget(b),
        None => ForcingMode::Exact,
    };
    let verdict = forces(&s, &f, mode)?;
    let mode_name = if budget.is_some() { "budget" } else { "exact" };
    let verdict = to_value(&verdict);
    Ok(Output::Json(
        json!({
            "condition": s,
            "formula": f.to_string(),
            "mode": mode_name,
            "bit_bound": bit_bound(&f),
            "verdict": verdict,
        }).to_string(),
        format!("{} {f}: {}", if s.is_empty() { "-".to_string() } else { s.to_string() }, verdict.as_str().unwrap()),
    ))
}

fn set_formulas(path: &str) -> anyhow::Result<Vec<Formula>> {
    inputs::formulas(path, &set_signature())
}

/// The sentences `xi_k` and a truth function that looks them up in the oracle.
fn sentences(truth: &str, xis: Option<&str>) -> anyhow::Result<(Vec<Formula>, satdef_core::eval::TruthOracle)> {
    let oracle = inputs::oracle(truth)?;
    let xis = match xis {
        Some(path) => set_formulas(path)?,
        None => oracle
            .iter()
            .map(|(c, _)| decode_formula(c))
            .collect::<Result<_, _>>()
            .context("decoding oracle codes")?,
    };
    Ok((xis, oracle))
}

fn lookup(oracle: &satdef_core::eval::TruthOracle, f: &Formula) -> satdef_core::Result<bool> {
    oracle
        .get(&encode_formula(f))
        .ok_or_else(|| satdef_core::Error::Forcing(format!("the oracle has no value for `{f}`")))
}

fn trace_text(trace: &StageTrace) -> String {
    let mut text = String::new();
    for st in &trace.stages {
        let why = match &st.justification {
            Justification::Forced { formula, .. } => format!("forces {formula}"),
            Justification::NoExtension { formula } => format!("no extension forces {formula}"),
            Justification::TruthBit { sentence, bit } => format!("bit {} for {sentence}", u8::from(*bit)),
        };
        writeln!(text, "{:>3} k={:<3} {} -> {}  {why}", st.index, st.k, st.before, st.after).unwrap();
    }
    text
}

pub fn build_generic(stages: usize, phis: &str, truth: &str, xis: Option<&str>) -> anyhow::Result<Output> {
    let phis = set_formulas(phis)?;
    let (xis, oracle) = sentences(truth, xis)?;
    let trace = run_generic(stages, &phis, &xis, &|f| lookup(&oracle, f))?;
    Ok(Output::Json(render(&trace), trace_text(&trace)))
}

pub fn audit(trace: &str, phis: &str, xis: Option<&str>) -> anyhow::Result<Output> {
    let trace = StageTrace::from_json(&inputs::read(trace)?)?;
    let phis = set_formulas(phis)?;
    if let Some(path) = xis {
        verify_trace(&trace, &phis, &set_formulas(path)?, None).context("trace verification")?;
    }
    let a = audit_genericity(&trace, &phis)?;
    let mut text = String::new();
    for e in &a.entries {
        let settled = to_value(&e.settled);
        writeln!(text, "{:>3} {:<10} {}", e.k, settled.as_str().unwrap_or("?"), e.formula).unwrap();
    }
    write!(text, "all settled: {}", a.all_settled).unwrap();
    Ok(Output::Json(render(&a), text))
}

pub fn check_ct(truth: &str, depth: usize, numerals: u64) -> anyhow::Result<Output> {
    let oracle = inputs::oracle(truth)?;
    let r = CtChecker::new(depth, numerals)?.check(&oracle);
    let mut text = format!(
        "{} sentences, {} violations, {} gaps",
        r.sentences,
        r.violations.len(),
        r.gaps.len()
    );
    for v in &r.violations {
        write!(text, "\n{} {}: expected {}, got {}", v.clause, v.sentence, v.expected, v.got).unwrap();
    }
    Ok(Output::Json(render(&r), text))
}

pub fn check_compositional(
    formulas: &str,
    table: Option<&str>,
    own_table: bool,
    model: Option<&str>,
    bound: Option<usize>,
) -> anyhow::Result<Output> {
    let model = model.map(inputs::model).transpose()?;
    let (ctx, sig) = match (&model, bound) {
        (Some(m), None) => (Context::Finite(m), m.signature()),
        (None, Some(b)) => (Context::NatBounded { bound: b }, satdef_core::Signature::arithmetic()),
        _ => bail!("give exactly one of --model and --bound"),
    };
    let fs = inputs::formulas(formulas, &sig)?;
    let checker = CompositionalChecker::new(&fs, ctx)?;
    let report = if own_table {
        let m = model.as_ref().ok_or_else(|| anyhow!("--own-table needs --model"))?;
        let t = SatTable::of_model(m, &fs)?;
        checker.check(|c, a| t.get(c, a))
    } else {
        let path = table.expect("clap requires --table without --own-table");
        let t = inputs::table(path, |v| match (&model, v) {
            (Some(m), Value::String(name)) => m.elem_by_name(name),
            (None, Value::Number(n)) => n.as_u64().and_then(|n| usize::try_from(n).ok()),
            _ => None,
        })?;
        checker.check(|c, a| t.get(&(c.clone(), a.clone())).copied())
    };
    let mut text = format!(
        "{} clauses checked, {} violations, {} gaps",
        report.checked,
        report.violations.len(),
        report.gaps.len()
    );
    for v in &report.violations {
        let asn: Vec<String> = v.assignment.iter().map(|(k, x)| format!("{k}={x}")).collect();
        write!(text, "\n{} {} [{}]: expected {}, got {}", v.clause, v.formula, asn.join(" "), v.expected, v.got).unwrap();
    }
    Ok(Output::Json(render(&report), text))
}

pub fn check_proof(proof: &str, premises: Option<&str>) -> anyhow::Result<Output> {
    let (p, sig) = Proof::from_json(&inputs::read(proof)?).with_context(|| format!("proof {proof}"))?;
    let premises = match premises {
        Some(path) => parse_premises(&inputs::read(path)?, &sig).with_context(|| format!("premises {path}"))?,
        None => vec![],
    };
    let v = run_proof(&p, &premises);
    let text = match (&v.error, &v.conclusion) {
        (None, Some(c)) => format!("valid: {c}"),
        (Some(e), _) => format!("invalid at line {}: {}", e.line, e.reason),
        (None, None) => "invalid".into(),
    };
    Ok(Output::Json(render(&v), text))
}

//! Reading files, signatures and model specifications.

use std::collections::BTreeMap;
use std::io::Read;

use anyhow::{anyhow, bail, Context as _};
use num_bigint::BigUint;
use satdef_core::eval::TruthOracle;
use satdef_core::model::{build_hf, disjoint_union};
use satdef_core::schema::{SchemaId, SKOLEM};
use satdef_core::syntax::{parse_lines, Formula, Signature};
use satdef_core::FiniteModel;

use crate::SigArgs;

/// Contents of `path`, or of stdin for `-`.
pub fn read(path: &str) -> anyhow::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading stdin")?;
        return Ok(s);
    }
    std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
}

pub fn signature(args: &SigArgs) -> anyhow::Result<Signature> {
    let mut sig = match &args.sig {
        Some(path) => serde_json::from_str::<Signature>(&read(path)?)
            .with_context(|| format!("signature {path}"))?
            .validated()?,
        None => Signature::arithmetic(),
    };
    for r in &args.relations {
        let (name, arity) = r
            .split_once('/')
            .ok_or_else(|| anyhow!("`{r}`: expected NAME/ARITY"))?;
        let arity: usize = arity.parse().with_context(|| format!("arity in `{r}`"))?;
        sig = sig.with_relation(name, arity)?;
    }
    Ok(sig)
}

pub fn schema_id(name: &str) -> anyhow::Result<SchemaId> {
    SchemaId::parse(name).ok_or_else(|| anyhow!("unknown schema `{name}`"))
}

/// `sig` plus the fresh symbols of `schema`.
pub fn with_schema(mut sig: Signature, schema: SchemaId) -> anyhow::Result<Signature> {
    for &(name, arity) in schema.fresh_symbols() {
        if sig.is_declared(name) {
            continue;
        }
        sig = if name == SKOLEM {
            sig.with_function(name, arity)?
        } else {
            sig.with_relation(name, arity)?
        };
    }
    Ok(sig)
}

pub fn formulas(path: &str, sig: &Signature) -> anyhow::Result<Vec<Formula>> {
    Ok(parse_lines(&read(path)?, sig).with_context(|| format!("formulas in {path}"))?)
}

pub fn code(text: &str) -> anyhow::Result<BigUint> {
    satdef_core::serde_code::parse_code(text.trim()).map_err(|e| anyhow!(e))
}

pub fn oracle(path: &str) -> anyhow::Result<TruthOracle> {
    Ok(TruthOracle::from_json(&read(path)?).with_context(|| format!("truth oracle {path}"))?)
}

/// A model file, `hf:R` for the hereditarily finite sets of rank `R`, or
/// `A+B` for the disjoint union of two such specifications.
pub fn model(spec: &str) -> anyhow::Result<FiniteModel> {
    if let Some((a, b)) = spec.split_once('+') {
        return Ok(disjoint_union(&model(a)?, &model(b)?)?);
    }
    if let Some(r) = spec.strip_prefix("hf:") {
        let r: u32 = r.parse().with_context(|| format!("rank in `{spec}`"))?;
        return Ok(build_hf(r)?);
    }
    Ok(FiniteModel::from_json(&read(spec)?).with_context(|| format!("model {spec}"))?)
}

/// Satisfaction table JSON: `[[code, {var: value}, bool], ...]` where a value
/// is an element name (finite models) or a number (bounded naturals).
pub fn table(
    path: &str,
    element: impl Fn(&serde_json::Value) -> Option<usize>,
) -> anyhow::Result<BTreeMap<(BigUint, BTreeMap<String, usize>), bool>> {
    let rows: Vec<(String, BTreeMap<String, serde_json::Value>, bool)> =
        serde_json::from_str(&read(path)?).with_context(|| format!("table {path}"))?;
    let mut out = BTreeMap::new();
    for (c, asn, v) in rows {
        let asn = asn
            .into_iter()
            .map(|(k, x)| match element(&x) {
                Some(e) => Ok((k, e)),
                None => Err(anyhow!("`{x}` is not a value of the context")),
            })
            .collect::<anyhow::Result<_>>()?;
        if out.insert((code(&c)?, asn), v).is_some() {
            bail!("duplicate table entry for code {c}");
        }
    }
    Ok(out)
}

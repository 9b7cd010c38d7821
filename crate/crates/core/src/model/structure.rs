use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::syntax::Signature;

/// Element of a finite universe, as an index into [`FiniteModel::universe`].
pub type Elem = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationTable {
    pub arity: usize,
    pub tuples: BTreeSet<Vec<Elem>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub table: BTreeMap<Vec<Elem>, Elem>,
}

/// A finite structure with total tables. Elements are `0..len` and carry
/// display names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteModel {
    names: Vec<String>,
    relations: BTreeMap<String, RelationTable>,
    functions: BTreeMap<String, FunctionTable>,
    constants: BTreeMap<String, Elem>,
}

fn tuples(n: usize, arity: usize) -> impl Iterator<Item = Vec<Elem>> {
    let total = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut t = vec![0; arity];
        for slot in t.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        t
    })
}

/// Every tuple of length `arity` over `0..n`, in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> Vec<Vec<Elem>> {
    if arity == 0 {
        return vec![vec![]];
    }
    if n == 0 {
        return vec![];
    }
    tuples(n, arity).collect()
}

impl FiniteModel {
    /// A model with the given element names and no symbols.
    pub fn new(names: Vec<String>) -> Result<FiniteModel> {
        if names.is_empty() {
            return Err(Error::Model("universe must be nonempty".into()));
        }
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::Model("element names must be distinct".into()));
        }
        Ok(FiniteModel {
            names,
            relations: BTreeMap::new(),
            functions: BTreeMap::new(),
            constants: BTreeMap::new(),
        })
    }

    /// Elements named `0, 1, ..., n-1`.
    pub fn with_size(n: usize) -> Result<FiniteModel> {
        FiniteModel::new((0..n).map(|i| i.to_string()).collect())
    }

    fn check_elem(&self, e: Elem) -> Result<()> {
        if e >= self.len() {
            return Err(Error::Model(format!("element {e} outside the universe")));
        }
        Ok(())
    }

    fn check_fresh(&self, name: &str) -> Result<()> {
        if self.relations.contains_key(name)
            || self.functions.contains_key(name)
            || self.constants.contains_key(name)
        {
            return Err(Error::Model(format!("symbol `{name}` already interpreted")));
        }
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: &str,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<Elem>>,
    ) -> Result<()> {
        self.check_fresh(name)?;
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::Model(format!(
                    "tuple of length {} in relation `{name}` of arity {arity}",
                    t.len()
                )));
            }
            t.iter().try_for_each(|&e| self.check_elem(e))?;
            set.insert(t);
        }
        self.relations.insert(
            name.to_string(),
            RelationTable {
                arity,
                tuples: set,
            },
        );
        Ok(())
    }

    pub fn add_function(
        &mut self,
        name: &str,
        arity: usize,
        table: BTreeMap<Vec<Elem>, Elem>,
    ) -> Result<()> {
        self.check_fresh(name)?;
        if arity == 0 {
            return Err(Error::Model(format!("function `{name}` needs arity >= 1")));
        }
        for (args, &v) in &table {
            if args.len() != arity {
                return Err(Error::Model(format!("bad argument count in `{name}`")));
            }
            args.iter().try_for_each(|&e| self.check_elem(e))?;
            self.check_elem(v)?;
        }
        if table.len() != all_tuples(self.len(), arity).len() {
            return Err(Error::Model(format!("function `{name}` is not total")));
        }
        self.functions.insert(name.to_string(), FunctionTable { arity, table });
        Ok(())
    }

    pub fn add_constant(&mut self, name: &str, value: Elem) -> Result<()> {
        self.check_fresh(name)?;
        self.check_elem(value)?;
        self.constants.insert(name.to_string(), value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.len()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn elem_by_name(&self, name: &str) -> Option<Elem> {
        self.names.iter().position(|n| n == name)
    }

    pub fn relation(&self, name: &str) -> Option<&RelationTable> {
        self.relations.get(name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionTable> {
        self.functions.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<Elem> {
        self.constants.get(name).copied()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &RelationTable)> {
        self.relations.iter().map(|(n, r)| (n.as_str(), r))
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, &FunctionTable)> {
        self.functions.iter().map(|(n, f)| (n.as_str(), f))
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, Elem)> {
        self.constants.iter().map(|(n, &c)| (n.as_str(), c))
    }

    pub fn holds(&self, rel: &str, args: &[Elem]) -> Option<bool> {
        self.relations.get(rel).map(|r| r.tuples.contains(args))
    }

    pub fn apply(&self, fun: &str, args: &[Elem]) -> Option<Elem> {
        self.functions.get(fun).and_then(|f| f.table.get(args).copied())
    }

    pub fn is_relational(&self) -> bool {
        self.functions.is_empty() && self.constants.is_empty()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::empty();
        for name in self.constants.keys() {
            sig = sig.with_constant(name).expect("model symbols are distinct");
        }
        for (name, f) in &self.functions {
            sig = sig.with_function(name, f.arity).expect("model symbols are distinct");
        }
        for (name, r) in &self.relations {
            sig = sig.with_relation(name, r.arity).expect("model symbols are distinct");
        }
        sig
    }

    /// The model with elements renamed by `perm` (element `e` becomes `perm[e]`).
    pub fn permuted(&self, perm: &[Elem]) -> FiniteModel {
        let mut names = vec![String::new(); self.len()];
        for e in self.elements() {
            names[perm[e]] = self.names[e].clone();
        }
        let map = |t: &Vec<Elem>| t.iter().map(|&e| perm[e]).collect::<Vec<_>>();
        FiniteModel {
            names,
            relations: self
                .relations
                .iter()
                .map(|(n, r)| {
                    (
                        n.clone(),
                        RelationTable {
                            arity: r.arity,
                            tuples: r.tuples.iter().map(map).collect(),
                        },
                    )
                })
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|(n, f)| {
                    (
                        n.clone(),
                        FunctionTable {
                            arity: f.arity,
                            table: f.table.iter().map(|(a, &v)| (map(a), perm[v])).collect(),
                        },
                    )
                })
                .collect(),
            constants: self.constants.iter().map(|(n, &c)| (n.clone(), perm[c])).collect(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JRelation {
    arity: usize,
    #[serde(default)]
    tuples: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JFunction {
    arity: usize,
    table: Vec<(Vec<String>, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JModel {
    universe: Vec<String>,
    #[serde(default)]
    relations: BTreeMap<String, JRelation>,
    #[serde(default)]
    functions: BTreeMap<String, JFunction>,
    #[serde(default)]
    constants: BTreeMap<String, String>,
}

impl Serialize for FiniteModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let names = |t: &Vec<Elem>| t.iter().map(|&e| self.names[e].clone()).collect();
        JModel {
            universe: self.names.clone(),
            relations: self
                .relations
                .iter()
                .map(|(n, r)| {
                    (
                        n.clone(),
                        JRelation {
                            arity: r.arity,
                            tuples: r.tuples.iter().map(names).collect(),
                        },
                    )
                })
                .collect(),
            functions: self
                .functions
                .iter()
                .map(|(n, f)| {
                    (
                        n.clone(),
                        JFunction {
                            arity: f.arity,
                            table: f
                                .table
                                .iter()
                                .map(|(a, &v)| (names(a), self.names[v].clone()))
                                .collect(),
                        },
                    )
                })
                .collect(),
            constants: self
                .constants
                .iter()
                .map(|(n, &c)| (n.clone(), self.names[c].clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl FiniteModel {
    /// Reads the JSON format
    /// `{"universe": [..], "relations": {"R": {"arity": k, "tuples": [[..]]}},
    ///   "functions": {"f": {"arity": k, "table": [[[args..], value]]}},
    ///   "constants": {"c": elem}}`, elements given by name.
    pub fn from_json(text: &str) -> Result<FiniteModel> {
        let j: JModel = serde_json::from_str(text).map_err(|e| Error::Model(e.to_string()))?;
        let mut m = FiniteModel::new(j.universe)?;
        let lookup = |m: &FiniteModel, name: &str| {
            m.elem_by_name(name)
                .ok_or_else(|| Error::Model(format!("unknown element `{name}`")))
        };
        let lookup_all = |m: &FiniteModel, names: &[String]| {
            names.iter().map(|n| lookup(m, n)).collect::<Result<Vec<_>>>()
        };
        for (name, r) in &j.relations {
            let ts = r
                .tuples
                .iter()
                .map(|t| lookup_all(&m, t))
                .collect::<Result<Vec<_>>>()?;
            m.add_relation(name, r.arity, ts)?;
        }
        for (name, f) in &j.functions {
            let mut table = BTreeMap::new();
            for (args, v) in &f.table {
                if table.insert(lookup_all(&m, args)?, lookup(&m, v)?).is_some() {
                    return Err(Error::Model(format!("function `{name}` is not functional")));
                }
            }
            m.add_function(name, f.arity, table)?;
        }
        for (name, v) in &j.constants {
            let e = lookup(&m, v)?;
            m.add_constant(name, e)?;
        }
        m.signature().validated().map_err(|e| Error::Model(e.to_string()))?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip() {
        let text = r#"{"universe":["a","b"],"relations":{"in":{"arity":2,"tuples":[["a","b"]]}},"functions":{"s":{"arity":1,"table":[[["a"],"b"],[["b"],"a"]]}},"constants":{"c":"a"}}"#;
        let m = FiniteModel::from_json(text).unwrap();
        assert_eq!(m.holds("in", &[0, 1]), Some(true));
        assert_eq!(m.apply("s", &[1]), Some(0));
        assert_eq!(m.to_json(), text);
    }

    #[test]
    fn partial_function_rejected() {
        let text = r#"{"universe":["a","b"],"functions":{"s":{"arity":1,"table":[[["a"],"b"]]}}}"#;
        assert!(FiniteModel::from_json(text).is_err());
        let dup = r#"{"universe":["a","a"]}"#;
        assert!(FiniteModel::from_json(dup).is_err());
    }
}

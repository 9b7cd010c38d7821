//! Bounded search for definitions and distinguishing sentences.
//!
//! Formulas over the variables `x, y, z` are enumerated by formula-node size
//! with term-flattened atoms (`R(v..)`, `v = w`, `v = f(w..)`, `v = c`).
//! Two formulas with the same truth tables in every model under study, the
//! same free variables and (when ranks matter) comparable ranks are
//! interchangeable inside any larger formula, so each size layer keeps one
//! representative per class: the least rendering among the smallest.

use std::collections::HashMap;

use serde::Serialize;

use super::{all_tuples, Elem, FiniteModel};
use crate::coding::{encode, GodelCode};
use crate::complexity::RankPair;
use crate::error::{Error, Result};
use crate::serde_code::code_string;
use crate::syntax::{Formula, Term};

pub const SEARCH_VARS: [&str; 3] = ["x", "y", "z"];
pub const MAX_SEARCH_SIZE: usize = 7;
pub const MAX_SEARCH_UNIVERSE: usize = 8;

type Table = Vec<u64>;
type Key = (Vec<Table>, u8);

#[derive(Clone, Copy, Debug)]
enum Node {
    Atom(usize),
    Not(usize, usize),
    And((usize, usize), (usize, usize)),
    Or((usize, usize), (usize, usize)),
    Exists(usize, (usize, usize)),
    Forall(usize, (usize, usize)),
}

#[derive(Clone, Debug)]
struct Item {
    tables: Vec<Table>,
    fv: u8,
    rank: RankPair,
    text: String,
    node: Node,
}

struct Space<'a> {
    models: Vec<&'a FiniteModel>,
    atoms: Vec<Formula>,
    track_rank: bool,
    layers: Vec<Vec<Item>>,
    seen: HashMap<Key, Vec<RankPair>>,
}

fn words(n: usize) -> usize {
    (n * n * n).div_ceil(64)
}

fn bit(t: &Table, i: usize) -> bool {
    t[i / 64] >> (i % 64) & 1 == 1
}

fn set(t: &mut Table, i: usize) {
    t[i / 64] |= 1 << (i % 64);
}

fn var_index(v: &str) -> usize {
    SEARCH_VARS.iter().position(|&w| w == v).expect("search variable")
}

fn flattened_atoms(m: &FiniteModel) -> Vec<Formula> {
    let var = |i: usize| Term::var(SEARCH_VARS[i]);
    let mut atoms = Vec::new();
    for (r, table) in m.relations() {
        for t in all_tuples(3, table.arity) {
            atoms.push(Formula::rel(r, t.into_iter().map(var).collect()));
        }
    }
    for v in 0..3 {
        for w in 0..3 {
            atoms.push(Formula::eq(var(v), var(w)));
        }
        for (c, _) in m.constants() {
            atoms.push(Formula::eq(var(v), Term::cst(c)));
        }
        for (f, table) in m.functions() {
            for t in all_tuples(3, table.arity) {
                atoms.push(Formula::eq(var(v), Term::app(f, t.into_iter().map(var).collect())));
            }
        }
    }
    atoms
}

fn atom_holds(m: &FiniteModel, f: &Formula, a: &[Elem; 3]) -> bool {
    let term = |t: &Term| match t {
        Term::Var(v) => a[var_index(v)],
        Term::Const(c) => m.constant(c).expect("model constant"),
        Term::App(g, args) => {
            let args: Vec<Elem> = args
                .iter()
                .map(|s| match s {
                    Term::Var(v) => a[var_index(v)],
                    _ => unreachable!("flattened atom"),
                })
                .collect();
            m.apply(g, &args).expect("total table")
        }
    };
    match f {
        Formula::Eq(s, t) => term(s) == term(t),
        Formula::Rel(r, args) => {
            let args: Vec<Elem> = args.iter().map(term).collect();
            m.holds(r, &args).expect("model relation")
        }
        _ => unreachable!("atoms only"),
    }
}

fn atom_table(m: &FiniteModel, f: &Formula) -> Table {
    let n = m.len();
    let mut t = vec![0; words(n)];
    for i in 0..n * n * n {
        let a = [i / (n * n), i / n % n, i % n];
        if atom_holds(m, f, &a) {
            set(&mut t, i);
        }
    }
    t
}

fn negate(t: &Table, n: usize) -> Table {
    let total = n * n * n;
    t.iter()
        .enumerate()
        .map(|(w, &x)| {
            let live = (total - w * 64).min(64);
            let mask = if live == 64 { u64::MAX } else { (1u64 << live) - 1 };
            !x & mask
        })
        .collect()
}

fn quantify(t: &Table, n: usize, v: usize, existential: bool) -> Table {
    let stride = [n * n, n, 1][v];
    let mut out = vec![0; t.len()];
    for i in 0..n * n * n {
        let base = i - (i / stride % n) * stride;
        let mut vals = (0..n).map(|d| bit(t, base + d * stride));
        let v = if existential { vals.any(|b| b) } else { vals.all(|b| b) };
        if v {
            set(&mut out, i);
        }
    }
    out
}

fn fv_mask(f: &Formula) -> u8 {
    crate::syntax::free_vars(f)
        .iter()
        .fold(0, |acc, v| acc | 1 << var_index(v))
}

fn dominates(a: RankPair, b: RankPair) -> bool {
    a.sigma <= b.sigma && a.pi <= b.pi
}

impl<'a> Space<'a> {
    fn new(models: Vec<&'a FiniteModel>, track_rank: bool) -> Result<Space<'a>> {
        let first = models[0];
        for m in &models {
            if m.len() > MAX_SEARCH_UNIVERSE {
                return Err(Error::SizeGuard(format!(
                    "universe of {} elements exceeds {MAX_SEARCH_UNIVERSE}",
                    m.len()
                )));
            }
            if m.signature() != first.signature() {
                return Err(Error::Model("models have different signatures".into()));
            }
        }
        Ok(Space {
            atoms: flattened_atoms(first),
            models,
            track_rank,
            layers: vec![Vec::new()],
            seen: HashMap::new(),
        })
    }

    fn rank_key(&self, r: RankPair) -> RankPair {
        if self.track_rank {
            r
        } else {
            RankPair { sigma: 0, pi: 0 }
        }
    }

    fn item(&self, (s, i): (usize, usize)) -> &Item {
        &self.layers[s][i]
    }

    /// Builds layer `size` from the smaller ones.
    fn grow(&mut self) {
        let size = self.layers.len();
        let mut best: HashMap<Key, Vec<Item>> = HashMap::new();
        let mut offer = |space: &Space, tables: Vec<Table>, fv: u8, rank: RankPair, node: Node, text: &dyn Fn() -> String| {
            let rank = space.rank_key(rank);
            let key = (tables, fv);
            if let Some(old) = space.seen.get(&key) {
                if old.iter().any(|&r| dominates(r, rank)) {
                    return;
                }
            }
            let slot = best.entry(key.clone()).or_default();
            if let Some(pos) = slot.iter().position(|it| it.rank == rank) {
                let text = text();
                if text < slot[pos].text {
                    slot[pos].text = text;
                    slot[pos].node = node;
                }
                return;
            }
            slot.push(Item {
                tables: key.0,
                fv,
                rank,
                text: text(),
                node,
            });
        };

        if size == 1 {
            for (i, a) in self.atoms.iter().enumerate() {
                let tables = self.models.iter().map(|m| atom_table(m, a)).collect();
                offer(self, tables, fv_mask(a), RankPair { sigma: 1, pi: 1 }, Node::Atom(i), &|| a.to_string());
            }
        } else {
            for (i, it) in self.layers[size - 1].iter().enumerate() {
                let tables = it.tables.iter().zip(&self.models).map(|(t, m)| negate(t, m.len())).collect();
                let rank = RankPair { sigma: it.rank.pi, pi: it.rank.sigma };
                offer(self, tables, it.fv, rank, Node::Not(size - 1, i), &|| format!("(not {})", it.text));
                for v in 0..3 {
                    for existential in [true, false] {
                        let tables = it
                            .tables
                            .iter()
                            .zip(&self.models)
                            .map(|(t, m)| quantify(t, m.len(), v, existential))
                            .collect();
                        let (rank, node, word) = if existential {
                            (RankPair { sigma: it.rank.sigma, pi: it.rank.sigma + 1 }, Node::Exists(v, (size - 1, i)), "exists")
                        } else {
                            (RankPair { sigma: it.rank.pi + 1, pi: it.rank.pi }, Node::Forall(v, (size - 1, i)), "forall")
                        };
                        offer(self, tables, it.fv & !(1 << v), rank, node, &|| {
                            format!("({word} {} {})", SEARCH_VARS[v], it.text)
                        });
                    }
                }
            }
            for sa in 1..size - 1 {
                let sb = size - 1 - sa;
                for (ia, a) in self.layers[sa].iter().enumerate() {
                    for (ib, b) in self.layers[sb].iter().enumerate() {
                        let rank = RankPair {
                            sigma: a.rank.sigma.max(b.rank.sigma),
                            pi: a.rank.pi.max(b.rank.pi),
                        };
                        for conj in [true, false] {
                            let tables = a
                                .tables
                                .iter()
                                .zip(&b.tables)
                                .map(|(x, y)| {
                                    x.iter()
                                        .zip(y)
                                        .map(|(p, q)| if conj { p & q } else { p | q })
                                        .collect()
                                })
                                .collect();
                            let (node, word) = if conj {
                                (Node::And((sa, ia), (sb, ib)), "and")
                            } else {
                                (Node::Or((sa, ia), (sb, ib)), "or")
                            };
                            offer(self, tables, a.fv | b.fv, rank, node, &|| {
                                format!("({word} {} {})", a.text, b.text)
                            });
                        }
                    }
                }
            }
        }

        let mut layer: Vec<Item> = best
            .into_values()
            .flat_map(|slot| {
                let ranks: Vec<RankPair> = slot.iter().map(|it| it.rank).collect();
                slot.into_iter().filter(move |it| {
                    !ranks.iter().any(|&r| r != it.rank && dominates(r, it.rank))
                })
            })
            .collect();
        layer.sort_by(|a, b| a.text.cmp(&b.text));
        for it in &layer {
            self.seen
                .entry((it.tables.clone(), it.fv))
                .or_default()
                .push(it.rank);
        }
        self.layers.push(layer);
    }

    fn formula(&self, at: (usize, usize)) -> Formula {
        match self.item(at).node {
            Node::Atom(i) => self.atoms[i].clone(),
            Node::Not(s, i) => Formula::not(self.formula((s, i))),
            Node::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            Node::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            Node::Exists(v, g) => Formula::exists(SEARCH_VARS[v], self.formula(g)),
            Node::Forall(v, g) => Formula::forall(SEARCH_VARS[v], self.formula(g)),
        }
    }
}

fn search(models: Vec<&FiniteModel>, max_size: usize, track_rank: bool) -> Result<Space<'_>> {
    if max_size > MAX_SEARCH_SIZE {
        return Err(Error::SizeGuard(format!(
            "size bound {max_size} exceeds {MAX_SEARCH_SIZE}"
        )));
    }
    let mut space = Space::new(models, track_rank)?;
    for _ in 0..max_size {
        space.grow();
    }
    Ok(space)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Definition {
    pub element: String,
    pub size: usize,
    pub formula: String,
    #[serde(serialize_with = "code_string")]
    pub code: GodelCode,
    pub sigma: usize,
    pub pi: usize,
    #[serde(skip)]
    pub elem: Elem,
    #[serde(skip)]
    pub ast: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefinabilityReport {
    pub max_size: usize,
    /// Rank bound on definitions, if any.
    pub level: Option<usize>,
    /// Least definition of each definable element, in element order.
    pub definitions: Vec<Definition>,
    pub undefinable: Vec<String>,
}

impl DefinabilityReport {
    pub fn definition_of(&self, e: Elem) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.elem == e)
    }
}

/// For each element, the least formula in `x` alone (by formula-node size,
/// then rendering) that holds of that element only. With `level = Some(n)`
/// only formulas of existential rank at most `n` count.
pub fn definable_elements(
    m: &FiniteModel,
    max_size: usize,
    level: Option<usize>,
) -> Result<DefinabilityReport> {
    let space = search(vec![m], max_size, level.is_some())?;
    let n = m.len();
    let mut found: Vec<Option<Definition>> = vec![None; n];
    for (size, layer) in space.layers.iter().enumerate() {
        for (i, it) in layer.iter().enumerate() {
            if it.fv != 1 || level.is_some_and(|l| l == 0 || it.rank.sigma > l) {
                continue;
            }
            let holders: Vec<Elem> = (0..n).filter(|&e| bit(&it.tables[0], e * n * n)).collect();
            let [e] = holders[..] else { continue };
            let better = match &found[e] {
                None => true,
                Some(d) => d.size == size && it.text < d.formula,
            };
            if better {
                let ast = space.formula((size, i));
                let r = crate::complexity::rank(&ast);
                found[e] = Some(Definition {
                    element: m.name(e).to_string(),
                    size,
                    formula: it.text.clone(),
                    code: encode(&ast),
                    sigma: r.sigma,
                    pi: r.pi,
                    elem: e,
                    ast,
                });
            }
        }
    }
    Ok(DefinabilityReport {
        max_size,
        level,
        undefinable: (0..n)
            .filter(|&e| found[e].is_none())
            .map(|e| m.name(e).to_string())
            .collect(),
        definitions: found.into_iter().flatten().collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Distinction {
    pub sentence: String,
    #[serde(serialize_with = "code_string")]
    pub code: GodelCode,
    pub size: usize,
    pub sigma: usize,
    pub pi: usize,
    pub holds_in_left: bool,
    #[serde(skip)]
    pub ast: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NEquivReport {
    pub level: usize,
    pub max_size: usize,
    pub equivalent: bool,
    /// Semantically distinct sentence classes compared.
    pub classes_compared: usize,
    /// Least sentence of existential rank at most `level` telling the models apart.
    pub distinguishing: Option<Distinction>,
}

/// Whether `m` and `n` agree on every sentence of existential rank at most
/// `level` and formula-node size at most `max_size` over `x, y, z`.
pub fn n_equiv(m: &FiniteModel, n: &FiniteModel, level: usize, max_size: usize) -> Result<NEquivReport> {
    let space = search(vec![m, n], max_size, true)?;
    let mut compared = 0;
    let mut distinguishing = None;
    for (size, layer) in space.layers.iter().enumerate() {
        for (i, it) in layer.iter().enumerate() {
            if it.fv != 0 || level == 0 || it.rank.sigma > level {
                continue;
            }
            compared += 1;
            let (l, r) = (bit(&it.tables[0], 0), bit(&it.tables[1], 0));
            if l != r && distinguishing.is_none() {
                let ast = space.formula((size, i));
                distinguishing = Some(Distinction {
                    sentence: it.text.clone(),
                    code: encode(&ast),
                    size,
                    sigma: it.rank.sigma,
                    pi: it.rank.pi,
                    holds_in_left: l,
                    ast,
                });
            }
        }
    }
    Ok(NEquivReport {
        level,
        max_size,
        equivalent: distinguishing.is_none(),
        classes_compared: compared,
        distinguishing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval_finite;
    use crate::model::{build_hf, disjoint_union};
    use std::collections::BTreeMap;

    #[test]
    fn hf3_elements_are_definable() {
        let m = build_hf(3).unwrap();
        let r = definable_elements(&m, 7, None).unwrap();
        let sizes: Vec<usize> = r.definitions.iter().map(|d| d.size).collect();
        assert_eq!(sizes, [3, 5, 7, 5]);
        for d in &r.definitions {
            for e in m.elements() {
                let asn = BTreeMap::from([("x".to_string(), e)]);
                assert_eq!(eval_finite(&d.ast, &m, &asn).unwrap(), e == d.elem, "{}", d.formula);
            }
            assert_eq!(d.ast.formula_size(), d.size);
        }
    }

    #[test]
    fn symmetric_union_has_no_definable_elements() {
        let h = build_hf(2).unwrap();
        let u = disjoint_union(&h, &h).unwrap();
        let r = definable_elements(&u, 5, None).unwrap();
        assert!(r.definitions.is_empty());
        assert_eq!(r.undefinable.len(), 4);
    }

    #[test]
    fn chain_and_doubled_chain() {
        let h = build_hf(2).unwrap();
        let u = disjoint_union(&h, &h).unwrap();
        let r = n_equiv(&h, &u, 2, 5).unwrap();
        assert!(!r.equivalent);
        let d = r.distinguishing.unwrap();
        assert_eq!(eval_finite(&d.ast, &h, &BTreeMap::new()).unwrap(), d.holds_in_left);
        assert_eq!(eval_finite(&d.ast, &u, &BTreeMap::new()).unwrap(), !d.holds_in_left);
        assert!(n_equiv(&h, &h, 3, 4).unwrap().equivalent);
    }
}

use serde::Serialize;

use super::hf::MEMBERSHIP;
use super::FiniteModel;
use crate::error::{Error, Result};
use crate::syntax::{parse, Formula, Signature};

/// Empty set: `exists x forall y not (y in x)`.
pub const AS1: &str = "(exists x (forall y (not (in y x))))";
/// Adjunction: `forall x forall y exists z forall w (w in z <-> (w in x or w = y))`.
pub const AS2: &str =
    "(forall x (forall y (exists z (forall w (iff (in w z) (or (in w x) (= w y)))))))";
/// Extensionality.
pub const EXT: &str =
    "(forall x (forall y (implies (forall w (iff (in w x) (in w y))) (= x y))))";

pub fn as_sentences() -> [Formula; 3] {
    let sig = Signature::empty()
        .with_relation(MEMBERSHIP, 2)
        .expect("fresh signature");
    [AS1, AS2, EXT].map(|t| parse(t, &sig).expect("fixed sentences parse"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmptySetVerdict {
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairVerdict {
    pub holds: bool,
    /// First failing pair `(x, y)` in element order.
    pub counterexample: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AsReport {
    pub as1: EmptySetVerdict,
    pub as2: PairVerdict,
    pub ext: PairVerdict,
}

/// Checks the adjunctive-set axioms and extensionality by direct search.
pub fn check_as(m: &FiniteModel) -> Result<AsReport> {
    match m.relation(MEMBERSHIP) {
        Some(r) if r.arity == 2 => {}
        _ => return Err(Error::Model(format!("no binary `{MEMBERSHIP}` relation"))),
    }
    let elems: Vec<_> = m.elements().collect();
    let member = |a, b| m.holds(MEMBERSHIP, &[a, b]).unwrap_or(false);
    let name = |e| m.name(e).to_string();

    let empty = elems.iter().copied().find(|&x| elems.iter().all(|&y| !member(y, x)));
    let as1 = EmptySetVerdict {
        holds: empty.is_some(),
        witness: empty.map(name),
    };

    let adjoin_fails = |x, y| {
        !elems
            .iter()
            .any(|&z| elems.iter().all(|&w| member(w, z) == (member(w, x) || w == y)))
    };
    let bad_pair = |fails: &dyn Fn(usize, usize) -> bool| {
        elems
            .iter()
            .flat_map(|&x| elems.iter().map(move |&y| (x, y)))
            .find(|&(x, y)| fails(x, y))
    };
    let as2_bad = bad_pair(&adjoin_fails);
    let ext_bad = bad_pair(&|x, y| x != y && elems.iter().all(|&w| member(w, x) == member(w, y)));
    let verdict = |bad: Option<(usize, usize)>| PairVerdict {
        holds: bad.is_none(),
        counterexample: bad.map(|(x, y)| (name(x), name(y))),
    };
    Ok(AsReport {
        as1,
        as2: verdict(as2_bad),
        ext: verdict(ext_bad),
    })
}

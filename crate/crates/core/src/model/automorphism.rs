use serde::Serialize;

use super::{Elem, FiniteModel};
use crate::error::{Error, Result};

pub const MAX_AUTOMORPHISM_UNIVERSE: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutomorphismReport {
    /// Each automorphism as the image of every element, in element order.
    pub automorphisms: Vec<Vec<String>>,
    pub fixpoint_free: bool,
    #[serde(skip)]
    pub perms: Vec<Vec<Elem>>,
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

pub fn is_automorphism(m: &FiniteModel, perm: &[Elem]) -> bool {
    let map = |t: &[Elem]| t.iter().map(|&e| perm[e]).collect::<Vec<_>>();
    m.relations()
        .all(|(_, r)| r.tuples.iter().all(|t| r.tuples.contains(&map(t))))
        && m
            .functions()
            .all(|(_, f)| f.table.iter().all(|(args, &v)| f.table[&map(args)] == perm[v]))
        && m.constants().all(|(_, c)| perm[c] == c)
}

/// All automorphisms, in lexicographic order of the permutation.
pub fn automorphisms(m: &FiniteModel) -> Result<AutomorphismReport> {
    if m.len() > MAX_AUTOMORPHISM_UNIVERSE {
        return Err(Error::SizeGuard(format!(
            "universe of {} elements exceeds {MAX_AUTOMORPHISM_UNIVERSE}",
            m.len()
        )));
    }
    let mut perm: Vec<Elem> = m.elements().collect();
    let mut perms = Vec::new();
    loop {
        if is_automorphism(m, &perm) {
            perms.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(AutomorphismReport {
        automorphisms: perms
            .iter()
            .map(|p| p.iter().map(|&e| m.name(e).to_string()).collect())
            .collect(),
        fixpoint_free: perms
            .iter()
            .any(|p| p.iter().enumerate().all(|(i, &e)| i != e)),
        perms,
    })
}

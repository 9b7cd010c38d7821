use super::FiniteModel;
use crate::error::{Error, Result};

/// Disjoint union of two relational models over the same relations. Elements
/// of `m` come first, renamed `0:<name>`, then those of `n` as `1:<name>`.
pub fn disjoint_union(m: &FiniteModel, n: &FiniteModel) -> Result<FiniteModel> {
    if !m.is_relational() || !n.is_relational() {
        return Err(Error::Model("disjoint union needs relational models".into()));
    }
    let arities = |x: &FiniteModel| x.relations().map(|(r, t)| (r.to_string(), t.arity)).collect::<Vec<_>>();
    if arities(m) != arities(n) {
        return Err(Error::Model("models interpret different relations".into()));
    }
    let names = m
        .names()
        .iter()
        .map(|s| format!("0:{s}"))
        .chain(n.names().iter().map(|s| format!("1:{s}")))
        .collect();
    let mut u = FiniteModel::new(names)?;
    let shift = m.len();
    for (r, table) in m.relations() {
        let other = n.relation(r).expect("same relations");
        let tuples = table.tuples.iter().cloned().chain(
            other
                .tuples
                .iter()
                .map(|t| t.iter().map(|&e| e + shift).collect()),
        );
        u.add_relation(r, table.arity, tuples)?;
    }
    Ok(u)
}

use super::{Elem, FiniteModel};
use crate::error::{Error, Result};

/// Name of the membership relation in set-theoretic models.
pub const MEMBERSHIP: &str = "in";

/// Number of hereditarily finite sets of rank below `r`.
fn tower(r: u32) -> usize {
    (0..r).fold(0, |acc, _| 1usize << acc)
}

/// Renders the hereditarily finite set with Ackermann code `n`.
pub fn hf_name(n: usize) -> String {
    let members: Vec<String> = (0..usize::BITS as usize)
        .filter(|&i| n >> i & 1 == 1)
        .map(hf_name)
        .collect();
    format!("{{{}}}", members.join(","))
}

/// The hereditarily finite sets of rank below `r` with membership, for
/// `1 <= r <= 4`. Element `n` is the set with Ackermann code `n`: `i` is a
/// member of `n` iff bit `i` of `n` is set.
pub fn build_hf(r: u32) -> Result<FiniteModel> {
    if !(1..=4).contains(&r) {
        return Err(Error::SizeGuard(format!("rank {r} outside 1..=4")));
    }
    let n = tower(r);
    let mut m = FiniteModel::new((0..n).map(hf_name).collect())?;
    let edges = (0..n).flat_map(|set: Elem| {
        (0..n).filter(move |&i| set >> i & 1 == 1).map(move |i| vec![i, set])
    });
    m.add_relation(MEMBERSHIP, 2, edges)?;
    Ok(m)
}

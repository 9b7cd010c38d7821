use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite binary sequence, written as a string of `0`/`1` digits.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Condition(pub Vec<bool>);

impl Condition {
    pub fn empty() -> Condition {
        Condition(Vec::new())
    }

    pub fn parse(text: &str) -> Result<Condition> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Forcing(format!("condition digit `{c}` is not 0 or 1"))),
            })
            .collect::<Result<_>>()
            .map(Condition)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bit(&self, n: usize) -> Option<bool> {
        self.0.get(n).copied()
    }

    /// `self ⊇ other`: `other` is a prefix of `self`.
    pub fn extends(&self, other: &Condition) -> bool {
        self.0.starts_with(&other.0)
    }

    pub fn pushed(&self, b: bool) -> Condition {
        let mut bits = self.0.clone();
        bits.push(b);
        Condition(bits)
    }

    /// Every extension of `self` of length exactly `len`, in lexicographic
    /// order.
    pub fn extensions_of_length(&self, len: usize) -> impl Iterator<Item = Condition> + '_ {
        let extra = len.saturating_sub(self.len());
        (0u64..1 << extra).map(move |k| {
            let mut bits = self.0.clone();
            bits.extend((0..extra).rev().map(|i| k >> i & 1 == 1));
            Condition(bits)
        })
    }

    /// Every condition of length at most `len`, shortest first, each length
    /// in lexicographic order.
    pub fn all_up_to(len: usize) -> impl Iterator<Item = Condition> {
        (0..=len).flat_map(|l| {
            (0u64..1 << l).map(move |k| Condition((0..l).rev().map(|i| k >> i & 1 == 1).collect()))
        })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        Condition::parse(&text).map_err(serde::de::Error::custom)
    }
}

//! Codes travel through JSON as decimal strings.

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serializer};

pub fn code_string<S: Serializer>(c: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_str_radix(10))
}

pub fn code_from_string<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    let text = String::deserialize(d)?;
    parse_code(&text).map_err(serde::de::Error::custom)
}

pub fn parse_code(text: &str) -> Result<BigUint, String> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("`{text}` is not a decimal code"));
    }
    BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| format!("`{text}` is not a decimal code"))
}

pub fn code_strings<S: Serializer>(cs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(cs.iter().map(|c| c.to_str_radix(10)))
}

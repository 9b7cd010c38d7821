//! Goedel numbering, binary numerals and dot substitution.

mod godel;
mod numeral;

pub use godel::{decode, decode_formula, decode_term, encode, encode_term, Decoded, GodelCode};
pub use numeral::{dot_substitute, numeral, numeral_u64, numeral_value};

//! Signatures, terms, formulas, the s-expression reader and printer, free
//! variables and capture-avoiding substitution.

mod ast;
mod json;
mod parse;
mod signature;
mod subst;

pub use ast::{render, Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};
pub use json::{formula_from_json, formula_to_json};
pub use parse::{exists_unique, parse, parse_lines, parse_term};
pub use signature::Signature;
pub use subst::{
    all_vars, alpha_eq, free_vars, free_vars_term, fresh_var, is_sentence, substitute,
    substitute_term, term_vars,
};

//! Formula syntax, complexity classes, Gödel coding, axiom-schema
//! generation, evaluation over the naturals and finite models, forcing with
//! finite conditions, and a Hilbert proof checker.

pub mod coding;
pub mod complexity;
pub mod enumerate;
pub mod error;
pub mod eval;
pub mod forcing;
pub mod model;
pub mod proof;
pub mod schema;
pub mod serde_code;
pub mod syntax;

pub use coding::{decode, encode, numeral, GodelCode};
pub use complexity::{rank, RankPair};
pub use error::{Error, Result};
pub use model::FiniteModel;
pub use syntax::{parse, render, Formula, Signature, Term};

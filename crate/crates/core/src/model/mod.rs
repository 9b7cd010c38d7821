//! Finite structures: membership models, adjunctive-set checks, disjoint
//! unions, automorphisms, definable elements and bounded elementary
//! equivalence.

mod adjunctive;
mod automorphism;
mod definability;
mod hf;
mod structure;
mod union;

pub use adjunctive::{as_sentences, check_as, AsReport, EmptySetVerdict, PairVerdict, AS1, AS2, EXT};
pub use automorphism::{automorphisms, is_automorphism, AutomorphismReport, MAX_AUTOMORPHISM_UNIVERSE};
pub use definability::{
    definable_elements, n_equiv, DefinabilityReport, Definition, Distinction, NEquivReport,
    MAX_SEARCH_SIZE, MAX_SEARCH_UNIVERSE, SEARCH_VARS,
};
pub use hf::{build_hf, hf_name, MEMBERSHIP};
pub use structure::{all_tuples, Elem, FiniteModel, FunctionTable, RelationTable};
pub use union::disjoint_union;

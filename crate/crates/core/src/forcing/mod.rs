//! Forcing with finite binary conditions and the generic-set construction.

mod condition;
mod generic;
mod relation;

pub use condition::Condition;
pub use generic::{
    audit_genericity, build_generic, decode_truth, least_forcing_extension, search_horizon,
    verify_trace, AuditEntry, GenericityAudit, Justification, Parity, Settlement, Stage,
    StageTrace,
};
pub use relation::{
    bit_bound, bit_bound_in, forces, forces_exact, forces_in, set_signature, ForcingMode, ForcingVerdict,
    MAX_EXTENSION_BITS, SET_VAR,
};

//! Term valuation and evaluation: three-valued over the naturals, total over
//! finite models, plus the compositional and truth-axiom checkers.

mod compositional;
mod ct;
mod equality;
mod finite;
mod nat;

use serde::{Deserialize, Serialize};

pub use compositional::{
    CompositionalChecker, CompositionalReport, Context, DomainGap, SatTable, Violation,
};
pub use ct::{check_ct, ct_corpus, CtChecker, CtReport, CtViolation, TruthOracle};
pub use equality::{decide_equality, in_equality_fragment};
pub use finite::{eval_finite, eval_finite_in, Expansion, Val};
pub use nat::{
    bound_term, bounded_shape, eval_nat, eval_nat_in, eval_term, eval_term_in, is_bounded, relativize,
    BoundedQuantifier, NatAssignment, NatExpansion,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }

    pub fn definite(self) -> Option<bool> {
        match self {
            Verdict::True => Some(true),
            Verdict::False => Some(false),
            Verdict::Unknown => None,
        }
    }

    pub fn negate(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    pub fn or(self, other: Verdict) -> Verdict {
        self.negate().and(other.negate()).negate()
    }
}

/// Limits for evaluation over the naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalBudget {
    /// Search bound for quantifiers that are not of a bounded shape.
    pub bound: u64,
    /// Largest bound value a bounded quantifier is looped over exactly;
    /// larger bounds fall back to the budgeted search.
    pub exact_limit: u64,
    /// Nesting depth beyond which evaluation answers unknown.
    pub depth_cap: usize,
}

impl EvalBudget {
    pub fn new(bound: u64) -> EvalBudget {
        EvalBudget {
            bound,
            ..EvalBudget::default()
        }
    }
}

impl Default for EvalBudget {
    fn default() -> EvalBudget {
        EvalBudget {
            bound: 64,
            exact_limit: 1 << 16,
            depth_cap: 256,
        }
    }
}

//! Quantifier-alternation ranks, syntactic depth and pure depth.
//!
//! The classes are generated by the mutual grammar
//!
//! ```text
//! S(0) = P(0) = {}
//! S(n+1) := AT | exists v S(n+1) | S(n+1) and S(n+1) | S(n+1) or S(n+1)
//!         | not P(n+1) | forall v P(n)
//! P(n+1) := AT | forall v P(n+1) | P(n+1) and P(n+1) | P(n+1) or P(n+1)
//!         | not S(n+1) | exists v S(n)
//! ```
//!
//! and [`rank`] computes the least levels bottom-up.

use serde::{Deserialize, Serialize};

use crate::syntax::{Formula, Term};

/// Least `n >= 1` with the formula in the existential resp. universal class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankPair {
    pub sigma: usize,
    pub pi: usize,
}

pub fn rank(f: &Formula) -> RankPair {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => RankPair { sigma: 1, pi: 1 },
        Formula::Not(g) => {
            let r = rank(g);
            RankPair {
                sigma: r.pi,
                pi: r.sigma,
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (ra, rb) = (rank(a), rank(b));
            RankPair {
                sigma: ra.sigma.max(rb.sigma),
                pi: ra.pi.max(rb.pi),
            }
        }
        Formula::Exists(_, g) => {
            let r = rank(g);
            RankPair {
                sigma: r.sigma,
                pi: r.sigma + 1,
            }
        }
        Formula::Forall(_, g) => {
            let r = rank(g);
            RankPair {
                sigma: r.pi + 1,
                pi: r.pi,
            }
        }
    }
}

pub fn in_sigma(f: &Formula, n: usize) -> bool {
    n >= 1 && rank(f).sigma <= n
}

pub fn in_pi(f: &Formula, n: usize) -> bool {
    n >= 1 && rank(f).pi <= n
}

pub fn is_delta(f: &Formula, n: usize) -> bool {
    let r = rank(f);
    n >= 1 && r.sigma <= n && r.pi <= n
}

/// Syntactic depth: connectives and quantifiers on the longest branch.
pub fn dp(f: &Formula) -> usize {
    match f {
        Formula::Eq(..) | Formula::Rel(..) => 0,
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => dp(g) + 1,
        Formula::And(a, b) | Formula::Or(a, b) => dp(a).max(dp(b)) + 1,
    }
}

pub fn pdp_term(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 0,
        Term::App(_, args) => 1 + args.iter().map(pdp_term).max().unwrap_or(0),
    }
}

/// Pure depth: like [`dp`], but an atom counts the depth of its terms.
pub fn pdp(f: &Formula) -> usize {
    match f {
        Formula::Eq(s, t) => pdp_term(s).max(pdp_term(t)),
        Formula::Rel(_, args) => args.iter().map(pdp_term).max().unwrap_or(0),
        Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => pdp(g) + 1,
        Formula::And(a, b) | Formula::Or(a, b) => pdp(a).max(pdp(b)) + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse, Signature};

    fn f(text: &str) -> Formula {
        parse(text, &Signature::arithmetic()).unwrap()
    }

    #[test]
    fn atoms_sit_in_both_first_classes() {
        let a = f("(= 0 0)");
        assert!(in_sigma(&a, 1) && in_pi(&a, 1));
        assert!(!in_sigma(&a, 0) && !in_pi(&a, 0));
        assert_eq!(rank(&a), RankPair { sigma: 1, pi: 1 });
    }

    #[test]
    fn existential_ranks() {
        let e = f("(exists x (= x 0))");
        assert!(!in_pi(&e, 1));
        assert!(in_pi(&e, 2));
        assert_eq!(rank(&e), RankPair { sigma: 1, pi: 2 });
    }

    #[test]
    fn forall_exists_needs_third_sigma_level() {
        // Sigma(2) only admits `forall v P(1)`, and `exists y ...` is not in P(1).
        let g = f("(forall x (exists y (= y x)))");
        assert_eq!(rank(&g), RankPair { sigma: 3, pi: 2 });
        assert!(is_delta(&g, 3) && !is_delta(&g, 2));
    }

    #[test]
    fn depths() {
        assert_eq!(dp(&f("(= 0 0)")), 0);
        assert_eq!(dp(&f("(not (= 0 0))")), 1);
        assert_eq!(dp(&f("(and (= 0 0) (not (= 0 0)))")), 2);
        assert_eq!(pdp_term(&Term::zero()), 0);
        assert_eq!(pdp_term(&Term::plus(Term::zero(), Term::one())), 1);
        assert_eq!(pdp(&f("(= (+ 0 1) 0)")), 1);
    }
}

use std::fmt;

/// Constant symbol `0` of the arithmetic core.
pub const ZERO: &str = "0";
/// Constant symbol `1` of the arithmetic core.
pub const ONE: &str = "1";
/// Binary function symbol for addition.
pub const PLUS: &str = "+";
/// Binary function symbol for multiplication.
pub const TIMES: &str = "*";
/// Binary relation symbol for the order.
pub const LESS: &str = "<";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

/// First-order formula over the connectives `not`, `and`, `or` and the two
/// quantifiers. Implication and the biconditional only exist as surface sugar
/// (see [`Formula::implies`] and [`Formula::iff`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cst(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn zero() -> Term {
        Term::cst(ZERO)
    }

    pub fn one() -> Term {
        Term::cst(ONE)
    }

    pub fn plus(a: Term, b: Term) -> Term {
        Term::app(PLUS, vec![a, b])
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::app(TIMES, vec![a, b])
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_closed),
        }
    }

    pub fn mentions_var(&self, v: &str) -> bool {
        match self {
            Term::Var(x) => x == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions_var(v)),
        }
    }
}

impl Formula {
    pub fn eq(s: Term, t: Term) -> Formula {
        Formula::Eq(s, t)
    }

    pub fn rel(name: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Rel(name.into(), args)
    }

    pub fn less(s: Term, t: Term) -> Formula {
        Formula::Rel(LESS.to_string(), vec![s, t])
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(v.into(), Box::new(body))
    }

    /// `a -> b`, desugared to `(or (not a) b)`.
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// `a <-> b`, desugared to `(and (or (not a) b) (or (not b) a))`.
    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(
            Formula::or(Formula::not(a.clone()), b.clone()),
            Formula::or(Formula::not(b), a),
        )
    }

    /// The formula used for an empty conjunction.
    pub fn top() -> Formula {
        Formula::eq(Term::zero(), Term::zero())
    }

    /// Right-nested conjunction; the empty conjunction is [`Formula::top`].
    pub fn conjunction(mut parts: Vec<Formula>) -> Formula {
        let Some(mut acc) = parts.pop() else {
            return Formula::top();
        };
        while let Some(f) = parts.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Eq(..) | Formula::Rel(..))
    }

    /// Number of nodes, counting every formula node and every term node.
    pub fn size(&self) -> usize {
        match self {
            Formula::Eq(s, t) => 1 + s.size() + t.size(),
            Formula::Rel(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.size(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Number of formula nodes only: every atom counts one regardless of
    /// the terms inside it.
    pub fn formula_size(&self) -> usize {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => 1,
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => {
                1 + f.formula_size()
            }
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.formula_size() + b.formula_size(),
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Eq(..) | Formula::Rel(..) => vec![],
            Formula::Not(f) | Formula::Exists(_, f) | Formula::Forall(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    /// Whether a relation symbol occurs anywhere in the formula.
    pub fn mentions_relation(&self, name: &str) -> bool {
        match self {
            Formula::Eq(..) => false,
            Formula::Rel(r, _) => r == name,
            _ => self.children().iter().any(|c| c.mentions_relation(name)),
        }
    }

    /// Whether a function or constant symbol occurs anywhere in the formula.
    pub fn mentions_function(&self, name: &str) -> bool {
        fn in_term(t: &Term, name: &str) -> bool {
            match t {
                Term::Var(_) => false,
                Term::Const(c) => c == name,
                Term::App(f, args) => f == name || args.iter().any(|a| in_term(a, name)),
            }
        }
        match self {
            Formula::Eq(s, t) => in_term(s, name) || in_term(t, name),
            Formula::Rel(_, args) => args.iter().any(|a| in_term(a, name)),
            _ => self.children().iter().any(|c| c.mentions_function(name)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) | Term::Const(name) => f.write_str(name),
            Term::App(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(s, t) => write!(f, "(= {s} {t})"),
            Formula::Rel(name, args) if args.is_empty() => f.write_str(name),
            Formula::Rel(name, args) => {
                write!(f, "({name}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(g) => write!(f, "(not {g})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Exists(v, g) => write!(f, "(exists {v} {g})"),
            Formula::Forall(v, g) => write!(f, "(forall {v} {g})"),
        }
    }
}

/// Renders a formula in the s-expression surface syntax.
pub fn render(f: &Formula) -> String {
    f.to_string()
}

//! Reader for the s-expression surface syntax.
//!
//! ```text
//! formula := (= term term) | (R term ...) | R
//!          | (not formula) | (and formula formula ...) | (or formula formula ...)
//!          | (implies formula formula) | (iff formula formula)
//!          | (exists var formula) | (forall var formula) | (exists! var formula)
//! term    := var | const | #<decimal> | (f term ...)
//! ```
//!
//! `->` and `<->` are accepted as spellings of `implies` and `iff`. `and`/`or`
//! with more than two arguments nest to the right. `#n` is the binary numeral
//! naming `n` and needs the arithmetic core. Implication, the biconditional
//! and unique existence are eliminated while reading.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use super::ast::{Formula, Term};
use super::signature::Signature;
use super::subst::{all_vars, fresh_var, substitute};
use crate::coding::numeral;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn read(&mut self) -> Result<Sexp> {
        self.skip_ws();
        let start = self.pos;
        let Some(c) = self.src[self.pos..].chars().next() else {
            return Err(syntax(start, "unexpected end of input"));
        };
        match c {
            '(' => {
                self.pos += 1;
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.src[self.pos..].chars().next() {
                        None => return Err(syntax(start, "unclosed parenthesis")),
                        Some(')') => {
                            self.pos += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            ')' => Err(syntax(start, "unexpected `)`")),
            _ => {
                let len = self.src[start..]
                    .find(|c: char| c.is_whitespace() || c == '(' || c == ')')
                    .unwrap_or(self.src.len() - start);
                self.pos += len;
                Ok(Sexp::Atom(self.src[start..start + len].to_string(), start))
            }
        }
    }
}

fn read_one(src: &str) -> Result<Sexp> {
    let mut r = Reader { src, pos: 0 };
    let sexp = r.read()?;
    r.skip_ws();
    if r.pos != src.len() {
        return Err(syntax(r.pos, "trailing input after formula"));
    }
    Ok(sexp)
}

/// Parses one formula and checks it against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let sexp = read_one(text)?;
    formula(&sexp, sig)
}

/// Parses one term and checks it against `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let sexp = read_one(text)?;
    term(&sexp, sig)
}

/// Parses newline-separated formulas; blank lines and lines starting with
/// `;` are skipped.
pub fn parse_lines(text: &str, sig: &Signature) -> Result<Vec<Formula>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with(';'))
        .map(|l| parse(l, sig))
        .collect()
}

fn args_exact<'s>(items: &'s [Sexp], n: usize, head: &str, pos: usize) -> Result<&'s [Sexp]> {
    let args = &items[1..];
    if args.len() != n {
        return Err(syntax(
            pos,
            format!("`{head}` takes {n} argument(s), found {}", args.len()),
        ));
    }
    Ok(args)
}

fn binder(items: &[Sexp], head: &str, pos: usize, sig: &Signature) -> Result<(String, Formula)> {
    let args = args_exact(items, 2, head, pos)?;
    let Sexp::Atom(v, vpos) = &args[0] else {
        return Err(syntax(args[0].pos(), "expected a variable after quantifier"));
    };
    check_var_name(v, *vpos, sig)?;
    Ok((v.clone(), formula(&args[1], sig)?))
}

fn check_var_name(v: &str, pos: usize, sig: &Signature) -> Result<()> {
    if sig.is_declared(v) || v.starts_with('#') {
        return Err(syntax(pos, format!("`{v}` cannot be used as a variable")));
    }
    Ok(())
}

fn fold_right(parts: Vec<Formula>, f: fn(Formula, Formula) -> Formula) -> Formula {
    let mut it = parts.into_iter().rev();
    let last = it.next().expect("at least two parts");
    it.fold(last, |acc, g| f(g, acc))
}

fn formula(sexp: &Sexp, sig: &Signature) -> Result<Formula> {
    match sexp {
        Sexp::Atom(name, pos) => match sig.relation_arity(name) {
            Some(0) => Ok(Formula::Rel(name.clone(), vec![])),
            Some(a) => Err(Error::Arity {
                name: name.clone(),
                expected: a,
                found: 0,
            }),
            None => Err(Error::UndeclaredSymbol {
                name: name.clone(),
                pos: *pos,
            }),
        },
        Sexp::List(items, pos) => {
            let Some(Sexp::Atom(head, hpos)) = items.first() else {
                return Err(syntax(*pos, "expected a connective or relation symbol"));
            };
            let pos = *pos;
            match head.as_str() {
                "=" => {
                    let args = args_exact(items, 2, head, pos)?;
                    Ok(Formula::Eq(term(&args[0], sig)?, term(&args[1], sig)?))
                }
                "not" => {
                    let args = args_exact(items, 1, head, pos)?;
                    Ok(Formula::not(formula(&args[0], sig)?))
                }
                "and" | "or" => {
                    if items.len() < 3 {
                        return Err(syntax(pos, format!("`{head}` needs at least two arguments")));
                    }
                    let parts = items[1..]
                        .iter()
                        .map(|s| formula(s, sig))
                        .collect::<Result<Vec<_>>>()?;
                    Ok(if head == "and" {
                        fold_right(parts, Formula::and)
                    } else {
                        fold_right(parts, Formula::or)
                    })
                }
                "implies" | "->" => {
                    let args = args_exact(items, 2, head, pos)?;
                    Ok(Formula::implies(formula(&args[0], sig)?, formula(&args[1], sig)?))
                }
                "iff" | "<->" => {
                    let args = args_exact(items, 2, head, pos)?;
                    Ok(Formula::iff(formula(&args[0], sig)?, formula(&args[1], sig)?))
                }
                "exists" => {
                    let (v, body) = binder(items, head, pos, sig)?;
                    Ok(Formula::exists(v, body))
                }
                "forall" => {
                    let (v, body) = binder(items, head, pos, sig)?;
                    Ok(Formula::forall(v, body))
                }
                "exists!" => {
                    let (v, body) = binder(items, head, pos, sig)?;
                    Ok(exists_unique(&v, &body))
                }
                name => {
                    let Some(arity) = sig.relation_arity(name) else {
                        return Err(Error::UndeclaredSymbol {
                            name: name.to_string(),
                            pos: *hpos,
                        });
                    };
                    let args = &items[1..];
                    if args.len() != arity {
                        return Err(Error::Arity {
                            name: name.to_string(),
                            expected: arity,
                            found: args.len(),
                        });
                    }
                    let args = args.iter().map(|a| term(a, sig)).collect::<Result<_>>()?;
                    Ok(Formula::Rel(name.to_string(), args))
                }
            }
        }
    }
}

/// `exists! v body` as `exists v (body and forall z (body[z/v] -> z = v))`
/// with `z` the first fresh `v<k>`.
pub fn exists_unique(v: &str, body: &Formula) -> Formula {
    let mut avoid: BTreeSet<String> = all_vars(body);
    avoid.insert(v.to_string());
    let z = fresh_var(&avoid);
    let body_z = substitute(body, v, &Term::Var(z.clone()));
    Formula::exists(
        v,
        Formula::and(
            body.clone(),
            Formula::forall(
                z.clone(),
                Formula::implies(body_z, Formula::eq(Term::Var(z), Term::var(v))),
            ),
        ),
    )
}

fn term(sexp: &Sexp, sig: &Signature) -> Result<Term> {
    match sexp {
        Sexp::Atom(name, pos) => {
            if let Some(digits) = name.strip_prefix('#') {
                if !sig.is_arithmetic() {
                    return Err(syntax(*pos, "numeral literals need the arithmetic core"));
                }
                let n = digits
                    .parse::<BigUint>()
                    .map_err(|_| syntax(*pos, format!("bad numeral literal `{name}`")))?;
                return Ok(numeral(&n));
            }
            if sig.is_constant(name) {
                return Ok(Term::Const(name.clone()));
            }
            if let Some(a) = sig.function_arity(name) {
                return Err(Error::Arity {
                    name: name.clone(),
                    expected: a,
                    found: 0,
                });
            }
            if sig.relation_arity(name).is_some() {
                return Err(syntax(*pos, format!("relation `{name}` used as a term")));
            }
            check_var_name(name, *pos, sig)?;
            Ok(Term::Var(name.clone()))
        }
        Sexp::List(items, pos) => {
            let Some(Sexp::Atom(head, hpos)) = items.first() else {
                return Err(syntax(*pos, "expected a function symbol"));
            };
            let Some(arity) = sig.function_arity(head) else {
                return Err(Error::UndeclaredSymbol {
                    name: head.clone(),
                    pos: *hpos,
                });
            };
            let args = &items[1..];
            if args.len() != arity {
                return Err(Error::Arity {
                    name: head.clone(),
                    expected: arity,
                    found: args.len(),
                });
            }
            let args = args.iter().map(|a| term(a, sig)).collect::<Result<_>>()?;
            Ok(Term::App(head.clone(), args))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arith() -> Signature {
        Signature::arithmetic()
    }

    #[test]
    fn atomic_identity() {
        let f = parse("(= 0 0)", &arith()).unwrap();
        assert_eq!(f, Formula::eq(Term::zero(), Term::zero()));
    }

    #[test]
    fn iff_over_nullary_relations() {
        let sig = Signature::empty()
            .with_relation("P", 0)
            .unwrap()
            .with_relation("Q", 0)
            .unwrap();
        let p = Formula::rel("P", vec![]);
        let q = Formula::rel("Q", vec![]);
        let f = parse("(iff P Q)", &sig).unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::or(Formula::not(p.clone()), q.clone()),
                Formula::or(Formula::not(q), p)
            )
        );
    }

    #[test]
    fn unique_existence_is_eliminated() {
        let f = parse("(exists! x (= x 0))", &arith()).unwrap();
        let x = Term::var("x");
        let z = Term::var("v0");
        let expected = Formula::exists(
            "x",
            Formula::and(
                Formula::eq(x.clone(), Term::zero()),
                Formula::forall(
                    "v0",
                    Formula::or(
                        Formula::not(Formula::eq(z.clone(), Term::zero())),
                        Formula::eq(z, x),
                    ),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn errors_carry_positions() {
        match parse("(= 0 (+ 0))", &arith()) {
            Err(Error::Arity {
                name,
                expected: 2,
                found: 1,
            }) => assert_eq!(name, "+"),
            other => panic!("unexpected {other:?}"),
        }
        match parse("(and (= 0 0) (Foo 0))", &arith()) {
            Err(Error::UndeclaredSymbol { name, pos }) => {
                assert_eq!(name, "Foo");
                assert_eq!(pos, 14);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("(= 0 0", &arith()),
            Err(Error::Syntax { pos: 0, .. })
        ));
        assert!(matches!(
            parse("(= 0 0))", &arith()),
            Err(Error::Syntax { pos: 7, .. })
        ));
        assert!(parse("(exists 0 (= 0 0))", &arith()).is_err());
    }

    #[test]
    fn nary_connectives_nest_right() {
        let f = parse("(or (= x 0) (= x 1) (< x 1))", &arith()).unwrap();
        assert_eq!(f.to_string(), "(or (= x 0) (or (= x 1) (< x 1)))");
    }

    #[test]
    fn numeral_literal() {
        let f = parse("(= #2 x)", &arith()).unwrap();
        assert_eq!(f.to_string(), "(= (+ 0 (* (+ 1 1) 1)) x)");
    }
}

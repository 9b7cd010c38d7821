//! Codes are built from the Polish-order token stream of a term or formula.
//!
//! Tags: `0` var, `1` const, `2` app, `3` eq, `4` rel, `5` not, `6` and,
//! `7` or, `8` exists, `9` forall. Names are one token when they are one of
//! `0 1 + * <` (tokens 0..=4), otherwise the token `5 + len` followed by the
//! UTF-8 bytes. Applications carry their argument count as a token.
//!
//! The code is the number whose binary expansion is a marker bit `1`
//! followed by the Elias-gamma code of `token + 1` for every token. Gamma
//! codes are self-delimiting, so concatenation is injective, and a proper
//! sub-part is a strictly shorter contiguous piece, hence a smaller number.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};

pub type GodelCode = BigUint;

const BUILTIN_NAMES: [&str; 5] = [ZERO, ONE, PLUS, TIMES, LESS];

const TAG_VAR: u64 = 0;
const TAG_CONST: u64 = 1;
const TAG_APP: u64 = 2;
const TAG_EQ: u64 = 3;
const TAG_REL: u64 = 4;
const TAG_NOT: u64 = 5;
const TAG_AND: u64 = 6;
const TAG_OR: u64 = 7;
const TAG_EXISTS: u64 = 8;
const TAG_FORALL: u64 = 9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decoded {
    Term(Term),
    Formula(Formula),
}

struct BitWriter {
    bits: Vec<bool>,
}

impl BitWriter {
    fn new() -> BitWriter {
        BitWriter { bits: vec![true] }
    }

    fn token(&mut self, tok: u64) {
        let n = tok + 1;
        let width = 64 - n.leading_zeros();
        self.bits.extend(std::iter::repeat(false).take(width as usize - 1));
        self.bits.extend((0..width).rev().map(|i| n >> i & 1 == 1));
    }

    fn name(&mut self, name: &str) {
        if let Some(i) = BUILTIN_NAMES.iter().position(|b| *b == name) {
            self.token(i as u64);
        } else {
            self.token(5 + name.len() as u64);
            name.bytes().for_each(|b| self.token(b as u64));
        }
    }

    fn term(&mut self, t: &Term) {
        match t {
            Term::Var(v) => {
                self.token(TAG_VAR);
                self.name(v);
            }
            Term::Const(c) => {
                self.token(TAG_CONST);
                self.name(c);
            }
            Term::App(f, args) => {
                self.token(TAG_APP);
                self.name(f);
                self.token(args.len() as u64);
                args.iter().for_each(|a| self.term(a));
            }
        }
    }

    fn formula(&mut self, f: &Formula) {
        match f {
            Formula::Eq(s, t) => {
                self.token(TAG_EQ);
                self.term(s);
                self.term(t);
            }
            Formula::Rel(r, args) => {
                self.token(TAG_REL);
                self.name(r);
                self.token(args.len() as u64);
                args.iter().for_each(|a| self.term(a));
            }
            Formula::Not(g) => {
                self.token(TAG_NOT);
                self.formula(g);
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                self.token(if matches!(f, Formula::And(..)) {
                    TAG_AND
                } else {
                    TAG_OR
                });
                self.formula(a);
                self.formula(b);
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                self.token(if matches!(f, Formula::Exists(..)) {
                    TAG_EXISTS
                } else {
                    TAG_FORALL
                });
                self.name(v);
                self.formula(g);
            }
        }
    }

    fn finish(self) -> BigUint {
        // pack most significant bit first into big-endian bytes
        let pad = (8 - self.bits.len() % 8) % 8;
        let mut bytes = Vec::with_capacity((self.bits.len() + pad) / 8);
        let mut cur = 0u8;
        let mut filled = pad;
        for b in self.bits {
            cur = cur << 1 | b as u8;
            filled += 1;
            if filled == 8 {
                bytes.push(cur);
                cur = 0;
                filled = 0;
            }
        }
        BigUint::from_bytes_be(&bytes)
    }
}

pub fn encode_term(t: &Term) -> GodelCode {
    let mut w = BitWriter::new();
    w.term(t);
    w.finish()
}

pub fn encode(f: &Formula) -> GodelCode {
    let mut w = BitWriter::new();
    w.formula(f);
    w.finish()
}

struct Reader {
    bits: Vec<bool>,
    pos: usize,
    tokens_read: usize,
}

fn not_a_code(msg: String) -> Error {
    Error::NotACode(msg)
}

impl Reader {
    fn new(c: &BigUint) -> Result<Reader> {
        if c.is_zero() {
            return Err(not_a_code("0 has no marker bit".into()));
        }
        let bits: Vec<bool> = (0..c.bits()).rev().map(|i| c.bit(i)).collect();
        // the leading bit of a nonzero number is always the marker
        Ok(Reader {
            bits,
            pos: 1,
            tokens_read: 0,
        })
    }

    fn at_end(&self) -> bool {
        self.pos == self.bits.len()
    }

    fn token(&mut self, what: &str) -> Result<u64> {
        let start = self.pos;
        let mut zeros = 0usize;
        while self.pos < self.bits.len() && !self.bits[self.pos] {
            zeros += 1;
            self.pos += 1;
        }
        if self.pos == self.bits.len() {
            return Err(not_a_code(format!(
                "token {} ({what}) at bit {start}: input ends inside a gamma code",
                self.tokens_read
            )));
        }
        if zeros >= 63 || self.pos + zeros >= self.bits.len() {
            return Err(not_a_code(format!(
                "token {} ({what}) at bit {start}: truncated gamma code",
                self.tokens_read
            )));
        }
        let mut n = 0u64;
        for _ in 0..=zeros {
            n = n << 1 | self.bits[self.pos] as u64;
            self.pos += 1;
        }
        self.tokens_read += 1;
        Ok(n - 1)
    }

    fn name(&mut self, what: &str) -> Result<String> {
        let tok = self.token(what)?;
        if tok < 5 {
            return Ok(BUILTIN_NAMES[tok as usize].to_string());
        }
        let len = tok - 5;
        if len == 0 {
            return Err(not_a_code(format!("{what}: empty name")));
        }
        let mut bytes = Vec::new();
        for _ in 0..len {
            let b = self.token(what)?;
            if b > 255 {
                return Err(not_a_code(format!("{what}: byte token {b} out of range")));
            }
            bytes.push(b as u8);
        }
        let name =
            String::from_utf8(bytes).map_err(|_| not_a_code(format!("{what}: name is not UTF-8")))?;
        if BUILTIN_NAMES.contains(&name.as_str()) {
            return Err(not_a_code(format!("{what}: builtin `{name}` spelled out")));
        }
        Ok(name)
    }

    fn arity(&mut self, what: &str, min: u64) -> Result<usize> {
        let k = self.token(what)?;
        if k < min {
            return Err(not_a_code(format!("{what}: arity {k} below {min}")));
        }
        Ok(k as usize)
    }

    fn term_from_tag(&mut self, tag: u64) -> Result<Term> {
        match tag {
            TAG_VAR => Ok(Term::Var(self.name("variable name")?)),
            TAG_CONST => Ok(Term::Const(self.name("constant name")?)),
            TAG_APP => {
                let f = self.name("function name")?;
                let k = self.arity("function arity", 1)?;
                let args = (0..k).map(|_| self.term()).collect::<Result<_>>()?;
                Ok(Term::App(f, args))
            }
            t => Err(not_a_code(format!(
                "token {}: tag {t} where a term was expected",
                self.tokens_read - 1
            ))),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let tag = self.token("term tag")?;
        self.term_from_tag(tag)
    }

    fn formula_from_tag(&mut self, tag: u64) -> Result<Formula> {
        match tag {
            TAG_EQ => Ok(Formula::Eq(self.term()?, self.term()?)),
            TAG_REL => {
                let r = self.name("relation name")?;
                let k = self.arity("relation arity", 0)?;
                let args = (0..k).map(|_| self.term()).collect::<Result<_>>()?;
                Ok(Formula::Rel(r, args))
            }
            TAG_NOT => Ok(Formula::not(self.formula()?)),
            TAG_AND => Ok(Formula::and(self.formula()?, self.formula()?)),
            TAG_OR => Ok(Formula::or(self.formula()?, self.formula()?)),
            TAG_EXISTS | TAG_FORALL => {
                let v = self.name("bound variable")?;
                let body = self.formula()?;
                Ok(if tag == TAG_EXISTS {
                    Formula::exists(v, body)
                } else {
                    Formula::forall(v, body)
                })
            }
            t => Err(not_a_code(format!(
                "token {}: tag {t} where a formula was expected",
                self.tokens_read - 1
            ))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let tag = self.token("formula tag")?;
        self.formula_from_tag(tag)
    }

    fn done<T>(self, value: T) -> Result<T> {
        if !self.at_end() {
            return Err(not_a_code(format!(
                "{} trailing bits after token {}",
                self.bits.len() - self.pos,
                self.tokens_read
            )));
        }
        Ok(value)
    }
}

pub fn decode(c: &GodelCode) -> Result<Decoded> {
    let mut r = Reader::new(c)?;
    let tag = r.token("tag")?;
    let out = if tag <= TAG_APP {
        Decoded::Term(r.term_from_tag(tag)?)
    } else {
        Decoded::Formula(r.formula_from_tag(tag)?)
    };
    r.done(out)
}

pub fn decode_formula(c: &GodelCode) -> Result<Formula> {
    match decode(c)? {
        Decoded::Formula(f) => Ok(f),
        Decoded::Term(_) => Err(not_a_code("the code of a term, not a formula".into())),
    }
}

pub fn decode_term(c: &GodelCode) -> Result<Term> {
    match decode(c)? {
        Decoded::Term(t) => Ok(t),
        Decoded::Formula(_) => Err(not_a_code("the code of a formula, not a term".into())),
    }
}

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::syntax::{substitute, Formula, Term, ONE, PLUS, TIMES, ZERO};

fn two() -> Term {
    Term::plus(Term::one(), Term::one())
}

/// The binary numeral `a0 + 2*(a1 + 2*(... + 2*ak))` with `ak = 1` the
/// leading bit; `0` and `1` are the constants themselves.
pub fn numeral(n: &BigUint) -> Term {
    let bits = n.bits();
    if bits <= 1 {
        return if n.is_zero() { Term::zero() } else { Term::one() };
    }
    let digit = |i: u64| if n.bit(i) { Term::one() } else { Term::zero() };
    let mut acc = Term::one();
    for i in (0..bits - 1).rev() {
        acc = Term::plus(digit(i), Term::times(two(), acc));
    }
    acc
}

pub fn numeral_u64(n: u64) -> Term {
    numeral(&BigUint::from(n))
}

/// Inverse of [`numeral`]; `None` for any term not of the exact shape.
pub fn numeral_value(t: &Term) -> Option<BigUint> {
    fn digit(t: &Term) -> Option<bool> {
        match t {
            Term::Const(c) if c == ZERO => Some(false),
            Term::Const(c) if c == ONE => Some(true),
            _ => None,
        }
    }
    fn is_two(t: &Term) -> bool {
        matches!(t, Term::App(f, args) if f == PLUS && args.len() == 2 && args.iter().all(|a| digit(a) == Some(true)))
    }
    if let Some(d) = digit(t) {
        return Some(if d { BigUint::one() } else { BigUint::zero() });
    }
    let mut digits = Vec::new();
    let mut cur = t;
    loop {
        let Term::App(f, args) = cur else { return None };
        if f != PLUS || args.len() != 2 {
            return None;
        }
        digits.push(digit(&args[0])?);
        let Term::App(g, rest) = &args[1] else { return None };
        if g != TIMES || rest.len() != 2 || !is_two(&rest[0]) {
            return None;
        }
        cur = &rest[1];
        if digit(cur) == Some(true) {
            break;
        }
    }
    let mut value = BigUint::one();
    for d in digits.into_iter().rev() {
        value <<= 1u32;
        if d {
            value += 1u32;
        }
    }
    Some(value)
}

/// `f` with the numeral naming `n` substituted for the free occurrences of `v`.
pub fn dot_substitute(f: &Formula, v: &str, n: &BigUint) -> Formula {
    substitute(f, v, &numeral(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_numerals_follow_the_template() {
        assert_eq!(numeral_u64(0), Term::zero());
        assert_eq!(numeral_u64(1), Term::one());
        let two = Term::plus(Term::one(), Term::one());
        assert_eq!(
            numeral_u64(2),
            Term::plus(Term::zero(), Term::times(two.clone(), Term::one()))
        );
        let num2 = numeral_u64(2);
        assert_eq!(
            numeral_u64(5),
            Term::plus(Term::one(), Term::times(two, num2))
        );
    }

    #[test]
    fn value_inverts_numeral() {
        for n in 0..300u64 {
            assert_eq!(numeral_value(&numeral_u64(n)), Some(BigUint::from(n)));
        }
        // (1+1) names two but is not the numeral of two.
        assert_eq!(numeral_value(&Term::plus(Term::one(), Term::one())), None);
        // a leading digit 0 is not canonical
        let bad = Term::plus(
            Term::one(),
            Term::times(Term::plus(Term::one(), Term::one()), Term::zero()),
        );
        assert_eq!(numeral_value(&bad), None);
    }

    #[test]
    fn dot_substitution_examples() {
        let v = Term::var("v");
        let f = Formula::eq(v.clone(), Term::zero());
        assert_eq!(
            dot_substitute(&f, "v", &BigUint::zero()),
            Formula::eq(Term::zero(), Term::zero())
        );
        let bound = Formula::exists("v", f);
        assert_eq!(dot_substitute(&bound, "v", &BigUint::from(3u32)), bound);
        let g = Formula::eq(v.clone(), v);
        assert_eq!(
            dot_substitute(&g, "v", &BigUint::from(2u32)),
            Formula::eq(numeral_u64(2), numeral_u64(2))
        );
    }
}

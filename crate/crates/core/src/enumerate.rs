//! Exhaustive enumeration of terms and formulas by node count
//! ([`Formula::size`]).

use crate::syntax::{Formula, Term, LESS, ONE, PLUS, TIMES, ZERO};

/// What the enumerator may use.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    pub vars: Vec<String>,
    pub constants: Vec<String>,
    pub functions: Vec<(String, usize)>,
    /// Relations other than equality.
    pub relations: Vec<(String, usize)>,
    pub equality: bool,
    pub quantifiers: bool,
    /// When set, only these connectives: e.g. `["not", "or"]`.
    pub connectives: Vec<&'static str>,
}

impl Vocabulary {
    /// `{0, 1, +, *, <, =}` over the given variables.
    pub fn arithmetic(vars: &[&str]) -> Vocabulary {
        Vocabulary {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            constants: vec![ZERO.into(), ONE.into()],
            functions: vec![(PLUS.into(), 2), (TIMES.into(), 2)],
            relations: vec![(LESS.into(), 2)],
            equality: true,
            quantifiers: true,
            connectives: vec!["not", "and", "or"],
        }
    }
}

pub struct Enumerator {
    voc: Vocabulary,
    terms: Vec<Vec<Term>>,
    formulas: Vec<Vec<Formula>>,
}

/// All ways to split `total` into `parts` positive sizes.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn cartesian<T: Clone>(pools: &[&[T]]) -> Vec<Vec<T>> {
    pools.iter().fold(vec![vec![]], |acc, pool| {
        acc.into_iter()
            .flat_map(|prefix| {
                pool.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

impl Enumerator {
    pub fn new(voc: Vocabulary) -> Enumerator {
        Enumerator {
            voc,
            terms: vec![vec![]],
            formulas: vec![vec![]],
        }
    }

    pub fn terms_of_size(&mut self, n: usize) -> &[Term] {
        while self.terms.len() <= n {
            let k = self.terms.len();
            let mut out = Vec::new();
            if k == 1 {
                out.extend(self.voc.vars.iter().map(Term::var));
                out.extend(self.voc.constants.iter().map(Term::cst));
            }
            for (f, arity) in &self.voc.functions {
                for sizes in compositions(k - 1, *arity) {
                    let pools: Vec<&[Term]> = sizes.iter().map(|&s| self.terms[s].as_slice()).collect();
                    out.extend(cartesian(&pools).into_iter().map(|args| Term::app(f, args)));
                }
            }
            self.terms.push(out);
        }
        &self.terms[n]
    }

    pub fn formulas_of_size(&mut self, n: usize) -> &[Formula] {
        while self.formulas.len() <= n {
            let k = self.formulas.len();
            for s in 0..k {
                self.terms_of_size(s);
            }
            let mut out = Vec::new();
            let rels = self
                .voc
                .relations
                .iter()
                .cloned()
                .chain(self.voc.equality.then(|| ("=".to_string(), 2)));
            for (r, arity) in rels {
                for sizes in compositions(k - 1, arity) {
                    let pools: Vec<&[Term]> = sizes.iter().map(|&s| self.terms[s].as_slice()).collect();
                    for args in cartesian(&pools) {
                        out.push(if r == "=" {
                            let [s, t]: [Term; 2] = args.try_into().expect("binary");
                            Formula::eq(s, t)
                        } else {
                            Formula::rel(r.clone(), args)
                        });
                    }
                }
            }
            let has = |c: &str| self.voc.connectives.contains(&c);
            if k >= 2 {
                let prev = &self.formulas[k - 1];
                if has("not") {
                    out.extend(prev.iter().cloned().map(Formula::not));
                }
                if self.voc.quantifiers {
                    for v in &self.voc.vars {
                        out.extend(prev.iter().map(|g| Formula::exists(v.clone(), g.clone())));
                        out.extend(prev.iter().map(|g| Formula::forall(v.clone(), g.clone())));
                    }
                }
                for a in 1..k - 1 {
                    for x in &self.formulas[a] {
                        for y in &self.formulas[k - 1 - a] {
                            if has("and") {
                                out.push(Formula::and(x.clone(), y.clone()));
                            }
                            if has("or") {
                                out.push(Formula::or(x.clone(), y.clone()));
                            }
                        }
                    }
                }
            }
            self.formulas.push(out);
        }
        &self.formulas[n]
    }

    /// Every formula of size `1..=n`, smallest first.
    pub fn formulas_up_to(&mut self, n: usize) -> Vec<Formula> {
        (1..=n).flat_map(|k| self.formulas_of_size(k).to_vec()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_sizes() {
        let mut e = Enumerator::new(Vocabulary::arithmetic(&["x"]));
        assert_eq!(e.terms_of_size(1).len(), 3);
        // (+ a b), (* a b) with a, b atomic
        assert_eq!(e.terms_of_size(3).len(), 18);
        assert!(e.formulas_of_size(2).is_empty());
        // (= a b), (< a b) over 3 atomic terms
        assert_eq!(e.formulas_of_size(3).len(), 18);
        for f in e.formulas_up_to(6) {
            assert!(f.size() <= 6);
        }
    }
}

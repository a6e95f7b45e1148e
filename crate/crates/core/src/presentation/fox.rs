//! Fox free differential calculus.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Letter, Word};
use crate::algebra::field::{Field, FieldElement};

/// Element `Σ c_w · w` of the integral group ring of the free group.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FoxSum {
    terms: BTreeMap<Word, BigInt>,
}

impl FoxSum {
    pub fn zero() -> FoxSum {
        FoxSum::default()
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        let entry = self.terms.entry(w).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Image under the ring map induced by generator images.
    pub fn evaluate(&self, field: &Field, images: &[FieldElement]) -> FieldElement {
        self.terms.iter().fold(field.zero(), |acc, (w, c)| {
            acc + field.from_bigint(c) * eval_word(field, images, w)
        })
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> FoxSumDisplay<'a> {
        FoxSumDisplay { sum: self, names }
    }
}

pub struct FoxSumDisplay<'a> {
    sum: &'a FoxSum,
    names: &'a [String],
}

impl fmt::Display for FoxSumDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sum.is_zero() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.sum.terms.iter().enumerate() {
            let neg = c < &BigInt::zero();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if w.is_empty() {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "{}", w.display(self.names))?;
            } else {
                write!(f, "{}*({})", abs, w.display(self.names))?;
            }
        }
        Ok(())
    }
}

/// `∂w/∂x_gen`, expanded along the word with the product rule.
pub fn fox_derivative(w: &Word, gen: usize) -> FoxSum {
    let mut out = FoxSum::zero();
    let mut prefix: Vec<Letter> = Vec::new();
    for &l in w.letters() {
        if l.gen == gen {
            if l.exp == 1 {
                out.add_term(Word::from_letters(prefix.iter().copied()), BigInt::one());
            } else {
                let term = Word::from_letters(prefix.iter().copied().chain([l]));
                out.add_term(term, -BigInt::one());
            }
        }
        prefix.push(l);
    }
    out
}

/// Multiplicative extension of generator images to a word.
pub fn eval_word(field: &Field, images: &[FieldElement], w: &Word) -> FieldElement {
    w.letters().iter().fold(field.one(), |acc, l| {
        if l.exp == 1 {
            acc * &images[l.gen]
        } else {
            acc / &images[l.gen]
        }
    })
}

/// All `χ(∂w/∂x_i)` in one pass over the word with a running prefix value.
pub fn fox_row(field: &Field, images: &[FieldElement], w: &Word) -> Vec<FieldElement> {
    let inverses: Vec<FieldElement> = images.iter().map(|x| x.inv()).collect();
    let mut row = vec![field.zero(); images.len()];
    let mut prefix = field.one();
    for l in w.letters() {
        let i = l.gen;
        if l.exp == 1 {
            row[i] = &row[i] + &prefix;
            prefix = &prefix * &images[i];
        } else {
            prefix = &prefix * &inverses[i];
            row[i] = &row[i] - &prefix;
        }
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::GroupPresentation;

    #[test]
    fn power_rule() {
        let w = Word::gen_pow(0, 4);
        let d = fox_derivative(&w, 0);
        let names = vec!["x".to_string()];
        assert_eq!(d.display(&names).to_string(), "1 + x + x^2 + x^3");
    }

    #[test]
    fn inverse_rule() {
        let d = fox_derivative(&Word::gen_pow(0, -1), 0);
        let names = vec!["x".to_string()];
        assert_eq!(d.display(&names).to_string(), "-x^-1");
    }

    #[test]
    fn commutator_rule() {
        let p = GroupPresentation::parse("gens a b\nrel [a,b]").unwrap();
        let d = fox_derivative(&p.relators()[0], 0);
        assert_eq!(d.display(p.generators()).to_string(), "1 - a b a^-1");
    }

    #[test]
    fn row_matches_symbolic() {
        let p = GroupPresentation::parse("gens a t\nrel t a t^-1 a^-2").unwrap();
        let q = Field::rationals();
        let images = vec![q.from_int(3), q.from_int(5)];
        let row = fox_row(&q, &images, &p.relators()[0]);
        for (i, x) in row.iter().enumerate() {
            assert_eq!(*x, fox_derivative(&p.relators()[0], i).evaluate(&q, &images));
        }
    }
}

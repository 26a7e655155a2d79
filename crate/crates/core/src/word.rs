//! Formal words in the generators `x_0, x_1, x_2, ...` and their evaluation
//! down to group elements.
//!
//! A `Word` is a free object: no reduction is performed, and equality of the
//! underlying group elements is decided via [`Word::to_plhomeo`] (all of F)
//! or [`crate::forest::word_to_forest`] (positive words only).

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::ParseError;
use crate::plhomeo::PLHomeo;

/// One letter `x_index` or `x_index^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(index: u32) -> Self {
        Letter {
            index,
            inverse: false,
        }
    }

    pub fn inv(index: u32) -> Self {
        Letter {
            index,
            inverse: true,
        }
    }

    pub fn to_plhomeo(self) -> PLHomeo {
        let g = PLHomeo::generator(self.index);
        if self.inverse {
            g.invert()
        } else {
            g
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "x{}^-1", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

impl FromStr for Letter {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let w: Word = s.parse()?;
        match w.letters.as_slice() {
            [l] => Ok(*l),
            _ => Err(ParseError::Word(s.to_string())),
        }
    }
}

/// A formal product of letters, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word {
            letters: Vec::new(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    /// A positive word from generator indices.
    pub fn positive(indices: &[u32]) -> Self {
        Word {
            letters: indices.iter().map(|&i| Letter::gen(i)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_positive(&self) -> bool {
        self.letters.iter().all(|l| !l.inverse)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn push(&mut self, l: Letter) {
        self.letters.push(l);
    }

    /// The formal inverse: reversed letters with flipped signs.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter {
                    index: l.index,
                    inverse: !l.inverse,
                })
                .collect(),
        }
    }

    /// Evaluates the word to a canonical group element, folding the letters
    /// left to right under the convention `(fg)(x) = g(f(x))`.
    pub fn to_plhomeo(&self) -> PLHomeo {
        let mut acc = PLHomeo::identity();
        for l in &self.letters {
            acc = acc.compose(&l.to_plhomeo());
        }
        acc
    }

    /// A uniformly random word for randomized tests: `len` letters with
    /// indices below `max_index`, optionally allowing inverse letters.
    pub fn random<R: Rng>(rng: &mut R, len: usize, max_index: u32, allow_inverse: bool) -> Word {
        let letters = (0..len)
            .map(|_| Letter {
                index: rng.random_range(0..max_index),
                inverse: allow_inverse && rng.random_bool(0.5),
            })
            .collect();
        Word { letters }
    }
}

impl fmt::Display for Word {
    /// Whitespace-separated tokens, e.g. `x0 x2^-1 x1`; the empty word
    /// renders as an empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::Word(s.to_string());
        let mut letters = Vec::new();
        for tok in s.split_whitespace() {
            let (body, inverse) = match tok.strip_suffix("^-1") {
                Some(b) => (b, true),
                None => (tok, false),
            };
            let idx = body.strip_prefix('x').ok_or_else(bad)?;
            let index: u32 = idx.parse().map_err(|_| bad())?;
            letters.push(Letter { index, inverse });
        }
        Ok(Word { letters })
    }
}

/// All positive words of length exactly `len` over the given generator
/// indices, in lexicographic order of the index choices.
pub fn positive_words_of_length(indices: &[u32], len: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * indices.len());
        for w in &out {
            for &i in indices {
                let mut v = w.clone();
                v.push(Letter::gen(i));
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// All positive words of length at most `max_len` over the given indices,
/// shortest first.
pub fn positive_words_up_to(indices: &[u32], max_len: usize) -> Vec<Word> {
    (0..=max_len)
        .flat_map(|l| positive_words_of_length(indices, l))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;

    #[test]
    fn parse_display() {
        let w: Word = "x0 x2^-1 x1".parse().unwrap();
        assert_eq!(
            w.letters,
            vec![Letter::gen(0), Letter::inv(2), Letter::gen(1)]
        );
        assert_eq!(w.to_string(), "x0 x2^-1 x1");
        assert_eq!("".parse::<Word>().unwrap(), Word::empty());
        assert!("y0".parse::<Word>().is_err());
        assert!("x".parse::<Word>().is_err());
    }

    #[test]
    fn evaluation() {
        assert_eq!(Word::empty().to_plhomeo(), PLHomeo::identity());
        // x_0 x_2 = x_3 x_0 as group elements
        let a: Word = "x0 x2".parse().unwrap();
        let b: Word = "x3 x0".parse().unwrap();
        assert_eq!(a.to_plhomeo(), b.to_plhomeo());
        // convention: first letter acts first
        let w: Word = "x0 x1".parse().unwrap();
        let t = Dyadic::new(1, 1);
        let x0 = PLHomeo::generator(0);
        let x1 = PLHomeo::generator(1);
        assert_eq!(
            w.to_plhomeo().evaluate(&t).unwrap(),
            x1.evaluate(&x0.evaluate(&t).unwrap()).unwrap()
        );
    }

    #[test]
    fn inverse_word() {
        let w: Word = "x0 x1^-1 x2".parse().unwrap();
        assert_eq!(w.inverse().to_string(), "x2^-1 x1 x0^-1");
        assert_eq!(w.concat(&w.inverse()).to_plhomeo(), PLHomeo::identity());
    }

    #[test]
    fn enumeration() {
        assert_eq!(positive_words_of_length(&[0, 1], 3).len(), 8);
        assert_eq!(positive_words_up_to(&[0, 1], 3).len(), 15);
        assert_eq!(positive_words_up_to(&[0, 1, 2], 0), vec![Word::empty()]);
    }
}

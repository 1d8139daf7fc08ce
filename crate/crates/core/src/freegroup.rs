//! Reduced words over a free group and their elementary operations.
//!
//! Words are stored as flat sequences of signed letters and kept freely
//! reduced at all times.  The text format is one character per letter:
//! lowercase for a generator, uppercase for its inverse, `""` or `"1"` for
//! the identity.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// The generator set, fixed per run.  At least 4 generators; the first two
/// are reserved for the letters of `v` (conventionally `x` and `y`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet must have at least 4 generators, got {0}")]
    AlphabetTooSmall(usize),
    #[error("alphabet symbols must be distinct lowercase ascii letters")]
    BadAlphabetSymbol,
    #[error("unknown letter {0:?} in word")]
    UnknownLetter(char),
    #[error("identity is not admissible as w")]
    EmptyWord,
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self, WordError> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() < 4 {
            return Err(WordError::AlphabetTooSmall(symbols.len()));
        }
        let mut seen = symbols.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != symbols.len() || symbols.iter().any(|c| !c.is_ascii_lowercase()) {
            return Err(WordError::BadAlphabetSymbol);
        }
        Ok(Alphabet { symbols })
    }

    /// Default alphabet {x, y, z, t}: x, y spell v, the rest are free for w.
    pub fn default_xyzt() -> Self {
        Alphabet::new("xyzt").expect("static alphabet is valid")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    pub fn index_of(&self, c: char) -> Option<u8> {
        let lower = c.to_ascii_lowercase();
        self.symbols.iter().position(|&s| s == lower).map(|i| i as u8)
    }

    /// Generator index of the letter spelling the x-runs of v.
    pub const X: u8 = 0;
    /// Generator index of the marker letter y of v.
    pub const Y: u8 = 1;
}

/// A signed generator.  `gen` indexes into the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u8, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word; the empty word is the identity monomial 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// Free reduction of a raw letter sequence.  Idempotent.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            match out.last() {
                Some(&last) if last.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        Word { letters: out }
    }

    pub fn from_letters(raw: Vec<Letter>) -> Self {
        Word::reduce(raw)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> Letter {
        self.letters[i]
    }

    /// Subword `self[start..end]` (already reduced, being a factor).
    pub fn slice(&self, start: usize, end: usize) -> Word {
        Word { letters: self.letters[start..end].to_vec() }
    }

    /// Product with free reduction at the junction.
    pub fn multiply(&self, other: &Word) -> Word {
        let mut cut = 0;
        while cut < self.letters.len()
            && cut < other.letters.len()
            && self.letters[self.letters.len() - 1 - cut].cancels(other.letters[cut])
        {
            cut += 1;
        }
        let mut letters = Vec::with_capacity(self.len() + other.len() - 2 * cut);
        letters.extend_from_slice(&self.letters[..self.letters.len() - cut]);
        letters.extend_from_slice(&other.letters[cut..]);
        Word { letters }
    }

    pub fn invert(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inv()).collect() }
    }

    /// Concatenation of several words with reduction.
    pub fn concat(parts: &[&Word]) -> Word {
        let mut acc = Word::identity();
        for p in parts {
            acc = acc.multiply(p);
        }
        acc
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k >= 0 { self.clone() } else { self.invert() };
        let mut acc = Word::identity();
        for _ in 0..k.unsigned_abs() {
            acc = acc.multiply(&base);
        }
        acc
    }

    /// True iff the word is cyclically reduced and primitive (not a proper
    /// power).  Primitivity is checked by brute force over the divisors of
    /// the length.
    pub fn is_cyclically_reduced_primitive(&self) -> Result<bool, WordError> {
        if self.is_empty() {
            return Err(WordError::EmptyWord);
        }
        let n = self.letters.len();
        if n > 1 && self.letters[0].cancels(self.letters[n - 1]) {
            return Ok(false);
        }
        for period in 1..n {
            if n % period != 0 {
                continue;
            }
            if (period..n).all(|i| self.letters[i] == self.letters[i - period]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Count of occurrences of a generator, either sign.
    pub fn count_gen(&self, gen: u8) -> usize {
        self.letters.iter().filter(|l| l.gen == gen).count()
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
        let trimmed = text.trim();
        if trimmed.is_empty() || trimmed == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::with_capacity(trimmed.len());
        for c in trimmed.chars() {
            if c.is_whitespace() {
                continue;
            }
            let gen = alphabet.index_of(c).ok_or(WordError::UnknownLetter(c))?;
            letters.push(Letter::new(gen, c.is_ascii_uppercase()));
        }
        Ok(Word::reduce(letters))
    }

    pub fn format(&self, alphabet: &Alphabet) -> String {
        if self.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| {
                let c = alphabet.symbol(l.gen);
                if l.inverse {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

impl fmt::Display for Word {
    /// Displays against the default alphabet; use [`Word::format`] otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format(&Alphabet::default_xyzt()))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.format(&Alphabet::default_xyzt()))
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        Word::parse(&s, &Alphabet::default_xyzt()).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ab() -> Alphabet {
        Alphabet::default_xyzt()
    }

    fn w(s: &str) -> Word {
        Word::parse(s, &ab()).unwrap()
    }

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        assert_eq!(w("xX"), Word::identity());
        assert_eq!(w("xyYx"), w("xx"));
        assert_eq!(w("xyz"), w("xyz"));
    }

    #[test]
    fn multiply_identity_and_inverse_laws() {
        assert_eq!(w("xy").multiply(&w("Y")), w("x"));
        assert_eq!(Word::identity().multiply(&w("zt")), w("zt"));
        assert_eq!(w("x").multiply(&w("X")), Word::identity());
    }

    #[test]
    fn invert_reverses_and_flips() {
        assert_eq!(w("xy").invert(), w("YX"));
        assert_eq!(Word::identity().invert(), Word::identity());
        assert_eq!(w("zt").invert(), w("TZ"));
    }

    #[test]
    fn cyclically_reduced_primitive_checks() {
        assert!(w("zt").is_cyclically_reduced_primitive().unwrap());
        assert!(!w("ztzt").is_cyclically_reduced_primitive().unwrap());
        assert!(!w("ztZ").is_cyclically_reduced_primitive().unwrap());
        assert_eq!(
            Word::identity().is_cyclically_reduced_primitive(),
            Err(WordError::EmptyWord)
        );
    }

    #[test]
    fn text_round_trip() {
        for s in ["xxyX", "1", "ztZT"] {
            let word = w(s);
            assert_eq!(Word::parse(&word.format(&ab()), &ab()).unwrap(), word);
        }
    }

    fn arb_letter() -> impl Strategy<Value = Letter> {
        (0u8..4, any::<bool>()).prop_map(|(g, i)| Letter::new(g, i))
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in proptest::collection::vec(arb_letter(), 0..40)) {
            let once = Word::reduce(raw.clone());
            let twice = Word::reduce(once.letters().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn inverse_laws(raw in proptest::collection::vec(arb_letter(), 0..40)) {
            let a = Word::reduce(raw);
            prop_assert_eq!(a.multiply(&a.invert()), Word::identity());
            prop_assert_eq!(a.invert().invert(), a);
        }

        #[test]
        fn length_subadditive(
            r1 in proptest::collection::vec(arb_letter(), 0..30),
            r2 in proptest::collection::vec(arb_letter(), 0..30),
        ) {
            let a = Word::reduce(r1);
            let b = Word::reduce(r2);
            let ab = a.multiply(&b);
            prop_assert!(ab.len() <= a.len() + b.len());
            let no_cancel = a.is_empty()
                || b.is_empty()
                || !a.letter(a.len() - 1).cancels(b.letter(0));
            prop_assert_eq!(ab.len() == a.len() + b.len(), no_cancel);
        }
    }
}

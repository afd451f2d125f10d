//! Words over the two-letter alphabet `{1, *}`.
//!
//! A word is the exponent pattern of a star monomial: `1` stands for the
//! adjacency operator and `*` for its adjoint. Text input accepts `s` as an
//! alias for `*`; printing always uses `*`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    One,
    Star,
}

impl Letter {
    pub fn flip(self) -> Letter {
        match self {
            Letter::One => Letter::Star,
            Letter::Star => Letter::One,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::One => '1',
            Letter::Star => '*',
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Letter at a 1-based position.
    pub fn at(&self, position: usize) -> Letter {
        self.letters[position - 1]
    }

    /// True iff the letters can be matched into non-crossing `1*`/`*1`
    /// pairs, i.e. the word reduces to the empty word by repeatedly deleting
    /// an adjacent `1*` or `*1`. This happens exactly when both letters occur
    /// equally often.
    pub fn is_balanced(&self) -> bool {
        2 * self.count(Letter::One) == self.letters.len()
    }

    /// True iff the word is non-empty, of even length, and strictly
    /// alternates (`1*1*…` or `*1*1…`).
    pub fn is_alternating(&self) -> bool {
        !self.letters.is_empty()
            && self.letters.len().is_multiple_of(2)
            && self.letters.windows(2).all(|p| p[0] != p[1])
    }

    /// Letters at the given strictly increasing 1-based positions.
    pub fn subword(&self, positions: &[usize]) -> Result<Word> {
        let mut out = Vec::with_capacity(positions.len());
        let mut prev = 0;
        for &p in positions {
            if p == 0 || p > self.len() {
                return Err(Error::IndexOutOfRange {
                    index: p,
                    len: self.len(),
                });
            }
            if p <= prev {
                return Err(Error::InvalidArgument(format!(
                    "positions must be strictly increasing ({prev} then {p})"
                )));
            }
            out.push(self.letters[p - 1]);
            prev = p;
        }
        Ok(Word::new(out))
    }

    /// Swaps `1` and `*` in every position.
    pub fn star_flip(&self) -> Word {
        Word::new(self.letters.iter().map(|l| l.flip()).collect())
    }

    /// Cyclic left rotation by `by` positions.
    pub fn rotate(&self, by: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let mut letters = self.letters.clone();
        letters.rotate_left(by % self.len());
        Word::new(letters)
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    /// All `2^len` words of the given length, in lexicographic order with `1 < *`.
    pub fn all_of_length(len: usize) -> impl Iterator<Item = Word> {
        (0u64..1u64 << len).map(move |bits| {
            Word::new(
                (0..len)
                    .map(|i| {
                        if bits >> (len - 1 - i) & 1 == 0 {
                            Letter::One
                        } else {
                            Letter::Star
                        }
                    })
                    .collect(),
            )
        })
    }

    /// All words of length at most `max_len`, shortest first.
    pub fn all_up_to(max_len: usize) -> impl Iterator<Item = Word> {
        (0..=max_len).flat_map(Word::all_of_length)
    }
}

pub fn parse_word(text: &str) -> Result<Word> {
    text.parse()
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .enumerate()
            .map(|(i, c)| match c {
                '1' => Ok(Letter::One),
                '*' | 's' => Ok(Letter::Star),
                other => Err(Error::InvalidCharacter {
                    position: i + 1,
                    found: other,
                }),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word::new)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

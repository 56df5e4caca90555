use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its formal inverse.
///
/// Encoded as `2 * generator + inverse`, so the derived order is the
/// shortlex letter order `s1 < s1^-1 < s2 < s2^-1 < ...`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u32) << 1 | inverse as u32)
    }

    pub fn gen(generator: usize) -> Self {
        Letter::new(generator, false)
    }

    pub fn inv(generator: usize) -> Self {
        Letter::new(generator, true)
    }

    /// Signed, one-based index: `+i` is `s_i`, `-i` is `s_i^-1`.
    pub fn from_signed(index: i32) -> Option<Self> {
        match index {
            0 => None,
            i if i > 0 => Some(Letter::gen(i as usize - 1)),
            i => Some(Letter::inv((-i) as usize - 1)),
        }
    }

    pub fn signed(self) -> i32 {
        let g = self.generator() as i32 + 1;
        if self.is_inverse() {
            -g
        } else {
            g
        }
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Position in the `2 * generator_count` letter alphabet.
    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.signed())
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_signed(indices: &[i32]) -> Self {
        Word(indices.iter().filter_map(|&i| Letter::from_signed(i)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverses the order and flips every sign.
    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&base.0);
        }
        Word(letters)
    }

    pub fn cmp_shortlex(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator()).max()
    }

    pub fn check_alphabet(&self, generator_count: usize) -> Result<()> {
        match self.max_generator() {
            Some(g) if g >= generator_count => Err(Error::LetterOutOfRange { generator: g, count: generator_count }),
            _ => Ok(()),
        }
    }

    /// Renders with generator names, `1` for the empty word.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Parses `1`, `a.b^-1.a` or space-separated tokens. An upper-case
    /// single-letter name denotes the inverse of its lower-case generator
    /// when no generator of that name exists.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "1" || text == "ε" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for token in text.split(|c: char| c == '.' || c == '*' || c == '·' || c.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let (name, power) = match token.split_once('^') {
                Some((n, p)) => {
                    let p: i64 = p.parse().map_err(|_| Error::WordSyntax(text.to_string()))?;
                    (n, p)
                }
                None => (token, 1),
            };
            let (generator, sign) = if let Some(g) = names.iter().position(|n| n == name) {
                (g, 1)
            } else if let Some(g) = names.iter().position(|n| n.to_uppercase() == name && n != name) {
                (g, -1)
            } else {
                return Err(Error::WordSyntax(text.to_string()));
            };
            let p = power * sign;
            let letter = Letter::new(generator, p < 0);
            letters.extend(std::iter::repeat_n(letter, p.unsigned_abs() as usize));
        }
        Ok(Word(letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Self {
        Word(letters)
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.word.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            let fallback;
            let name = match self.names.get(l.generator()) {
                Some(n) => n.as_str(),
                None => {
                    fallback = format!("s{}", l.generator() + 1);
                    fallback.as_str()
                }
            };
            f.write_str(name)?;
            if l.is_inverse() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

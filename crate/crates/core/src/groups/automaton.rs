//! Counting automata for shortlex-canonical languages.
//!
//! When the set of shortlex-least words of a group is regular, the n-th
//! canonical word can be ranked and unranked by counting accepted words,
//! without enumerating the group.

use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::groups::word::{Letter, Word};
use crate::Vertex;

#[derive(Debug)]
pub struct ShortlexAutomaton {
    alphabet: usize,
    start: usize,
    transitions: Vec<Vec<Option<usize>>>,
    accepting: Vec<bool>,
    // counts[len][state]: accepted words of length `len` read from `state`.
    counts: Mutex<Vec<Vec<Option<u128>>>>,
}

impl ShortlexAutomaton {
    pub fn new(alphabet: usize, start: usize, transitions: Vec<Vec<Option<usize>>>, accepting: Vec<bool>) -> Self {
        assert_eq!(transitions.len(), accepting.len());
        assert!(transitions.iter().all(|row| row.len() == alphabet));
        ShortlexAutomaton { alphabet, start, transitions, accepting, counts: Mutex::new(Vec::new()) }
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn step(&self, state: usize, letter: Letter) -> Option<usize> {
        self.transitions[state].get(letter.code()).copied().flatten()
    }

    pub fn accepts(&self, word: &Word) -> bool {
        let mut s = self.start;
        for &l in word.letters() {
            match self.step(s, l) {
                Some(t) => s = t,
                None => return false,
            }
        }
        self.accepting[s]
    }

    /// Number of accepted words of length `len` starting from `state`;
    /// `None` when the count does not fit in a vertex name.
    fn count(&self, len: usize, state: usize) -> Option<u128> {
        let mut counts = self.counts.lock().expect("count table poisoned");
        while counts.len() <= len {
            let row: Vec<Option<u128>> = if counts.is_empty() {
                self.accepting.iter().map(|&a| Some(a as u128)).collect()
            } else {
                let prev = counts.last().unwrap();
                self.transitions.iter().map(|row| row.iter().flatten().try_fold(0u128, |acc, &t| acc.checked_add(prev[t]?))).collect()
            };
            counts.push(row);
        }
        counts[len][state]
    }

    pub fn words_of_length(&self, len: usize) -> Option<u128> {
        self.count(len, self.start)
    }

    /// Shortlex rank of an accepted word among all accepted words.
    pub fn rank(&self, word: &Word) -> Result<Vertex> {
        let overflow = || Error::IndexOverflow(word.len());
        let mut total: u128 = 0;
        for len in 0..word.len() {
            total = total.checked_add(self.count(len, self.start).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        let mut state = self.start;
        for (i, &letter) in word.letters().iter().enumerate() {
            let rest = word.len() - i - 1;
            for code in 0..letter.code() {
                if let Some(t) = self.transitions[state][code] {
                    total = total.checked_add(self.count(rest, t).ok_or_else(overflow)?).ok_or_else(overflow)?;
                }
            }
            state = self.step(state, letter).ok_or_else(|| Error::InvalidData("word is not shortlex-canonical".into()))?;
        }
        if !self.accepting[state] {
            return Err(Error::InvalidData("word is not shortlex-canonical".into()));
        }
        Ok(total)
    }

    pub fn unrank(&self, mut index: Vertex) -> Result<Word> {
        let requested = index;
        let mut len = 0;
        loop {
            let c = self.count(len, self.start).ok_or(Error::IndexOverflow(len))?;
            if index < c {
                break;
            }
            if c == 0 && len > self.state_count() {
                return Err(Error::IndexOutOfRange(requested));
            }
            index -= c;
            len += 1;
        }
        let mut state = self.start;
        let mut letters = Vec::with_capacity(len);
        for rest in (0..len).rev() {
            let mut chosen = None;
            for code in 0..self.alphabet {
                if let Some(t) = self.transitions[state][code] {
                    let c = self.count(rest, t).ok_or(Error::IndexOverflow(len))?;
                    if index < c {
                        chosen = Some((code, t));
                        break;
                    }
                    index -= c;
                }
            }
            let (code, t) = chosen.expect("counts are consistent");
            letters.push(Letter::from_code(code));
            state = t;
        }
        Ok(Word(letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reduced words over a, a^-1: a^n or a^-n.
    fn infinite_cyclic() -> ShortlexAutomaton {
        let t = vec![vec![Some(1), Some(2)], vec![Some(1), None], vec![None, Some(2)]];
        ShortlexAutomaton::new(2, 0, t, vec![true; 3])
    }

    #[test]
    fn rank_unrank_inverse() {
        let a = infinite_cyclic();
        for n in 0..50u128 {
            let w = a.unrank(n).unwrap();
            assert!(a.accepts(&w));
            assert_eq!(a.rank(&w).unwrap(), n);
        }
        assert_eq!(a.unrank(1).unwrap(), Word::from_signed(&[1]));
        assert_eq!(a.unrank(2).unwrap(), Word::from_signed(&[-1]));
        assert_eq!(a.unrank(3).unwrap(), Word::from_signed(&[1, 1]));
    }

    #[test]
    fn finite_language_runs_out() {
        // only words of length <= 1
        let t = vec![vec![Some(1), Some(1)], vec![None, None]];
        let a = ShortlexAutomaton::new(2, 0, t, vec![true, true]);
        assert_eq!(a.unrank(2).unwrap(), Word::from_signed(&[-1]));
        assert_eq!(a.unrank(3), Err(Error::IndexOutOfRange(3)));
    }
}

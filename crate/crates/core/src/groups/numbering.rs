//! Canonical shortlex numberings.
//!
//! Index `n` names the n-th shortlex-least word among all words that are
//! the shortlex-least representative of their element. Two backends give
//! the same numbering: a counting automaton when the canonical language is
//! regular, and lazy level-by-level enumeration driven by the word problem.

use std::collections::hash_map::{DefaultHasher, Entry};
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use super::automaton::ShortlexAutomaton;
use super::word::{Letter, Word};
use super::{ElementKey, GroupOracle};
use crate::error::{Error, Result};
use crate::Vertex;

#[derive(Clone)]
pub struct Numbering {
    group: GroupOracle,
    backend: Arc<Backend>,
}

impl fmt::Debug for Numbering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Numbering").field("group", &self.group).finish()
    }
}

enum Backend {
    Regular(ShortlexAutomaton),
    Enumerated(Mutex<Enumeration>),
}

// Word n is word parent[n] followed by letter last[n]. Keys are indexed by
// a digest; a digest hit is confirmed by recomputing the stored element's key.
struct Enumeration {
    use_keys: bool,
    parent: Vec<u32>,
    last: Vec<u16>,
    digests: HashMap<u64, u32>,
    collisions: HashMap<ElementKey, u32>,
    // words level_starts[l].. have length l
    level_starts: Vec<usize>,
    complete: bool,
}

/// Largest number of elements the enumeration backend will store.
pub const ENUMERATION_LIMIT: usize = 1 << 25;

fn digest(key: &ElementKey) -> u64 {
    let mut h = DefaultHasher::new();
    key.hash(&mut h);
    h.finish()
}

/// The canonical (shortlex-least representative) numbering of `group`.
pub fn canonical_numbering(group: &GroupOracle) -> Numbering {
    Numbering::new(group)
}

impl Numbering {
    pub fn new(group: &GroupOracle) -> Self {
        let wp = group.strategy();
        match wp.shortlex_automaton() {
            Some(automaton) if wp.shortlex_form(&Word::empty()).is_some() => Numbering { group: group.clone(), backend: Arc::new(Backend::Regular(automaton)) },
            _ => Numbering::enumerated(group, true),
        }
    }

    /// Enumeration backend; with `use_keys = false` only the word problem
    /// itself is consulted.
    pub fn enumerated(group: &GroupOracle, use_keys: bool) -> Self {
        let use_keys = use_keys && group.strategy().element_key(&Word::empty()).is_some();
        let mut e = Enumeration {
            use_keys,
            parent: vec![0],
            last: vec![0],
            digests: HashMap::new(),
            collisions: HashMap::new(),
            level_starts: vec![0, 1],
            complete: false,
        };
        if use_keys {
            e.digests.insert(digest(&group.strategy().element_key(&Word::empty()).unwrap()), 0);
        }
        Numbering { group: group.clone(), backend: Arc::new(Backend::Enumerated(Mutex::new(e))) }
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn is_regular(&self) -> bool {
        matches!(*self.backend, Backend::Regular(_))
    }

    pub fn to_word(&self, n: Vertex) -> Result<Word> {
        match &*self.backend {
            Backend::Regular(a) => a.unrank(n),
            Backend::Enumerated(e) => {
                let mut e = e.lock().expect("numbering cache poisoned");
                while (e.len() as Vertex) <= n {
                    if e.complete {
                        return Err(Error::IndexOutOfRange(n));
                    }
                    e.next_level(&self.group)?;
                }
                Ok(e.word(n as usize))
            }
        }
    }

    pub fn to_index(&self, w: &Word) -> Result<Vertex> {
        w.check_alphabet(self.group.generator_count())?;
        match &*self.backend {
            Backend::Regular(a) => {
                let form = self.group.strategy().shortlex_form(w).expect("regular backend has normal forms");
                a.rank(&form)
            }
            Backend::Enumerated(e) => {
                let mut e = e.lock().expect("numbering cache poisoned");
                e.index_of(&self.group, w)
            }
        }
    }

    /// Shortlex-least word equal to `w`.
    pub fn canonical(&self, w: &Word) -> Result<Word> {
        if let Backend::Regular(_) = &*self.backend {
            return Ok(self.group.strategy().shortlex_form(w).expect("regular backend has normal forms"));
        }
        self.to_word(self.to_index(w)?)
    }

    /// Number of elements when the group is finite.
    pub fn finite_order(&self) -> Option<usize> {
        match &*self.backend {
            Backend::Regular(a) => {
                let mut total = 0u128;
                for len in 0..=a.state_count() + 1 {
                    let c = a.words_of_length(len)?;
                    if c == 0 {
                        return Some(total as usize);
                    }
                    total += c;
                }
                None
            }
            Backend::Enumerated(e) => {
                let e = e.lock().expect("numbering cache poisoned");
                e.complete.then_some(e.len())
            }
        }
    }

    /// Canonical words of length at most `len`, in numbering order. Stops
    /// early for finite groups.
    pub fn words_up_to_length(&self, len: usize) -> Result<Vec<Word>> {
        let mut out = Vec::new();
        let mut n: Vertex = 0;
        loop {
            match self.to_word(n) {
                Ok(w) if w.len() <= len => out.push(w),
                Ok(_) => break,
                Err(Error::IndexOutOfRange(_)) => break,
                Err(e) => return Err(e),
            }
            n += 1;
        }
        Ok(out)
    }
}

impl Enumeration {
    fn len(&self) -> usize {
        self.parent.len()
    }

    fn word(&self, mut n: usize) -> Word {
        let mut letters = Vec::new();
        while n != 0 {
            letters.push(Letter::from_code(self.last[n] as usize));
            n = self.parent[n] as usize;
        }
        letters.reverse();
        Word(letters)
    }

    fn last_level_len(&self) -> usize {
        self.level_starts.len() - 2
    }

    fn lookup(&self, group: &GroupOracle, key: &ElementKey) -> Option<u32> {
        let &i = self.digests.get(&digest(key))?;
        if group.strategy().element_key(&self.word(i as usize)).as_ref() == Some(key) {
            return Some(i);
        }
        self.collisions.get(key).copied()
    }

    fn push(&mut self, parent: usize, letter: Letter) -> Result<u32> {
        if self.len() >= ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit(ENUMERATION_LIMIT));
        }
        let n = self.len() as u32;
        self.parent.push(parent as u32);
        self.last.push(letter.code() as u16);
        Ok(n)
    }

    fn next_level(&mut self, group: &GroupOracle) -> Result<()> {
        let lo = self.level_starts[self.level_starts.len() - 2];
        let hi = self.level_starts[self.level_starts.len() - 1];
        let letters: Vec<Letter> = group.letters().collect();
        let mut known: Vec<Word> = if self.use_keys { Vec::new() } else { (0..hi).map(|i| self.word(i)).collect() };
        for i in lo..hi {
            let prefix = self.word(i);
            // a freely reducible word is never shortlex-least
            let fresh: Vec<Letter> = letters.iter().copied().filter(|&l| prefix.letters().last() != Some(&l.inverse())).collect();
            if self.use_keys {
                let keys = group.strategy().element_keys_extending(&prefix, &fresh).expect("keys available");
                for (l, key) in fresh.into_iter().zip(keys) {
                    if self.lookup(group, &key).is_some() {
                        continue;
                    }
                    let n = self.push(i, l)?;
                    match self.digests.entry(digest(&key)) {
                        Entry::Vacant(v) => {
                            v.insert(n);
                        }
                        Entry::Occupied(_) => {
                            self.collisions.insert(key, n);
                        }
                    }
                }
            } else {
                for l in fresh {
                    let mut cand = prefix.clone();
                    cand.push(l);
                    if !known.iter().any(|w| group.equal(&cand, w)) {
                        self.push(i, l)?;
                        known.push(cand);
                    }
                }
            }
        }
        let end = self.len();
        if end == hi {
            self.complete = true;
        }
        self.level_starts.push(end);
        Ok(())
    }

    fn index_of(&mut self, group: &GroupOracle, w: &Word) -> Result<Vertex> {
        if self.use_keys {
            let key = group.strategy().element_key(w).expect("keys available");
            loop {
                if let Some(i) = self.lookup(group, &key) {
                    return Ok(i as Vertex);
                }
                if self.complete || self.last_level_len() >= w.len() {
                    return Err(Error::InvalidData("word problem oracle is inconsistent".into()));
                }
                self.next_level(group)?;
            }
        }
        while !self.complete && self.last_level_len() < w.len() {
            self.next_level(group)?;
        }
        (0..self.len())
            .find(|&i| group.equal(w, &self.word(i)))
            .map(|i| i as Vertex)
            .ok_or_else(|| Error::InvalidData("word problem oracle is inconsistent".into()))
    }
}

/// Carries index `n` of `from` to the index in `to` of the same element,
/// rewriting letters through `letter_map` (generator of `from` -> word in
/// the generators of `to`).
pub fn translate_index(from: &Numbering, to: &Numbering, letter_map: &[Word], n: Vertex) -> Result<Vertex> {
    let w = from.to_word(n)?;
    let mut image = Word::empty();
    for l in w.letters() {
        let g = &letter_map[l.generator()];
        image = image.concat(&if l.is_inverse() { g.inverse() } else { g.clone() });
    }
    to.to_index(&image)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, BuiltinGroup, PermutedGenerators};
    use std::collections::HashSet;

    #[test]
    fn identity_is_index_zero() {
        let z = builtin_group(BuiltinGroup::Z).unwrap();
        let n = canonical_numbering(&z);
        assert_eq!(n.to_word(0).unwrap(), Word::empty());
        let a = Word::from_signed(&[1]);
        assert_eq!(n.to_index(&Word::from_signed(&[1, -1, 1])).unwrap(), n.to_index(&a).unwrap());
    }

    #[test]
    fn first_words_of_z2() {
        let g = builtin_group(BuiltinGroup::Z2).unwrap();
        let expected: Vec<Word> = vec![Word::empty(), Word::from_signed(&[1]), Word::from_signed(&[-1]), Word::from_signed(&[2]), Word::from_signed(&[-2])];
        for numbering in [canonical_numbering(&g), Numbering::enumerated(&g, false)] {
            let first: Vec<Word> = (0..5).map(|i| numbering.to_word(i).unwrap()).collect();
            assert_eq!(first, expected);
        }
    }

    // shortlex enumeration filtered by the word problem alone
    fn brute_force_canonical(g: &GroupOracle, count: usize) -> Vec<Word> {
        let k = 2 * g.generator_count();
        let mut found: Vec<Word> = Vec::new();
        let mut level = vec![Word::empty()];
        while found.len() < count {
            for w in &level {
                if found.len() < count && !found.iter().any(|c| g.equal(c, w)) {
                    found.push(w.clone());
                }
            }
            level = level
                .iter()
                .flat_map(|w| {
                    (0..k).map(move |c| {
                        let mut x = w.clone();
                        x.push(Letter::from_code(c));
                        x
                    })
                })
                .collect();
        }
        found
    }

    #[test]
    fn backends_agree_with_brute_force() {
        for b in [BuiltinGroup::Z2, BuiltinGroup::FreeF2, BuiltinGroup::Z2StarZ3, BuiltinGroup::Z2Hnn, BuiltinGroup::Zd(3)] {
            let g = builtin_group(b).unwrap();
            let brute = brute_force_canonical(&g, 60);
            let regular = canonical_numbering(&g);
            assert!(regular.is_regular());
            let keyed = Numbering::enumerated(&g, true);
            for (i, w) in brute.iter().enumerate() {
                assert_eq!(&regular.to_word(i as Vertex).unwrap(), w, "{b} regular #{i}");
                assert_eq!(&keyed.to_word(i as Vertex).unwrap(), w, "{b} keyed #{i}");
            }
        }
        let bs = builtin_group(BuiltinGroup::Bs12).unwrap();
        let brute = brute_force_canonical(&bs, 40);
        let keyed = canonical_numbering(&bs);
        for (i, w) in brute.iter().enumerate() {
            assert_eq!(&keyed.to_word(i as Vertex).unwrap(), w);
        }
    }

    #[test]
    fn index_word_round_trip_first_500() {
        for b in [BuiltinGroup::Z, BuiltinGroup::Z2, BuiltinGroup::FreeF2, BuiltinGroup::Z2StarZ3, BuiltinGroup::Z2Hnn, BuiltinGroup::Bs12] {
            let g = builtin_group(b).unwrap();
            let n = canonical_numbering(&g);
            let mut seen = HashSet::new();
            for i in 0..500u128 {
                let w = n.to_word(i).unwrap();
                assert!(seen.insert(w.clone()));
                assert_eq!(n.to_index(&w).unwrap(), i, "{b}");
            }
        }
    }

    #[test]
    fn index_agrees_with_word_problem() {
        let g = builtin_group(BuiltinGroup::Z2StarZ3).unwrap();
        let n = canonical_numbering(&g);
        let words: Vec<Word> = (0..40).map(|i| n.to_word(i).unwrap()).collect();
        for u in &words {
            for v in &words {
                let w = u.concat(&v.inverse()).concat(v);
                assert!(n.to_index(&w).unwrap() == n.to_index(u).unwrap());
                assert_eq!(n.to_index(u).unwrap() == n.to_index(v).unwrap(), g.equal(u, v));
            }
        }
    }

    #[test]
    fn finite_groups_run_out() {
        let c3 = builtin_group(BuiltinGroup::Cyclic(3)).unwrap();
        let n = canonical_numbering(&c3);
        assert_eq!(n.finite_order(), Some(3));
        assert_eq!(n.to_word(2).unwrap(), Word::from_signed(&[-1]));
        assert_eq!(n.to_word(3), Err(Error::IndexOutOfRange(3)));
        let e = Numbering::enumerated(&c3, false);
        assert_eq!(e.to_word(3), Err(Error::IndexOutOfRange(3)));
        assert_eq!(e.finite_order(), Some(3));
    }

    #[test]
    fn numberings_for_two_generator_orders_are_equivalent() {
        // a <-> b relabelling of Z2 and of F2; the two canonical numberings
        // differ, but translating there and back is the identity.
        for b in [BuiltinGroup::Z2, BuiltinGroup::FreeF2] {
            let g = builtin_group(b).unwrap();
            let swapped_wp = Arc::new(PermutedGenerators::new(g.strategy().clone(), vec![1, 0]).unwrap());
            let swapped = GroupOracle::new("swapped", vec!["b".into(), "a".into()], swapped_wp, g.declared_ends(), None).unwrap();
            let nu = canonical_numbering(&g);
            let mu = canonical_numbering(&swapped);
            let there = [Word::from_signed(&[2]), Word::from_signed(&[1])];
            let back = there.clone();
            let mut differs = false;
            for i in 0..200u128 {
                let j = translate_index(&nu, &mu, &there, i).unwrap();
                differs |= j != i;
                assert_eq!(translate_index(&mu, &nu, &back, j).unwrap(), i);
            }
            assert!(differs);
        }
    }
}

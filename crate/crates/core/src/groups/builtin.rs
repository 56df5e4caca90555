//! Word-problem strategies for the built-in groups.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::automaton::ShortlexAutomaton;
use super::word::{Letter, Word};
use super::{ElementKey, WordProblem};

/// Free abelian group: a word is trivial iff every exponent sum vanishes.
#[derive(Debug, Clone)]
pub struct AbelianWp {
    pub rank: usize,
}

impl AbelianWp {
    fn exponents(&self, w: &Word) -> Vec<i64> {
        let mut e = vec![0i64; self.rank];
        for l in w.letters() {
            e[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        e
    }
}

impl WordProblem for AbelianWp {
    fn generator_count(&self) -> usize {
        self.rank
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.exponents(w).iter().all(|&x| x == 0)
    }

    fn element_key(&self, w: &Word) -> Option<ElementKey> {
        Some(self.exponents(w))
    }

    // Shortlex-least word: generators in declaration order, one sign each.
    fn shortlex_form(&self, w: &Word) -> Option<Word> {
        let mut letters = Vec::new();
        for (g, &x) in self.exponents(w).iter().enumerate() {
            let l = Letter::new(g, x < 0);
            letters.extend(std::iter::repeat_n(l, x.unsigned_abs() as usize));
        }
        Some(Word(letters))
    }

    fn shortlex_automaton(&self) -> Option<ShortlexAutomaton> {
        let k = 2 * self.rank;
        // state 0: start; state 1 + code: last letter had that code
        let mut transitions = vec![vec![None; k]; k + 1];
        for code in 0..k {
            transitions[0][code] = Some(1 + code);
        }
        for last in 0..k {
            for code in 0..k {
                let (lg, cg) = (last / 2, code / 2);
                if cg > lg || code == last {
                    transitions[1 + last][code] = Some(1 + code);
                }
            }
        }
        Some(ShortlexAutomaton::new(k, 0, transitions, vec![true; k + 1]))
    }
}

/// Free product of cyclic groups, one generator per factor. Order 0 is an
/// infinite cyclic factor, so `[0, 0]` is the free group of rank two.
#[derive(Debug, Clone)]
pub struct FreeProductWp {
    pub orders: Vec<u32>,
}

impl FreeProductWp {
    // representative exponent in (-n/2, n/2]
    fn normalize(&self, generator: usize, e: i64) -> i64 {
        let n = self.orders[generator] as i64;
        if n == 0 {
            return e;
        }
        let r = e.rem_euclid(n);
        if 2 * r > n {
            r - n
        } else {
            r
        }
    }

    /// Reduced syllable sequence (generator, exponent).
    pub fn syllables(&self, w: &Word) -> Vec<(usize, i64)> {
        let mut stack: Vec<(usize, i64)> = Vec::new();
        for l in w.letters() {
            let g = l.generator();
            let step = if l.is_inverse() { -1 } else { 1 };
            match stack.last_mut() {
                Some(top) if top.0 == g => {
                    top.1 = self.normalize(g, top.1 + step);
                    if top.1 == 0 {
                        stack.pop();
                    }
                }
                _ => {
                    let e = self.normalize(g, step);
                    if e != 0 {
                        stack.push((g, e));
                    }
                }
            }
        }
        stack
    }

    // longest run allowed in a canonical word for (generator, sign)
    fn max_run(&self, generator: usize, inverse: bool) -> Option<usize> {
        let n = self.orders[generator] as usize;
        match (n, inverse) {
            (0, _) => None,
            (n, false) => Some(n / 2),
            (n, true) => Some((n - 1) / 2),
        }
    }
}

impl WordProblem for FreeProductWp {
    fn generator_count(&self) -> usize {
        self.orders.len()
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.syllables(w).is_empty()
    }

    fn element_key(&self, w: &Word) -> Option<ElementKey> {
        Some(self.syllables(w).into_iter().flat_map(|(g, e)| [g as i64, e]).collect())
    }

    fn shortlex_form(&self, w: &Word) -> Option<Word> {
        let mut letters = Vec::new();
        for (g, e) in self.syllables(w) {
            letters.extend(std::iter::repeat_n(Letter::new(g, e < 0), e.unsigned_abs() as usize));
        }
        Some(Word(letters))
    }

    fn shortlex_automaton(&self) -> Option<ShortlexAutomaton> {
        let k = 2 * self.orders.len();
        // states: 0 = start, then (code, run length); unbounded runs use run 1
        let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
        let mut keys: Vec<(usize, usize)> = Vec::new();
        for code in 0..k {
            let l = Letter::from_code(code);
            let runs = self.max_run(l.generator(), l.is_inverse()).unwrap_or(1);
            for run in 1..=runs {
                ids.insert((code, run), keys.len() + 1);
                keys.push((code, run));
            }
        }
        let mut transitions = vec![vec![None; k]; keys.len() + 1];
        for code in 0..k {
            transitions[0][code] = ids.get(&(code, 1)).copied();
        }
        for (i, &(last, run)) in keys.iter().enumerate() {
            let last_l = Letter::from_code(last);
            for code in 0..k {
                let l = Letter::from_code(code);
                let next = if l.generator() != last_l.generator() {
                    ids.get(&(code, 1)).copied()
                } else if code == last {
                    match self.max_run(l.generator(), l.is_inverse()) {
                        None => Some(i + 1),
                        Some(_) => ids.get(&(code, run + 1)).copied(),
                    }
                } else {
                    None
                };
                transitions[i + 1][code] = next;
            }
        }
        let states = transitions.len();
        Some(ShortlexAutomaton::new(k, 0, transitions, vec![true; states]))
    }
}

/// BS(1,2) = <a, t | t a t^-1 = a^2>, realised as the affine maps
/// x -> 2^k x + r with dyadic r; a is x -> x + 1 and t is x -> 2x.
#[derive(Debug, Clone, Default)]
pub struct BaumslagSolitarWp;

/// x -> 2^scale x + numerator / 2^exponent, with `numerator` odd unless the
/// exponent is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineDyadic {
    pub scale: i64,
    pub numerator: BigInt,
    pub exponent: u64,
}

impl AffineDyadic {
    pub fn identity() -> Self {
        AffineDyadic { scale: 0, numerator: BigInt::zero(), exponent: 0 }
    }

    /// Right-multiplies by a generator: self ∘ letter.
    pub fn apply(&mut self, letter: Letter) {
        match (letter.generator(), letter.is_inverse()) {
            (0, inv) => {
                // translation by ±2^scale
                let sign: BigInt = if inv { -BigInt::one() } else { BigInt::one() };
                let shift = self.scale + self.exponent as i64;
                if shift >= 0 {
                    self.numerator += sign << (shift as usize);
                } else {
                    let extra = (-shift) as usize;
                    self.numerator = (&self.numerator << extra) + sign;
                    self.exponent += extra as u64;
                }
                self.normalize();
            }
            (_, inv) => self.scale += if inv { -1 } else { 1 },
        }
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        while self.exponent > 0 && (&self.numerator & BigInt::one()).is_zero() {
            self.numerator >>= 1usize;
            self.exponent -= 1;
        }
    }

    fn key(&self) -> ElementKey {
        let (sign, digits) = self.numerator.to_u64_digits();
        let mut key = vec![self.scale, self.exponent as i64, if self.numerator.is_negative() { -1 } else { sign as i64 }];
        key.extend(digits.into_iter().map(|d| d as i64));
        key
    }

    pub fn of_word(w: &Word) -> Self {
        let mut acc = AffineDyadic::identity();
        for &l in w.letters() {
            acc.apply(l);
        }
        acc
    }
}

impl WordProblem for BaumslagSolitarWp {
    fn generator_count(&self) -> usize {
        2
    }

    fn is_identity(&self, w: &Word) -> bool {
        AffineDyadic::of_word(w) == AffineDyadic::identity()
    }

    fn element_key(&self, w: &Word) -> Option<ElementKey> {
        Some(AffineDyadic::of_word(w).key())
    }

    fn element_keys_extending(&self, w: &Word, letters: &[Letter]) -> Option<Vec<ElementKey>> {
        let m = AffineDyadic::of_word(w);
        Some(
            letters
                .iter()
                .map(|&l| {
                    let mut x = m.clone();
                    x.apply(l);
                    x.key()
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_product_normalizes_exponents() {
        let g = FreeProductWp { orders: vec![2, 3] };
        assert_eq!(g.syllables(&Word::from_signed(&[-1])), vec![(0, 1)]);
        assert_eq!(g.syllables(&Word::from_signed(&[2, 2])), vec![(1, -1)]);
        assert!(g.is_identity(&Word::from_signed(&[1, 1, 2, 2, 2])));
        assert!(!g.is_identity(&Word::from_signed(&[1, 2])));
    }

    #[test]
    fn bs12_relation_holds() {
        let g = BaumslagSolitarWp;
        // t a t^-1 a^-2
        assert!(g.is_identity(&Word::from_signed(&[2, 1, -2, -1, -1])));
        // a t != t a
        assert!(!g.is_identity(&Word::from_signed(&[1, 2, -1, -2])));
        // t^-1 a^2 t = a
        assert!(g.is_identity(&Word::from_signed(&[-2, 1, 1, 2, -1])));
        // t^-1 a t is not in <a>
        let w = Word::from_signed(&[-2, 1, 2]);
        for n in -4..=4 {
            let an = Word::from_signed(&[1]).pow(n);
            assert!(!g.is_identity(&w.concat(&an.inverse())));
        }
    }

    #[test]
    fn abelian_automaton_accepts_sorted_words() {
        let g = AbelianWp { rank: 2 };
        let a = g.shortlex_automaton().unwrap();
        assert!(a.accepts(&Word::from_signed(&[1, 1, -2])));
        assert!(!a.accepts(&Word::from_signed(&[2, 1])));
        assert!(!a.accepts(&Word::from_signed(&[1, -1])));
    }
}

//! Normal forms for HNN extensions and amalgamated products over finite
//! subgroups, and membership in the infinite cyclic subgroup they provide.
//!
//! HNN convention: `t^-1 a t = phi(a)` for `a` in `A`, so a syllable after
//! `t^-1` is a representative of `A h` and one after `t` of `B h`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::groups::{builtin_group, cyclic_group, BuiltinGroup, GroupOracle, Letter, Numbering, Word};

/// Where a generator of the ambient group goes in an HNN extension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HnnLetter {
    Base(usize),
    Stable,
}

/// Where a generator of the ambient group goes in an amalgamated product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmalgamLetter {
    Left(usize),
    Right(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// A finite subgroup listed element by element.
#[derive(Debug, Clone)]
struct FiniteSubgroup {
    elements: Vec<Word>,
}

impl FiniteSubgroup {
    fn index_of(&self, g: &GroupOracle, h: &Word) -> Option<usize> {
        self.elements.iter().position(|a| g.equal(h, a))
    }

    /// `(i, rep)` with `h = elements[i] . rep` and `rep` the shortlex-least
    /// word of the coset `A h`.
    fn coset_split(&self, g: &GroupOracle, numbering: &Numbering, h: &Word) -> Result<(usize, Word)> {
        let mut best: Option<Word> = None;
        for a in &self.elements {
            let c = numbering.canonical(&a.concat(h))?;
            if best.as_ref().is_none_or(|b| c.cmp_shortlex(b).is_lt()) {
                best = Some(c);
            }
        }
        let rep = best.expect("subgroups contain the identity");
        let x = h.concat(&rep.inverse());
        let i = self.index_of(g, &x).ok_or_else(|| Error::InvalidData("subgroup is not closed".into()))?;
        Ok((i, rep))
    }
}

fn check_subgroup(g: &GroupOracle, sub: &[Word], label: &str) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidData(format!("{label}: {m}")));
    if sub.is_empty() || !g.wp(&sub[0]) {
        return bad("the first listed element must be the identity".into());
    }
    for w in sub {
        w.check_alphabet(g.generator_count())?;
    }
    let set = FiniteSubgroup { elements: sub.to_vec() };
    for (i, x) in sub.iter().enumerate() {
        for y in &sub[i + 1..] {
            if g.equal(x, y) {
                return bad("repeated element".into());
            }
        }
        for y in sub {
            if set.index_of(g, &x.concat(y)).is_none() {
                return bad("not closed under products".into());
            }
        }
    }
    if Numbering::new(g).to_word(sub.len() as crate::Vertex).is_err() {
        return bad("not a proper subgroup".into());
    }
    Ok(())
}

fn check_iso(left: &GroupOracle, right: &GroupOracle, a: &[Word], b: &[Word]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidData("associated subgroups differ in size".into()));
    }
    let fa = FiniteSubgroup { elements: a.to_vec() };
    let fb = FiniteSubgroup { elements: b.to_vec() };
    for i in 0..a.len() {
        for j in 0..a.len() {
            let p = fa.index_of(left, &a[i].concat(&a[j])).expect("closed");
            if fb.index_of(right, &b[i].concat(&b[j])) != Some(p) {
                return Err(Error::InvalidData("iso is not a homomorphism".into()));
            }
        }
    }
    Ok(())
}

/// Representatives `u_0 = 1, u_1, ...` of the right cosets `A u` in `g`,
/// each the shortlex-least word not in an earlier coset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetReps {
    pub reps: Vec<Word>,
    /// True when fewer than the requested number exist.
    pub truncated: bool,
}

pub fn coset_representatives(g: &GroupOracle, sub: &[Word], count: usize) -> Result<CosetReps> {
    let numbering = Numbering::new(g);
    let set = FiniteSubgroup { elements: sub.to_vec() };
    let mut reps: Vec<Word> = Vec::new();
    let mut n: crate::Vertex = 0;
    while reps.len() < count {
        let w = match numbering.to_word(n) {
            Ok(w) => w,
            Err(Error::IndexOutOfRange(_)) => return Ok(CosetReps { reps, truncated: true }),
            Err(e) => return Err(e),
        };
        n += 1;
        if !reps.iter().any(|u| set.index_of(g, &w.concat(&u.inverse())).is_some()) {
            reps.push(w);
        }
    }
    Ok(CosetReps { reps, truncated: false })
}

/// `G = H *_phi` with a finite associated pair `A -> B`.
#[derive(Debug, Clone)]
pub struct HnnData {
    group: GroupOracle,
    base: GroupOracle,
    letters: Vec<HnnLetter>,
    sub_a: FiniteSubgroup,
    sub_b: FiniteSubgroup,
    numbering: Numbering,
}

/// `G = H *_phi K` with a finite associated pair `A -> B`.
#[derive(Debug, Clone)]
pub struct AmalgamData {
    group: GroupOracle,
    left: GroupOracle,
    right: GroupOracle,
    letters: Vec<AmalgamLetter>,
    sub_a: FiniteSubgroup,
    sub_b: FiniteSubgroup,
    numberings: [Numbering; 2],
    designated: (Word, Word),
}

impl HnnData {
    /// `a[i] -> b[i]` defines the isomorphism; `letters[j]` says where
    /// generator `j` of `group` goes.
    pub fn new(group: GroupOracle, base: GroupOracle, letters: Vec<HnnLetter>, a: Vec<Word>, b: Vec<Word>) -> Result<Self> {
        if letters.len() != group.generator_count() {
            return Err(Error::InvalidData("letter map does not cover the generators".into()));
        }
        let stable = letters.iter().filter(|l| **l == HnnLetter::Stable).count();
        let mut bases: Vec<usize> = letters.iter().filter_map(|l| if let HnnLetter::Base(i) = l { Some(*i) } else { None }).collect();
        bases.sort_unstable();
        if stable != 1 || bases != (0..base.generator_count()).collect::<Vec<_>>() {
            return Err(Error::InvalidData("letter map must be a bijection onto the base generators and t".into()));
        }
        check_subgroup(&base, &a, "A")?;
        check_subgroup(&base, &b, "B")?;
        check_iso(&base, &base, &a, &b)?;
        let numbering = Numbering::new(&base);
        Ok(HnnData { group, base, letters, sub_a: FiniteSubgroup { elements: a }, sub_b: FiniteSubgroup { elements: b }, numbering })
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn base(&self) -> &GroupOracle {
        &self.base
    }

    fn stable_generator(&self) -> usize {
        self.letters.iter().position(|l| *l == HnnLetter::Stable).unwrap()
    }

    fn ambient_of_base(&self, i: usize) -> usize {
        self.letters.iter().position(|l| *l == HnnLetter::Base(i)).unwrap()
    }

    fn lift(&self, h: &Word) -> Word {
        Word(h.letters().iter().map(|l| Letter::new(self.ambient_of_base(l.generator()), l.is_inverse())).collect())
    }

    /// Stable letter as a word of the ambient group.
    pub fn stable_word(&self) -> Word {
        Word(vec![Letter::new(self.stable_generator(), false)])
    }

    fn sub(&self, eps: i8) -> &FiniteSubgroup {
        if eps < 0 {
            &self.sub_a
        } else {
            &self.sub_b
        }
    }

    // phi for eps = -1 (A -> B), phi^-1 for eps = +1 (B -> A)
    fn carry(&self, eps: i8, i: usize) -> &Word {
        if eps < 0 {
            &self.sub_b.elements[i]
        } else {
            &self.sub_a.elements[i]
        }
    }

    fn reduce(&self, w: &Word) -> Result<NormalForm> {
        w.check_alphabet(self.group.generator_count())?;
        let mut h0 = Word::empty();
        let mut steps: Vec<(i8, Word)> = Vec::new();
        for &l in w.letters() {
            match self.letters[l.generator()] {
                HnnLetter::Base(i) => {
                    let target = steps.last_mut().map(|s| &mut s.1).unwrap_or(&mut h0);
                    target.push(Letter::new(i, l.is_inverse()));
                }
                HnnLetter::Stable => {
                    let eps: i8 = if l.is_inverse() { -1 } else { 1 };
                    let pinch = match steps.last() {
                        Some((e, h)) if *e == -eps => self.sub(*e).index_of(&self.base, h),
                        _ => None,
                    };
                    match pinch {
                        Some(i) => {
                            let (e, _) = steps.pop().unwrap();
                            let image = self.carry(e, i).clone();
                            let target = steps.last_mut().map(|s| &mut s.1).unwrap_or(&mut h0);
                            *target = target.concat(&image);
                        }
                        None => steps.push((eps, Word::empty())),
                    }
                }
            }
        }
        for k in (0..steps.len()).rev() {
            let (eps, h) = steps[k].clone();
            let (i, rep) = self.sub(eps).coset_split(&self.base, &self.numbering, &h)?;
            steps[k].1 = rep;
            let image = self.carry(eps, i).clone();
            let target = if k == 0 { &mut h0 } else { &mut steps[k - 1].1 };
            *target = target.concat(&image);
        }
        let h0 = self.numbering.canonical(&h0)?;
        Ok(NormalForm::Hnn { h0, steps })
    }

    fn product(&self, nf: &NormalForm) -> Result<Word> {
        let NormalForm::Hnn { h0, steps } = nf else {
            return Err(Error::WrongMode("HNN"));
        };
        let mut w = self.lift(h0);
        let t = self.stable_word();
        for (eps, h) in steps {
            w = w.concat(&if *eps < 0 { t.inverse() } else { t.clone() }).concat(&self.lift(h));
        }
        Ok(w)
    }

    fn is_normal(&self, nf: &NormalForm) -> Result<bool> {
        let NormalForm::Hnn { h0, steps } = nf else {
            return Ok(false);
        };
        if self.numbering.canonical(h0)? != *h0 {
            return Ok(false);
        }
        for (k, (eps, h)) in steps.iter().enumerate() {
            if self.sub(*eps).coset_split(&self.base, &self.numbering, h)?.1 != *h {
                return Ok(false);
            }
            if h.is_empty() && steps.get(k + 1).is_some_and(|(e, _)| *e == -eps) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Candidate sequences with components of length at most `r`.
    fn candidates(&self, w: &Word, r: usize, fuel: &mut Fuel) -> Result<Vec<NormalForm>> {
        let t = self.stable_generator();
        let max_steps = w.letters().iter().filter(|l| l.generator() == t).count();
        let exp: i64 = w.letters().iter().filter(|l| l.generator() == t).map(|l| if l.is_inverse() { -1 } else { 1 }).sum();
        let h_words = words_up_to(&self.numbering, r)?;
        let reps = |sub: &FiniteSubgroup| -> Result<Vec<Word>> {
            Ok(words_up_to(&self.numbering, r)?
                .into_iter()
                .filter(|u| sub.coset_split(&self.base, &self.numbering, u).map(|(_, rep)| rep == *u).unwrap_or(false))
                .collect())
        };
        let (reps_a, reps_b) = (reps(&self.sub_a)?, reps(&self.sub_b)?);
        let mut out = Vec::new();
        for n in 0..=max_steps {
            for signs in 0..(1u64 << n) {
                let eps: Vec<i8> = (0..n).map(|i| if signs >> i & 1 == 1 { -1 } else { 1 }).collect();
                if eps.iter().map(|&e| e as i64).sum::<i64>() != exp {
                    continue;
                }
                for h0 in &h_words {
                    let mut partial = vec![Vec::new()];
                    for &e in &eps {
                        let choices = if e < 0 { &reps_a } else { &reps_b };
                        let mut next = Vec::new();
                        for p in &partial {
                            for c in choices {
                                fuel.spend(1)?;
                                let mut q: Vec<(i8, Word)> = p.clone();
                                q.push((e, c.clone()));
                                next.push(q);
                            }
                        }
                        partial = next;
                    }
                    for steps in partial {
                        let nf = NormalForm::Hnn { h0: h0.clone(), steps };
                        if self.is_normal(&nf)? {
                            out.push(nf);
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn words_up_to(numbering: &Numbering, r: usize) -> Result<Vec<Word>> {
    numbering.words_up_to_length(r)
}

impl AmalgamData {
    /// `u`, `v` are the nontrivial representatives whose product generates
    /// the cyclic subgroup.
    pub fn new(
        group: GroupOracle,
        left: GroupOracle,
        right: GroupOracle,
        letters: Vec<AmalgamLetter>,
        a: Vec<Word>,
        b: Vec<Word>,
        designated: (Word, Word),
    ) -> Result<Self> {
        if letters.len() != group.generator_count() {
            return Err(Error::InvalidData("letter map does not cover the generators".into()));
        }
        let mut ls: Vec<usize> = letters.iter().filter_map(|l| if let AmalgamLetter::Left(i) = l { Some(*i) } else { None }).collect();
        let mut rs: Vec<usize> = letters.iter().filter_map(|l| if let AmalgamLetter::Right(i) = l { Some(*i) } else { None }).collect();
        ls.sort_unstable();
        rs.sort_unstable();
        if ls != (0..left.generator_count()).collect::<Vec<_>>() || rs != (0..right.generator_count()).collect::<Vec<_>>() {
            return Err(Error::InvalidData("letter map must be a bijection onto the factor generators".into()));
        }
        check_subgroup(&left, &a, "A")?;
        check_subgroup(&right, &b, "B")?;
        check_iso(&left, &right, &a, &b)?;
        let numberings = [Numbering::new(&left), Numbering::new(&right)];
        let data = AmalgamData {
            group,
            left,
            right,
            letters,
            sub_a: FiniteSubgroup { elements: a },
            sub_b: FiniteSubgroup { elements: b },
            numberings,
            designated: (Word::empty(), Word::empty()),
        };
        let (u, v) = designated;
        let u_rep = data.sub_a.coset_split(&data.left, &data.numberings[0], &u)?;
        let v_rep = data.sub_b.coset_split(&data.right, &data.numberings[1], &v)?;
        if u_rep.1 != u || v_rep.1 != v || u.is_empty() || v.is_empty() {
            return Err(Error::InvalidData("designated elements must be nontrivial coset representatives".into()));
        }
        Ok(AmalgamData { designated: (u, v), ..data })
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    fn factor(&self, s: Side) -> &GroupOracle {
        match s {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn numbering(&self, s: Side) -> &Numbering {
        &self.numberings[s as usize]
    }

    fn sub(&self, s: Side) -> &FiniteSubgroup {
        match s {
            Side::Left => &self.sub_a,
            Side::Right => &self.sub_b,
        }
    }

    fn ambient_letter(&self, s: Side, i: usize) -> usize {
        let target = match s {
            Side::Left => AmalgamLetter::Left(i),
            Side::Right => AmalgamLetter::Right(i),
        };
        self.letters.iter().position(|l| *l == target).unwrap()
    }

    fn lift(&self, s: Side, h: &Word) -> Word {
        Word(h.letters().iter().map(|l| Letter::new(self.ambient_letter(s, l.generator()), l.is_inverse())).collect())
    }

    /// Generator `u v` of the cyclic subgroup, as an ambient word.
    pub fn designated_word(&self) -> Word {
        self.lift(Side::Left, &self.designated.0).concat(&self.lift(Side::Right, &self.designated.1))
    }

    // element i of the subgroup on side s, written on the other side
    fn carry(&self, s: Side, i: usize) -> &Word {
        &self.sub(s.other()).elements[i]
    }

    fn reduce(&self, w: &Word) -> Result<NormalForm> {
        w.check_alphabet(self.group.generator_count())?;
        // c0 is kept as an element of A, written on the left
        let mut c0 = Word::empty();
        let mut stack: Vec<(Side, Word)> = Vec::new();
        for &l in w.letters() {
            let (side, i) = match self.letters[l.generator()] {
                AmalgamLetter::Left(i) => (Side::Left, i),
                AmalgamLetter::Right(i) => (Side::Right, i),
            };
            let letter = Letter::new(i, l.is_inverse());
            match stack.last_mut() {
                Some((s, h)) if *s == side => h.push(letter),
                _ => stack.push((side, Word(vec![letter]))),
            }
            // collapse syllables that fell into the amalgamated subgroup
            while let Some((s, h)) = stack.last() {
                let Some(i) = self.sub(*s).index_of(self.factor(*s), h) else { break };
                let s = *s;
                stack.pop();
                match stack.last_mut() {
                    Some((_, prev)) => *prev = prev.concat(self.carry(s, i)),
                    None => {
                        c0 = c0.concat(&self.sub_a.elements[i]);
                    }
                }
            }
        }
        for k in (0..stack.len()).rev() {
            let (s, h) = stack[k].clone();
            let (i, rep) = self.sub(s).coset_split(self.factor(s), self.numbering(s), &h)?;
            stack[k].1 = rep;
            if k == 0 {
                c0 = c0.concat(&self.sub_a.elements[i]);
            } else {
                let prev = &mut stack[k - 1].1;
                *prev = prev.concat(self.carry(s, i));
            }
        }
        let c0 = self.numbering(Side::Left).canonical(&c0)?;
        Ok(NormalForm::Amalgam { c0, syllables: stack })
    }

    fn product(&self, nf: &NormalForm) -> Result<Word> {
        let NormalForm::Amalgam { c0, syllables } = nf else {
            return Err(Error::WrongMode("amalgam"));
        };
        let mut w = self.lift(Side::Left, c0);
        for (s, h) in syllables {
            w = w.concat(&self.lift(*s, h));
        }
        Ok(w)
    }

    fn is_normal(&self, nf: &NormalForm) -> Result<bool> {
        let NormalForm::Amalgam { c0, syllables } = nf else {
            return Ok(false);
        };
        if self.sub_a.index_of(&self.left, c0).is_none() || self.numbering(Side::Left).canonical(c0)? != *c0 {
            return Ok(false);
        }
        for (k, (s, h)) in syllables.iter().enumerate() {
            if h.is_empty() || (k > 0 && syllables[k - 1].0 == *s) {
                return Ok(false);
            }
            if self.sub(*s).coset_split(self.factor(*s), self.numbering(*s), h)?.1 != *h {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn candidates(&self, w: &Word, r: usize, fuel: &mut Fuel) -> Result<Vec<NormalForm>> {
        let mut max_syllables = 0;
        let mut last: Option<bool> = None;
        for l in w.letters() {
            let left = matches!(self.letters[l.generator()], AmalgamLetter::Left(_));
            if last != Some(left) {
                max_syllables += 1;
                last = Some(left);
            }
        }
        let reps = |s: Side| -> Result<Vec<Word>> {
            let sub = self.sub(s);
            Ok(words_up_to(self.numbering(s), r)?
                .into_iter()
                .filter(|u| !u.is_empty() && sub.coset_split(self.factor(s), self.numbering(s), u).map(|(_, rep)| rep == *u).unwrap_or(false))
                .collect())
        };
        let both = [reps(Side::Left)?, reps(Side::Right)?];
        let c0s: Vec<Word> = self.sub_a.elements.iter().map(|a| self.numbering(Side::Left).canonical(a)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for n in 0..=max_syllables {
            for first in [Side::Left, Side::Right] {
                if n == 0 && first == Side::Right {
                    continue;
                }
                let mut partial: Vec<Vec<(Side, Word)>> = vec![Vec::new()];
                for k in 0..n {
                    let s = if k % 2 == 0 { first } else { first.other() };
                    let mut next = Vec::new();
                    for p in &partial {
                        for c in &both[s as usize] {
                            fuel.spend(1)?;
                            let mut q = p.clone();
                            q.push((s, c.clone()));
                            next.push(q);
                        }
                    }
                    partial = next;
                }
                for syllables in partial {
                    for c0 in &c0s {
                        out.push(NormalForm::Amalgam { c0: c0.clone(), syllables: syllables.clone() });
                    }
                }
            }
        }
        Ok(out)
    }
}

/// A normal-form sequence. HNN: `h0, t^e1, h1, ..., t^en, hn` with words
/// over the base group. Amalgam: `c0, c1, ..., cn` with `c0` in `A`
/// (written over the left factor) and each later syllable tagged by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NormalForm {
    Hnn { h0: Word, steps: Vec<(i8, Word)> },
    Amalgam { c0: Word, syllables: Vec<(Side, Word)> },
}

impl NormalForm {
    /// Number of stable letters or nontrivial syllables.
    pub fn length(&self) -> usize {
        match self {
            NormalForm::Hnn { steps, .. } => steps.len(),
            NormalForm::Amalgam { syllables, .. } => syllables.len(),
        }
    }
}

/// A decomposition of a group with two or more ends.
#[derive(Debug, Clone)]
pub enum Splitting {
    Hnn(HnnData),
    Amalgam(AmalgamData),
}

impl Splitting {
    pub fn group(&self) -> &GroupOracle {
        match self {
            Splitting::Hnn(d) => &d.group,
            Splitting::Amalgam(d) => &d.group,
        }
    }

    /// Generator `c` of the infinite cyclic subgroup: `t`, or `u v`.
    pub fn cyclic_generator(&self) -> Word {
        match self {
            Splitting::Hnn(d) => d.stable_word(),
            Splitting::Amalgam(d) => d.designated_word(),
        }
    }

    pub fn product(&self, nf: &NormalForm) -> Result<Word> {
        match self {
            Splitting::Hnn(d) => d.product(nf),
            Splitting::Amalgam(d) => d.product(nf),
        }
    }

    pub fn is_normal(&self, nf: &NormalForm) -> Result<bool> {
        match self {
            Splitting::Hnn(d) => d.is_normal(nf),
            Splitting::Amalgam(d) => d.is_normal(nf),
        }
    }

    /// The unique normal form equal to `w`. Reduction proposes it, the
    /// ambient word problem confirms it, and exhaustive search takes over if
    /// the confirmation fails.
    pub fn normal_form(&self, w: &Word, fuel: &mut Fuel) -> Result<NormalForm> {
        fuel.spend(w.len() as u64 + 1)?;
        let candidate = match self {
            Splitting::Hnn(d) => d.reduce(w)?,
            Splitting::Amalgam(d) => d.reduce(w)?,
        };
        if self.group().equal(&self.product(&candidate)?, w) && self.is_normal(&candidate)? {
            return Ok(candidate);
        }
        self.normal_form_by_search(w, fuel)
    }

    /// Enumerate-and-test: rounds by maximal component length; within a
    /// round candidates go by syllable count, total length, then shortlex
    /// order of their product.
    pub fn normal_form_by_search(&self, w: &Word, fuel: &mut Fuel) -> Result<NormalForm> {
        w.check_alphabet(self.group().generator_count())?;
        for r in 0.. {
            let mut cands = match self {
                Splitting::Hnn(d) => d.candidates(w, r, fuel)?,
                Splitting::Amalgam(d) => d.candidates(w, r, fuel)?,
            };
            let mut keyed: Vec<(usize, usize, Word, NormalForm)> = Vec::with_capacity(cands.len());
            for nf in cands.drain(..) {
                let p = self.product(&nf)?;
                keyed.push((nf.length(), p.len(), p, nf));
            }
            keyed.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then_with(|| x.2.cmp_shortlex(&y.2)));
            for (_, _, p, nf) in keyed {
                fuel.spend(1)?;
                if self.group().equal(&p, w) {
                    return Ok(nf);
                }
            }
        }
        unreachable!("the search over rounds is unbounded")
    }

    fn cyclic_pattern(&self, nf: &NormalForm) -> Option<usize> {
        match (self, nf) {
            (Splitting::Hnn(_), NormalForm::Hnn { h0, steps }) => (h0.is_empty() && steps.iter().all(|(e, h)| *e == 1 && h.is_empty())).then_some(steps.len()),
            (Splitting::Amalgam(d), NormalForm::Amalgam { c0, syllables }) => {
                let (u, v) = &d.designated;
                let ok = c0.is_empty()
                    && syllables.len() % 2 == 0
                    && syllables.chunks(2).all(|p| p[0] == (Side::Left, u.clone()) && p[1] == (Side::Right, v.clone()));
                ok.then_some(syllables.len() / 2)
            }
            _ => None,
        }
    }

    /// `Some(n)` when `w = c^n`.
    pub fn cyclic_power(&self, w: &Word, fuel: &mut Fuel) -> Result<Option<i64>> {
        if let Some(n) = self.cyclic_pattern(&self.normal_form(w, fuel)?) {
            return Ok(Some(n as i64));
        }
        Ok(self.cyclic_pattern(&self.normal_form(&w.inverse(), fuel)?).map(|n| -(n as i64)))
    }

    pub fn format(&self, nf: &NormalForm) -> String {
        let one = |s: String| if s.is_empty() || s == "1" { "1".to_string() } else { s };
        match (self, nf) {
            (Splitting::Hnn(d), NormalForm::Hnn { h0, steps }) => {
                let t = d.group.generator_names()[d.stable_generator()].clone();
                let mut parts = vec![one(d.base.format_word(h0))];
                for (e, h) in steps {
                    parts.push(if *e < 0 { format!("{t}^-1") } else { t.clone() });
                    parts.push(one(d.base.format_word(h)));
                }
                format!("({})", parts.join(", "))
            }
            (Splitting::Amalgam(d), NormalForm::Amalgam { c0, syllables }) => {
                let mut parts = vec![one(d.left.format_word(c0))];
                for (s, h) in syllables {
                    parts.push(d.factor(*s).format_word(h));
                }
                format!("({})", parts.join(", "))
            }
            _ => "(?)".into(),
        }
    }
}

/// Membership of `w` in the infinite cyclic subgroup of the splitting.
pub fn z_subgroup_membership(s: &Splitting, w: &Word, fuel: &mut Fuel) -> Result<bool> {
    Ok(s.cyclic_power(w, fuel)?.is_some())
}

pub fn hnn_normal_form(d: &HnnData, w: &Word, fuel: &mut Fuel) -> Result<NormalForm> {
    Splitting::Hnn(d.clone()).normal_form(w, fuel)
}

pub fn amalgam_normal_form(d: &AmalgamData, w: &Word, fuel: &mut Fuel) -> Result<NormalForm> {
    Splitting::Amalgam(d.clone()).normal_form(w, fuel)
}

/// The splittings shipped with the many-ended built-ins: `Z2 * Z` and `F2`
/// as HNN extensions over trivial subgroups (stable letters `t` and `a`),
/// `Z2 * Z3` as an amalgam over the trivial subgroup with `u = a`, `v = b`.
pub fn builtin_splitting(name: BuiltinGroup) -> Result<Splitting> {
    let g = builtin_group(name)?;
    let one = || vec![Word::empty()];
    match name {
        BuiltinGroup::Z2Hnn => Ok(Splitting::Hnn(HnnData::new(g, cyclic_group(2, "a")?, vec![HnnLetter::Base(0), HnnLetter::Stable], one(), one())?)),
        BuiltinGroup::FreeF2 => Ok(Splitting::Hnn(HnnData::new(g, cyclic_group(0, "b")?, vec![HnnLetter::Stable, HnnLetter::Base(0)], one(), one())?)),
        BuiltinGroup::Z2StarZ3 => Ok(Splitting::Amalgam(AmalgamData::new(
            g,
            cyclic_group(2, "a")?,
            cyclic_group(3, "b")?,
            vec![AmalgamLetter::Left(0), AmalgamLetter::Right(0)],
            one(),
            one(),
            (Word::from_signed(&[1]), Word::from_signed(&[1])),
        )?)),
        _ => Err(Error::InvalidData(format!("{name} ships no splitting"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(s: &Splitting, text: &str) -> String {
        let w = s.group().parse_word(text).unwrap();
        s.format(&s.normal_form(&w, &mut Fuel::default()).unwrap())
    }

    fn member(s: &Splitting, text: &str) -> bool {
        let w = s.group().parse_word(text).unwrap();
        z_subgroup_membership(s, &w, &mut Fuel::default()).unwrap()
    }

    #[test]
    fn coset_representative_examples() {
        let z2 = cyclic_group(2, "a").unwrap();
        let z3 = cyclic_group(3, "b").unwrap();
        let r = coset_representatives(&z2, &[Word::empty()], 2).unwrap();
        assert_eq!(r.reps, vec![Word::empty(), Word::from_signed(&[1])]);
        let r = coset_representatives(&z2, &[Word::empty(), Word::from_signed(&[1])], 2).unwrap();
        assert_eq!(r.reps, vec![Word::empty()]);
        assert!(r.truncated);
        let r = coset_representatives(&z3, &[Word::empty()], 3).unwrap();
        assert_eq!(r.reps, vec![Word::empty(), Word::from_signed(&[1]), Word::from_signed(&[-1])]);
    }

    #[test]
    fn hnn_examples() {
        let s = builtin_splitting(BuiltinGroup::Z2Hnn).unwrap();
        assert_eq!(nf(&s, "t.t^-1.a"), "(a)");
        assert_eq!(nf(&s, "t.a.t^-1.a"), "(1, t, a, t^-1, a)");
        assert_eq!(nf(&s, "1"), "(1)");
        assert!(member(&s, "t^3"));
        assert!(!member(&s, "a.t"));
        assert!(member(&s, "t^-2"));
        assert!(member(&s, "1"));
    }

    #[test]
    fn amalgam_examples() {
        let s = builtin_splitting(BuiltinGroup::Z2StarZ3).unwrap();
        assert_eq!(nf(&s, "a.b.b^-1.a"), "(1)");
        assert_eq!(nf(&s, "a.b"), "(1, a, b)");
        assert_eq!(nf(&s, "b.b"), "(1, b^-1)");
        assert!(member(&s, "a.b.a.b"));
        assert!(!member(&s, "a.b.a"));
        assert!(member(&s, "b^-1.a"));
    }

    #[test]
    fn nontrivial_associated_subgroups() {
        // Z4 *_{Z2} Z6, amalgamating a^2 with b^3
        let left = cyclic_group(4, "a").unwrap();
        let right = cyclic_group(6, "b").unwrap();
        let g = GroupOracle::new("Z4*Z6", vec!["a".into(), "b".into()], std::sync::Arc::new(AmalgamWp), crate::groups::Ends::Many, None).unwrap();
        let d = AmalgamData::new(
            g,
            left,
            right,
            vec![AmalgamLetter::Left(0), AmalgamLetter::Right(0)],
            vec![Word::empty(), Word::from_signed(&[1, 1])],
            vec![Word::empty(), Word::from_signed(&[1, 1, 1])],
            (Word::from_signed(&[1]), Word::from_signed(&[1])),
        )
        .unwrap();
        let s = Splitting::Amalgam(d);
        assert_eq!(nf(&s, "a.a.b.b.b"), "(1)");
        assert_eq!(nf(&s, "b.b.b"), "(a.a)");
        assert_eq!(nf(&s, "b^3.a"), "(a.a, a)");
        let mut fuel = Fuel::default();
        for text in ["a.b.a.b^2", "b^-1.a^3.b", "a^2.b.a^2.b^-1", "b.a.b^3.a"] {
            let w = s.group().parse_word(text).unwrap();
            let fast = s.normal_form(&w, &mut fuel).unwrap();
            assert_eq!(fast, s.normal_form_by_search(&w, &mut fuel).unwrap(), "{text}");
        }
    }

    // z = a^2 = b^3 is central of order 2 and the quotient is Z2 * Z3
    #[derive(Debug)]
    struct AmalgamWp;

    impl crate::groups::WordProblem for AmalgamWp {
        fn generator_count(&self) -> usize {
            2
        }

        fn is_identity(&self, w: &Word) -> bool {
            // a^2 = b^3 is central of order 2; a^4 = b^6 = 1
            let mut syll: Vec<(usize, i64)> = Vec::new();
            let mut z = 0i64;
            for l in w.letters() {
                let e = if l.is_inverse() { -1 } else { 1 };
                match syll.last_mut() {
                    Some((g, p)) if *g == l.generator() => *p += e,
                    _ => syll.push((l.generator(), e)),
                }
                loop {
                    let Some(&(g, p)) = syll.last() else { break };
                    let half = if g == 0 { 2 } else { 3 };
                    let q = p.rem_euclid(half);
                    z += (p - q) / half;
                    syll.last_mut().unwrap().1 = q;
                    if q != 0 {
                        break;
                    }
                    syll.pop();
                    if syll.len() >= 2 {
                        let (g2, p2) = syll.pop().unwrap();
                        match syll.last_mut() {
                            Some((g1, p1)) if *g1 == g2 => *p1 += p2,
                            _ => syll.push((g2, p2)),
                        }
                    } else {
                        break;
                    }
                }
            }
            syll.is_empty() && z.rem_euclid(2) == 0
        }
    }

    #[test]
    fn reduction_agrees_with_search_on_short_words() {
        for name in [BuiltinGroup::Z2Hnn, BuiltinGroup::FreeF2, BuiltinGroup::Z2StarZ3] {
            let s = builtin_splitting(name).unwrap();
            let numbering = Numbering::new(s.group());
            let mut fuel = Fuel::unlimited();
            for w in numbering.words_up_to_length(4).unwrap() {
                let fast = s.normal_form(&w, &mut fuel).unwrap();
                assert_eq!(fast, s.normal_form_by_search(&w, &mut fuel).unwrap(), "{name} {w:?}");
            }
        }
    }
}

//! Finitely generated groups given by word-problem oracles, their canonical
//! shortlex numberings, and the built-in test corpus.

mod automaton;
mod builtin;
mod numbering;
mod word;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use automaton::ShortlexAutomaton;
pub use builtin::{AbelianWp, AffineDyadic, BaumslagSolitarWp, FreeProductWp};
pub use numbering::{canonical_numbering, translate_index, Numbering};
pub use word::{Letter, Word, WordDisplay};

/// Hashable invariant of a group element: equal keys iff equal elements.
pub type ElementKey = Vec<i64>;

/// A total decision procedure for the word problem.
///
/// Implementations must be reentrant. The optional methods are
/// accelerators; every consumer falls back to [`WordProblem::is_identity`].
pub trait WordProblem: Send + Sync + fmt::Debug {
    fn generator_count(&self) -> usize;

    fn is_identity(&self, w: &Word) -> bool;

    fn element_key(&self, _w: &Word) -> Option<ElementKey> {
        None
    }

    /// Keys of `w . l` for each letter `l`.
    fn element_keys_extending(&self, w: &Word, letters: &[Letter]) -> Option<Vec<ElementKey>> {
        letters
            .iter()
            .map(|&l| {
                let mut x = w.clone();
                x.push(l);
                self.element_key(&x)
            })
            .collect()
    }

    /// The shortlex-least word representing the same element.
    fn shortlex_form(&self, _w: &Word) -> Option<Word> {
        None
    }

    /// Automaton accepting exactly the shortlex-least words.
    fn shortlex_automaton(&self) -> Option<ShortlexAutomaton> {
        None
    }
}

/// Relabels the generators of another oracle: generator `i` here is
/// generator `order[i]` of the inner group.
#[derive(Debug, Clone)]
pub struct PermutedGenerators {
    inner: Arc<dyn WordProblem>,
    order: Vec<usize>,
}

impl PermutedGenerators {
    pub fn new(inner: Arc<dyn WordProblem>, order: Vec<usize>) -> Result<Self> {
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted != (0..inner.generator_count()).collect::<Vec<_>>() {
            return Err(Error::InvalidData("generator order is not a permutation".into()));
        }
        Ok(PermutedGenerators { inner, order })
    }

    pub fn to_inner(&self, w: &Word) -> Word {
        Word(w.letters().iter().map(|l| Letter::new(self.order[l.generator()], l.is_inverse())).collect())
    }
}

impl WordProblem for PermutedGenerators {
    fn generator_count(&self) -> usize {
        self.order.len()
    }

    fn is_identity(&self, w: &Word) -> bool {
        self.inner.is_identity(&self.to_inner(w))
    }

    fn element_key(&self, w: &Word) -> Option<ElementKey> {
        self.inner.element_key(&self.to_inner(w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ends {
    One,
    Two,
    Many,
}

/// Two-ended certificate in terms of words; see [`EndsCertificate`] for
/// the vertex-name form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordCertificate {
    pub separator: Vec<Word>,
    pub side_a: Vec<Word>,
    pub side_b: Vec<Word>,
}

/// A finite separator whose complement has two infinite components, with
/// boundary vertices known to lie in each of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndsCertificate {
    pub separator: Vec<crate::Vertex>,
    pub side_a: Vec<crate::Vertex>,
    pub side_b: Vec<crate::Vertex>,
}

impl EndsCertificate {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidData(format!("ends certificate: {msg}")));
        if self.side_a.is_empty() || self.side_b.is_empty() {
            return bad("empty side");
        }
        if self.side_a.iter().any(|v| self.side_b.contains(v)) {
            return bad("sides intersect");
        }
        if self.side_a.iter().chain(&self.side_b).any(|v| self.separator.contains(v)) {
            return bad("side meets separator");
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct GroupOracle {
    name: String,
    generator_names: Vec<String>,
    wp: Arc<dyn WordProblem>,
    declared_ends: Ends,
    certificate: Option<WordCertificate>,
}

impl fmt::Debug for GroupOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupOracle").field("name", &self.name).field("generators", &self.generator_names).field("ends", &self.declared_ends).finish()
    }
}

impl GroupOracle {
    pub fn new(
        name: impl Into<String>,
        generator_names: Vec<String>,
        wp: Arc<dyn WordProblem>,
        declared_ends: Ends,
        certificate: Option<WordCertificate>,
    ) -> Result<Self> {
        if generator_names.is_empty() || generator_names.len() != wp.generator_count() {
            return Err(Error::InvalidData("generator names do not match the oracle".into()));
        }
        if declared_ends == Ends::Two && certificate.is_none() {
            return Err(Error::MissingCertificate);
        }
        let oracle = GroupOracle { name: name.into(), generator_names, wp, declared_ends, certificate };
        if let Some(c) = &oracle.certificate {
            for w in c.separator.iter().chain(&c.side_a).chain(&c.side_b) {
                w.check_alphabet(oracle.generator_count())?;
            }
        }
        Ok(oracle)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn declared_ends(&self) -> Ends {
        self.declared_ends
    }

    pub fn word_certificate(&self) -> Option<&WordCertificate> {
        self.certificate.as_ref()
    }

    pub fn strategy(&self) -> &Arc<dyn WordProblem> {
        &self.wp
    }

    /// True iff `w` represents the identity.
    pub fn wp(&self, w: &Word) -> bool {
        self.wp.is_identity(w)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> bool {
        self.wp(&u.concat(&v.inverse()))
    }

    /// All letters `s_1, s_1^-1, s_2, ...` in shortlex order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..2 * self.generator_count()).map(Letter::from_code)
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let w = Word::parse(text, &self.generator_names)?;
        w.check_alphabet(self.generator_count())?;
        Ok(w)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.display(&self.generator_names).to_string()
    }
}

/// The built-in test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BuiltinGroup {
    Z,
    Z2,
    Zd(usize),
    FreeF2,
    Z2StarZ3,
    Z2Hnn,
    Bs12,
    /// Finite cyclic group; used as a factor in the extension instances.
    Cyclic(u32),
}

impl BuiltinGroup {
    pub const ALL_NAMED: [BuiltinGroup; 6] =
        [BuiltinGroup::Z, BuiltinGroup::Z2, BuiltinGroup::FreeF2, BuiltinGroup::Z2StarZ3, BuiltinGroup::Z2Hnn, BuiltinGroup::Bs12];
}

impl fmt::Display for BuiltinGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinGroup::Z => f.write_str("Z"),
            BuiltinGroup::Z2 => f.write_str("Z2"),
            BuiltinGroup::Zd(d) => write!(f, "Zd({d})"),
            BuiltinGroup::FreeF2 => f.write_str("FreeF2"),
            BuiltinGroup::Z2StarZ3 => f.write_str("Z2starZ3"),
            BuiltinGroup::Z2Hnn => f.write_str("Z2HNN"),
            BuiltinGroup::Bs12 => f.write_str("BS12"),
            BuiltinGroup::Cyclic(n) => write!(f, "Cyclic({n})"),
        }
    }
}

impl FromStr for BuiltinGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let arg = |prefix: &str| -> Option<u32> {
            let rest = lower.strip_prefix(prefix)?;
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            rest.parse().ok()
        };
        let g = match lower.as_str() {
            "z" => BuiltinGroup::Z,
            "z2" => BuiltinGroup::Z2,
            "freef2" | "f2" => BuiltinGroup::FreeF2,
            "z2starz3" => BuiltinGroup::Z2StarZ3,
            "z2hnn" => BuiltinGroup::Z2Hnn,
            "bs12" => BuiltinGroup::Bs12,
            _ => {
                if let Some(d) = arg("zd").filter(|&d| d >= 1) {
                    BuiltinGroup::Zd(d as usize)
                } else if let Some(n) = arg("cyclic").filter(|&n| n >= 1) {
                    BuiltinGroup::Cyclic(n)
                } else {
                    return Err(Error::UnknownGroup(s.to_string()));
                }
            }
        };
        Ok(g)
    }
}

fn names(n: &[&str]) -> Vec<String> {
    n.iter().map(|s| s.to_string()).collect()
}

fn abelian_names(d: usize) -> Vec<String> {
    if d <= 26 {
        (0..d).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=d).map(|i| format!("x{i}")).collect()
    }
}

/// Oracle for a built-in group with its known number of ends.
pub fn builtin_group(name: BuiltinGroup) -> Result<GroupOracle> {
    let label = name.to_string();
    match name {
        BuiltinGroup::Z => {
            let a = Word::from_signed(&[1]);
            let cert = WordCertificate { separator: vec![Word::empty()], side_a: vec![a.clone()], side_b: vec![a.inverse()] };
            GroupOracle::new(label, names(&["a"]), Arc::new(AbelianWp { rank: 1 }), Ends::Two, Some(cert))
        }
        BuiltinGroup::Z2 => GroupOracle::new(label, names(&["a", "b"]), Arc::new(AbelianWp { rank: 2 }), Ends::One, None),
        BuiltinGroup::Zd(0) => Err(Error::UnknownGroup(label)),
        BuiltinGroup::Zd(1) => builtin_group(BuiltinGroup::Z),
        BuiltinGroup::Zd(d) => GroupOracle::new(label, abelian_names(d), Arc::new(AbelianWp { rank: d }), Ends::One, None),
        BuiltinGroup::FreeF2 => GroupOracle::new(label, names(&["a", "b"]), Arc::new(FreeProductWp { orders: vec![0, 0] }), Ends::Many, None),
        BuiltinGroup::Z2StarZ3 => GroupOracle::new(label, names(&["a", "b"]), Arc::new(FreeProductWp { orders: vec![2, 3] }), Ends::Many, None),
        BuiltinGroup::Z2Hnn => GroupOracle::new(label, names(&["a", "t"]), Arc::new(FreeProductWp { orders: vec![2, 0] }), Ends::Many, None),
        BuiltinGroup::Bs12 => GroupOracle::new(label, names(&["a", "t"]), Arc::new(BaumslagSolitarWp), Ends::One, None),
        BuiltinGroup::Cyclic(0) => Err(Error::UnknownGroup(label)),
        // finite groups have zero ends; `Many` only marks them as non-transitive inputs
        BuiltinGroup::Cyclic(n) => cyclic_group(n, "a"),
    }
}

/// Cyclic group of the given order (0 for infinite) on one named generator.
/// Finite groups have zero ends; they are marked `Many` since no transitive
/// construction applies to them.
pub fn cyclic_group(order: u32, generator: &str) -> Result<GroupOracle> {
    let label = if order == 0 { "Z".to_string() } else { format!("Cyclic({order})") };
    let wp = Arc::new(FreeProductWp { orders: vec![order] });
    if order == 0 {
        let a = Word::from_signed(&[1]);
        let cert = WordCertificate { separator: vec![Word::empty()], side_a: vec![a.clone()], side_b: vec![a.inverse()] };
        GroupOracle::new(label, names(&[generator]), wp, Ends::Two, Some(cert))
    } else {
        GroupOracle::new(label, names(&[generator]), wp, Ends::Many, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(g: &GroupOracle, s: &str) -> Word {
        g.parse_word(s).unwrap()
    }

    #[test]
    fn builtin_examples() {
        let hnn = builtin_group(BuiltinGroup::Z2Hnn).unwrap();
        assert!(!hnn.wp(&w(&hnn, "t.a.t^-1.a^-1")));
        let z2 = builtin_group(BuiltinGroup::Zd(2)).unwrap();
        assert!(z2.wp(&w(&z2, "a.b.a^-1.b^-1")));
        let f2 = builtin_group(BuiltinGroup::FreeF2).unwrap();
        assert!(f2.wp(&w(&f2, "a.b.b^-1.a^-1")));
        assert!(!f2.wp(&w(&f2, "a.b.a^-1.b^-1")));
    }

    #[test]
    fn unknown_names_are_rejected() {
        assert!(matches!("Q8".parse::<BuiltinGroup>(), Err(Error::UnknownGroup(_))));
        assert_eq!("zd(3)".parse::<BuiltinGroup>().unwrap(), BuiltinGroup::Zd(3));
        assert_eq!("BS12".parse::<BuiltinGroup>().unwrap(), BuiltinGroup::Bs12);
    }

    #[test]
    fn two_ended_requires_certificate() {
        let r = GroupOracle::new("Z", names(&["a"]), Arc::new(AbelianWp { rank: 1 }), Ends::Two, None);
        assert_eq!(r.unwrap_err(), Error::MissingCertificate);
    }

    #[test]
    fn word_times_inverse_is_trivial_for_every_builtin() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut groups: Vec<GroupOracle> = BuiltinGroup::ALL_NAMED.iter().map(|&b| builtin_group(b).unwrap()).collect();
        groups.push(builtin_group(BuiltinGroup::Zd(3)).unwrap());
        for g in &groups {
            assert!(g.wp(&Word::empty()));
            for _ in 0..1000 {
                let len = rng.gen_range(0..16);
                let word = Word((0..len).map(|_| Letter::from_code(rng.gen_range(0..2 * g.generator_count()))).collect());
                assert!(g.wp(&word.concat(&word.inverse())), "{} {:?}", g.name(), word);
            }
        }
    }

    #[test]
    fn wp_is_a_congruence_on_samples() {
        // if u = v then x u y = x v y
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for b in BuiltinGroup::ALL_NAMED {
            let g = builtin_group(b).unwrap();
            let k = 2 * g.generator_count();
            let mut rand_word = |len: usize| Word((0..len).map(|_| Letter::from_code(rng.gen_range(0..k))).collect());
            for _ in 0..200 {
                let u = rand_word(4);
                let r = rand_word(3);
                let v = u.concat(&r).concat(&r.inverse());
                let (x, y) = (rand_word(3), rand_word(3));
                assert!(g.equal(&u, &v));
                assert!(g.equal(&x.concat(&u).concat(&y), &x.concat(&v).concat(&y)));
            }
        }
    }
}

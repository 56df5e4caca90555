//! Patterns over Cayley graphs, the forbidden-pattern sets of the subshift
//! of translation-like actions and of its product with a one-dimensional
//! subshift, and the maps between those subshifts and `A^Z`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::action::ActionEngine;
use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::graph::{ball_with_fuel, CayleyGraph};
use crate::groups::Word;
use crate::Vertex;

/// Finite list of `(word, letter)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternCoding<T> {
    pub pairs: Vec<(Word, T)>,
}

/// A pattern: a letter at each vertex of a finite domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPatch<T> {
    pub values: BTreeMap<Vertex, T>,
}

impl<T> PatternPatch<T> {
    pub fn domain(&self) -> BTreeSet<Vertex> {
        self.values.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: Vertex) -> Option<&T> {
        self.values.get(&v)
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> PatternPatch<U> {
        PatternPatch { values: self.values.iter().map(|(&v, t)| (v, f(t))).collect() }
    }
}

/// Incoming offset `l` and outgoing offset `r`: the vertex `g` carrying it
/// is entered from `g l` and left towards `g r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrowLetter {
    pub l: Word,
    pub r: Word,
}

impl ArrowLetter {
    /// Canonical offsets, each checked to lie in the ball of radius `j`.
    pub fn new(graph: &CayleyGraph, l: &Word, r: &Word, j: usize) -> Result<Self> {
        let n = graph.numbering();
        let (l, r) = (n.canonical(l)?, n.canonical(r)?);
        for w in [&l, &r] {
            // canonical words are geodesic
            if w.len() > j {
                return Err(Error::LetterOutsideAlphabet(graph.group().format_word(w)));
            }
        }
        Ok(ArrowLetter { l, r })
    }
}

/// Letters that carry an arrow.
pub trait Arrowed {
    fn arrow(&self) -> &ArrowLetter;
}

impl Arrowed for ArrowLetter {
    fn arrow(&self) -> &ArrowLetter {
        self
    }
}

impl<A> Arrowed for (A, ArrowLetter) {
    fn arrow(&self) -> &ArrowLetter {
        &self.1
    }
}

pub fn coding_to_pattern<T: Clone + PartialEq>(graph: &CayleyGraph, c: &PatternCoding<T>) -> Result<PatternPatch<T>> {
    let mut values: BTreeMap<Vertex, T> = BTreeMap::new();
    let mut source: BTreeMap<Vertex, &Word> = BTreeMap::new();
    for (w, a) in &c.pairs {
        let v = graph.vertex(w)?;
        match values.get(&v) {
            Some(b) if b != a => {
                let g = graph.group();
                return Err(Error::InconsistentCoding(g.format_word(source[&v]), g.format_word(w)));
            }
            Some(_) => {}
            None => {
                values.insert(v, a.clone());
                source.insert(v, w);
            }
        }
    }
    Ok(PatternPatch { values })
}

fn step(graph: &CayleyGraph, v: Vertex, offset: &Word) -> Result<Vertex> {
    graph.vertex(&graph.word(v)?.concat(offset))
}

/// `g *_p m`. Defined when every vertex whose letter the walk reads lies in
/// the domain; the endpoint itself may lie outside.
pub fn star_walk<T: Arrowed>(graph: &CayleyGraph, p: &PatternPatch<T>, g: Vertex, m: i64) -> Result<Option<Vertex>> {
    let mut v = g;
    for _ in 0..m.unsigned_abs() {
        let Some(x) = p.get(v) else { return Ok(None) };
        let a = x.arrow();
        v = step(graph, v, if m > 0 { &a.r } else { &a.l })?;
    }
    Ok(Some(v))
}

/// Radius `n` when the domain is exactly the ball of radius `n` at the
/// identity.
pub fn ball_radius<T>(graph: &CayleyGraph, p: &PatternPatch<T>, fuel: &mut Fuel) -> Result<usize> {
    let mut n = 0;
    for &v in p.values.keys() {
        n = n.max(graph.word(v)?.len());
    }
    if !p.values.contains_key(&0) || ball_with_fuel(graph, 0, n, fuel)?.vertex_set() != p.domain() {
        return Err(Error::NotABall);
    }
    Ok(n)
}

fn check_alphabet<T: Arrowed>(graph: &CayleyGraph, j: usize, p: &PatternPatch<T>) -> Result<()> {
    for x in p.values.values() {
        let a = x.arrow();
        ArrowLetter::new(graph, &a.l, &a.r, j)?;
    }
    Ok(())
}

/// Whether a ball pattern violates inverse coherence at the identity or
/// returns to the identity along a nonzero walk.
pub fn xj_forbidden<T: Arrowed>(graph: &CayleyGraph, j: usize, p: &PatternPatch<T>, fuel: &mut Fuel) -> Result<bool> {
    ball_radius(graph, p, fuel)?;
    check_alphabet(graph, j, p)?;
    for (there, back) in [(1, -1), (-1, 1)] {
        if let Some(x) = star_walk(graph, p, 0, there)? {
            if let Some(y) = star_walk(graph, p, x, back)? {
                if y != 0 {
                    return Ok(true);
                }
            }
        }
    }
    for sign in [1i64, -1] {
        let mut v = 0;
        for _ in 1..=p.len() {
            fuel.spend(1)?;
            match star_walk(graph, p, v, sign)? {
                Some(0) => return Ok(true),
                Some(next) => v = next,
                None => break,
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SemiVerdict {
    Forbidden,
    /// No violation among the rules enumerated within the budget.
    FalseSoFar,
}

/// Forbidden-pattern test for the product subshift. `forbidden_y(i)` is the
/// `i`-th enumerated forbidden word of `Y`, or `None` when the enumeration
/// has ended.
pub fn yxj_forbidden<A: Clone + Eq + Hash>(
    graph: &CayleyGraph,
    j: usize,
    forbidden_y: &dyn Fn(usize) -> Option<Vec<A>>,
    p: &PatternPatch<(A, ArrowLetter)>,
    budget: usize,
    fuel: &mut Fuel,
) -> Result<SemiVerdict> {
    if xj_forbidden(graph, j, &p.map(|x| x.1.clone()), fuel)? {
        return Ok(SemiVerdict::Forbidden);
    }
    // A-words read along g *1, ..., g *m inside the ball
    let mut segments: HashSet<Vec<A>> = HashSet::new();
    for &g in p.values.keys() {
        let mut word = Vec::new();
        let mut v = g;
        for _ in 0..p.len() {
            fuel.spend(1)?;
            match star_walk(graph, p, v, 1)? {
                Some(next) if p.values.contains_key(&next) => {
                    v = next;
                    word.push(p.values[&v].0.clone());
                    segments.insert(word.clone());
                }
                _ => break,
            }
        }
    }
    for i in 0..budget {
        let Some(rule) = forbidden_y(i) else { break };
        fuel.spend(1)?;
        if segments.contains(&rule) {
            return Ok(SemiVerdict::Forbidden);
        }
    }
    Ok(SemiVerdict::FalseSoFar)
}

/// `z(start), ..., z(start + values.len() - 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZSegment<A> {
    pub start: i64,
    pub values: Vec<A>,
}

impl<A> ZSegment<A> {
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Option<&A> {
        if n < self.start {
            return None;
        }
        self.values.get((n - self.start) as usize)
    }
}

/// Reads `z(n)` as the `A`-letter at `1 * n`, for the longest run of `n`
/// around 0 whose walk stays in the patch.
pub fn phi_map<A: Clone>(graph: &CayleyGraph, p: &PatternPatch<(A, ArrowLetter)>) -> Result<ZSegment<A>> {
    let Some(first) = p.get(0) else { return Err(Error::NotInPatch(0)) };
    let mut right = vec![first.0.clone()];
    let mut left = Vec::new();
    for (sign, out) in [(1i64, &mut right), (-1, &mut left)] {
        let mut v = 0;
        for _ in 0..p.len() {
            match star_walk(graph, p, v, sign)? {
                Some(next) if p.values.contains_key(&next) => {
                    v = next;
                    out.push(p.values[&v].0.clone());
                }
                _ => break,
            }
        }
    }
    let start = -(left.len() as i64);
    left.reverse();
    left.extend(right);
    Ok(ZSegment { start, values: left })
}

/// The arrows of the engine's action at `v`.
pub fn x_star(graph: &CayleyGraph, engine: &mut ActionEngine, v: Vertex, j: usize, fuel: &mut Fuel) -> Result<ArrowLetter> {
    let w = graph.word(v)?.inverse();
    let l = w.concat(&graph.word(engine.act(v, -1, fuel)?)?);
    let r = w.concat(&graph.word(engine.act(v, 1, fuel)?)?);
    ArrowLetter::new(graph, &l, &r, j)
}

/// The pattern of `x_*` on the ball of radius `radius` around `center`,
/// translated to the identity.
pub fn x_star_ball(
    graph: &CayleyGraph,
    engine: &mut ActionEngine,
    center: Vertex,
    radius: usize,
    j: usize,
    fuel: &mut Fuel,
) -> Result<PatternPatch<ArrowLetter>> {
    let c = graph.word(center)?;
    let mut values = BTreeMap::new();
    for h in ball_with_fuel(graph, 0, radius, fuel)?.vertices() {
        let v = graph.vertex(&c.concat(&graph.word(h)?))?;
        values.insert(h, x_star(graph, engine, v, j, fuel)?);
    }
    Ok(PatternPatch { values })
}

/// Colors each orbit of the engine's action by `z` from its representative
/// and pairs the colors with `x_*`, on `region`.
pub fn psi_map<A: Clone>(
    graph: &CayleyGraph,
    engine: &mut ActionEngine,
    z: &ZSegment<A>,
    region: &BTreeSet<Vertex>,
    j: usize,
    fuel: &mut Fuel,
) -> Result<PatternPatch<(A, ArrowLetter)>> {
    let mut offsets = BTreeMap::new();
    for &g in region {
        offsets.insert(g, engine.orbit_coordinates(g, fuel)?.1);
    }
    if let (Some(&lo), Some(&hi)) = (offsets.values().min(), offsets.values().max()) {
        if lo < z.start || hi > z.end() {
            return Err(Error::InsufficientRange { need_min: lo, need_max: hi, have_min: z.start, have_max: z.end() });
        }
    }
    let mut values = BTreeMap::new();
    for (g, n) in offsets {
        let a = z.get(n).expect("range checked").clone();
        values.insert(g, (a, x_star(graph, engine, g, j, fuel)?));
    }
    Ok(PatternPatch { values })
}

/// Symbols of the period-3 example.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Circle,
    Square,
    Rhombus,
}

impl Shape {
    pub const ALL: [Shape; 3] = [Shape::Circle, Shape::Square, Shape::Rhombus];

    pub fn successor(self) -> Shape {
        match self {
            Shape::Circle => Shape::Square,
            Shape::Square => Shape::Rhombus,
            Shape::Rhombus => Shape::Circle,
        }
    }

    /// The periodic point with `z(0) = self`.
    pub fn periodic(self, start: i64, len: usize) -> ZSegment<Shape> {
        let at = |n: i64| Shape::ALL[((Shape::ALL.iter().position(|&s| s == self).unwrap() as i64 + n).rem_euclid(3)) as usize];
        ZSegment { start, values: (start..start + len as i64).map(at).collect() }
    }
}

impl FromStr for Shape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL.into_iter().find(|x| x.to_string() == s).ok_or_else(|| Error::InvalidData(format!("unknown shape {s:?}")))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Circle => "circle",
            Shape::Square => "square",
            Shape::Rhombus => "rhombus",
        })
    }
}

/// Forbidden words of the orbit of the period-3 sequence: the six length-2
/// words `a b` with `b` not the successor of `a`.
pub fn period3_forbidden(i: usize) -> Option<Vec<Shape>> {
    Shape::ALL.iter().flat_map(|&a| Shape::ALL.iter().map(move |&b| (a, b))).filter(|(a, b)| a.successor() != *b).nth(i).map(|(a, b)| vec![a, b])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternJson {
    pub domain: Vec<String>,
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<[String; 2]>,
}

pub fn arrow_patch_json(graph: &CayleyGraph, p: &PatternPatch<ArrowLetter>) -> Result<PatternJson> {
    let g = graph.group();
    let mut json = PatternJson { domain: Vec::new(), a: None, b: Vec::new() };
    for (&v, x) in &p.values {
        json.domain.push(graph.format_vertex(v)?);
        json.b.push([g.format_word(&x.l), g.format_word(&x.r)]);
    }
    Ok(json)
}

/// Arrow patch from JSON; an `A` layer, if present, is ignored.
pub fn arrow_patch_from_json(graph: &CayleyGraph, json: &PatternJson, j: usize) -> Result<PatternPatch<ArrowLetter>> {
    if json.domain.len() != json.b.len() {
        return Err(Error::InvalidData("domain and B differ in length".into()));
    }
    let g = graph.group();
    let mut pairs = Vec::new();
    for (v, [l, r]) in json.domain.iter().zip(&json.b) {
        pairs.push((g.parse_word(v)?, ArrowLetter::new(graph, &g.parse_word(l)?, &g.parse_word(r)?, j)?));
    }
    coding_to_pattern(graph, &PatternCoding { pairs })
}

pub fn product_patch_from_json<A: FromStr + Clone + PartialEq>(graph: &CayleyGraph, json: &PatternJson, j: usize) -> Result<PatternPatch<(A, ArrowLetter)>> {
    let arrows = arrow_patch_from_json(graph, json, j)?;
    let Some(a) = &json.a else { return Err(Error::InvalidData("missing A layer".into())) };
    if a.len() != json.domain.len() {
        return Err(Error::InvalidData("domain and A differ in length".into()));
    }
    let mut pairs = Vec::new();
    for (v, letter) in json.domain.iter().zip(a) {
        let w = graph.group().parse_word(v)?;
        let letter = letter.parse::<A>().map_err(|_| Error::InvalidData(format!("unknown letter {letter:?}")))?;
        let arrow = arrows.values[&graph.vertex(&w)?].clone();
        pairs.push((w, (letter, arrow)));
    }
    coding_to_pattern(graph, &PatternCoding { pairs })
}

pub fn product_patch_json<A: fmt::Display>(graph: &CayleyGraph, p: &PatternPatch<(A, ArrowLetter)>) -> Result<PatternJson> {
    let mut json = arrow_patch_json(graph, &p.map(|x| x.1.clone()))?;
    json.a = Some(p.values.values().map(|x| x.0.to_string()).collect());
    Ok(json)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, BuiltinGroup};

    fn z2() -> CayleyGraph {
        CayleyGraph::new(&builtin_group(BuiltinGroup::Z2).unwrap())
    }

    fn w(g: &CayleyGraph, s: &str) -> Word {
        g.group().parse_word(s).unwrap()
    }

    fn at(g: &CayleyGraph, s: &str) -> Vertex {
        g.vertex(&w(g, s)).unwrap()
    }

    fn arrow(g: &CayleyGraph, l: &str, r: &str) -> ArrowLetter {
        ArrowLetter::new(g, &w(g, l), &w(g, r), 2).unwrap()
    }

    // the horizontal translation on every vertex of the ball of radius n
    fn horizontal(g: &CayleyGraph, n: usize) -> PatternPatch<ArrowLetter> {
        let values = ball_with_fuel(g, 0, n, &mut Fuel::default()).unwrap().vertices().map(|v| (v, arrow(g, "a^-1", "a"))).collect();
        PatternPatch { values }
    }

    #[test]
    fn codings() {
        let g = z2();
        let c = PatternCoding { pairs: vec![(w(&g, "a"), 'x'), (w(&g, "b"), 'y')] };
        assert_eq!(coding_to_pattern(&g, &c).unwrap().len(), 2);
        let c = PatternCoding { pairs: vec![(w(&g, "a"), 'x'), (w(&g, "a.b.b^-1"), 'y')] };
        assert!(matches!(coding_to_pattern(&g, &c), Err(Error::InconsistentCoding(..))));
        let c = PatternCoding { pairs: vec![(Word::empty(), 'x'), (w(&g, "a"), 'x')] };
        let p = coding_to_pattern(&g, &c).unwrap();
        assert_eq!(p.values.values().collect::<Vec<_>>(), vec![&'x', &'x']);
    }

    #[test]
    fn walks() {
        let g = z2();
        let p = horizontal(&g, 1);
        assert_eq!(star_walk(&g, &p, 0, 1).unwrap(), Some(at(&g, "a")));
        assert_eq!(star_walk(&g, &p, 0, 0).unwrap(), Some(0));
        assert_eq!(star_walk(&g, &p, 0, 2).unwrap(), Some(at(&g, "a^2")));
        assert_eq!(star_walk(&g, &p, 0, 3).unwrap(), None);
    }

    #[test]
    fn forbidden_patterns() {
        let g = z2();
        let mut fuel = Fuel::default();
        assert!(!xj_forbidden(&g, 2, &horizontal(&g, 2), &mut fuel).unwrap());
        let mut p = horizontal(&g, 2);
        p.values.insert(at(&g, "a"), arrow(&g, "b", "a"));
        assert!(xj_forbidden(&g, 2, &p, &mut fuel).unwrap());
        let mut p = horizontal(&g, 0);
        p.values.insert(0, arrow(&g, "a^-1", "1"));
        assert!(xj_forbidden(&g, 2, &p, &mut fuel).unwrap());
        // a 2-cycle a, a^-1 returns to the identity
        let mut p = horizontal(&g, 1);
        p.values.insert(at(&g, "a"), arrow(&g, "a^-1", "a^-1"));
        assert!(xj_forbidden(&g, 2, &p, &mut fuel).unwrap());
        let mut not_ball = horizontal(&g, 1);
        not_ball.values.remove(&at(&g, "b"));
        assert_eq!(xj_forbidden(&g, 2, &not_ball, &mut fuel), Err(Error::NotABall));
        let mut far = horizontal(&g, 0);
        far.values.insert(0, ArrowLetter { l: w(&g, "a^-3"), r: w(&g, "a") });
        assert!(matches!(xj_forbidden(&g, 2, &far, &mut fuel), Err(Error::LetterOutsideAlphabet(_))));
    }

    #[test]
    fn period3_rules() {
        let rules: Vec<Vec<Shape>> = (0..).map_while(period3_forbidden).collect();
        assert_eq!(rules.len(), 6);
        assert!(rules.contains(&vec![Shape::Circle, Shape::Circle]));
        assert!(!rules.contains(&vec![Shape::Circle, Shape::Square]));
        let g = z2();
        let mut fuel = Fuel::default();
        let arrows = horizontal(&g, 1);
        let colored = |shape_at: &dyn Fn(i64) -> Shape| PatternPatch {
            values: arrows
                .values
                .iter()
                .map(|(&v, x)| {
                    let word = g.word(v).unwrap();
                    let k = word.letters().iter().filter(|l| l.generator() == 0).map(|l| if l.is_inverse() { -1 } else { 1 }).sum::<i64>();
                    (v, (shape_at(k), x.clone()))
                })
                .collect(),
        };
        let good = colored(&|k| Shape::Circle.periodic(k, 1).values[0]);
        assert_eq!(yxj_forbidden(&g, 2, &period3_forbidden, &good, 100, &mut fuel).unwrap(), SemiVerdict::FalseSoFar);
        let bad = colored(&|_| Shape::Circle);
        assert_eq!(yxj_forbidden(&g, 2, &period3_forbidden, &bad, 100, &mut fuel).unwrap(), SemiVerdict::Forbidden);
        assert_eq!(yxj_forbidden(&g, 2, &period3_forbidden, &bad, 0, &mut fuel).unwrap(), SemiVerdict::FalseSoFar);
    }

    #[test]
    fn phi_reads_along_arrows() {
        let g = z2();
        let p = horizontal(&g, 2).map(|x| (7, x.clone()));
        let z = phi_map(&g, &p).unwrap();
        assert_eq!((z.start, z.values.len()), (-2, 5));
        let single = horizontal(&g, 0).map(|x| ('q', x.clone()));
        assert_eq!(phi_map(&g, &single).unwrap(), ZSegment { start: 0, values: vec!['q'] });
    }

    #[test]
    fn json_round_trip() {
        let g = z2();
        let p = horizontal(&g, 1).map(|x| (Shape::Square, x.clone()));
        let json = product_patch_json(&g, &p).unwrap();
        let text = serde_json::to_string(&json).unwrap();
        assert!(text.contains("\"B\"") && text.contains("\"A\""));
        let back: PatternJson = serde_json::from_str(&text).unwrap();
        assert_eq!(product_patch_from_json::<Shape>(&g, &back, 2).unwrap(), p);
        assert_eq!(arrow_patch_from_json(&g, &back, 2).unwrap(), horizontal(&g, 1));
    }

    #[test]
    fn psi_on_z2() {
        let g = z2();
        let mut engine = ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap();
        let mut fuel = Fuel::default();
        let region: BTreeSet<Vertex> = BTreeSet::from([0]);
        let z = Shape::Square.periodic(-1, 3);
        let p = psi_map(&g, &mut engine, &z, &region, 3, &mut fuel).unwrap();
        assert_eq!(p.values[&0].0, Shape::Square);
        let region: BTreeSet<Vertex> = ball_with_fuel(&g, 0, 3, &mut fuel).unwrap().vertex_set();
        let short = Shape::Circle.periodic(-1, 3);
        assert!(matches!(psi_map(&g, &mut engine, &short, &region, 3, &mut fuel), Err(Error::InsufficientRange { .. })));
        for &v in &region {
            let x = x_star(&g, &mut engine, v, 3, &mut fuel).unwrap();
            assert_eq!(step(&g, v, &x.r).unwrap(), engine.act(v, 1, &mut fuel).unwrap());
            assert_eq!(step(&g, v, &x.l).unwrap(), engine.act(v, -1, &mut fuel).unwrap());
        }
    }
}

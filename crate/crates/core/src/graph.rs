//! Highly computable graphs: adjacency and degree oracles, finite induced
//! patches, balls, capped distances and connected components.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::groups::{GroupOracle, Numbering, Word};
use crate::Vertex;

/// A simple, locally finite graph whose vertices are natural numbers.
pub trait GraphOracle: Send + Sync {
    /// Neighbours of `v` in increasing order, excluding `v` itself.
    fn neighbors(&self, v: Vertex) -> Result<Arc<[Vertex]>>;

    fn adjacent(&self, u: Vertex, v: Vertex) -> Result<bool> {
        Ok(self.neighbors(u)?.binary_search(&v).is_ok())
    }

    fn degree(&self, v: Vertex) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }
}

/// Cayley graph of a group with respect to its declared generators, with
/// vertices named by a numbering.
pub struct CayleyGraph {
    group: GroupOracle,
    numbering: Numbering,
    cache: RwLock<HashMap<Vertex, Arc<[Vertex]>>>,
}

pub fn cayley_oracle(group: &GroupOracle, numbering: &Numbering) -> CayleyGraph {
    CayleyGraph { group: group.clone(), numbering: numbering.clone(), cache: RwLock::new(HashMap::new()) }
}

impl CayleyGraph {
    pub fn new(group: &GroupOracle) -> Self {
        cayley_oracle(group, &Numbering::new(group))
    }

    pub fn group(&self) -> &GroupOracle {
        &self.group
    }

    pub fn numbering(&self) -> &Numbering {
        &self.numbering
    }

    pub fn word(&self, v: Vertex) -> Result<Word> {
        self.numbering.to_word(v)
    }

    pub fn vertex(&self, w: &Word) -> Result<Vertex> {
        self.numbering.to_index(w)
    }

    pub fn format_vertex(&self, v: Vertex) -> Result<String> {
        Ok(self.group.format_word(&self.word(v)?))
    }

    /// Adjacency straight from the word problem: some `s` with
    /// `word(m) s word(n)^-1 = 1`.
    pub fn adjacent_by_word_problem(&self, m: Vertex, n: Vertex) -> Result<bool> {
        if m == n {
            return Ok(false);
        }
        let (wm, wn) = (self.word(m)?, self.word(n)?);
        let inv = wn.inverse();
        Ok(self.group.letters().any(|s| {
            let mut w = wm.clone();
            w.push(s);
            self.group.wp(&w.concat(&inv))
        }))
    }
}

impl GraphOracle for CayleyGraph {
    fn neighbors(&self, v: Vertex) -> Result<Arc<[Vertex]>> {
        if let Some(n) = self.cache.read().expect("neighbour cache poisoned").get(&v) {
            return Ok(n.clone());
        }
        let w = self.word(v)?;
        let mut out = BTreeSet::new();
        for s in self.group.letters() {
            let mut x = w.clone();
            x.push(s);
            let u = self.vertex(&x)?;
            if u != v {
                out.insert(u);
            }
        }
        let n: Arc<[Vertex]> = out.into_iter().collect();
        self.cache.write().expect("neighbour cache poisoned").insert(v, n.clone());
        Ok(n)
    }
}

/// Finite graph given explicitly. Also used as the graph of an induced
/// subgraph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FinitePatch {
    adjacency: BTreeMap<Vertex, BTreeSet<Vertex>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PatchJson {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[Vertex; 2]>,
}

impl FinitePatch {
    pub fn new(vertices: impl IntoIterator<Item = Vertex>, edges: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut adjacency: BTreeMap<Vertex, BTreeSet<Vertex>> = vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidData(format!("self-loop at {u}")));
            }
            if !adjacency.contains_key(&u) {
                return Err(Error::NotInPatch(u));
            }
            if !adjacency.contains_key(&v) {
                return Err(Error::NotInPatch(v));
            }
            adjacency.get_mut(&u).unwrap().insert(v);
            adjacency.get_mut(&v).unwrap().insert(u);
        }
        Ok(FinitePatch { adjacency })
    }

    /// Subgraph of `oracle` induced by `vertices`.
    pub fn induced(oracle: &dyn GraphOracle, vertices: impl IntoIterator<Item = Vertex>, fuel: &mut Fuel) -> Result<Self> {
        let mut adjacency: BTreeMap<Vertex, BTreeSet<Vertex>> = vertices.into_iter().map(|v| (v, BTreeSet::new())).collect();
        let keys: Vec<Vertex> = adjacency.keys().copied().collect();
        for v in keys {
            fuel.spend(1)?;
            let inside: BTreeSet<Vertex> = oracle.neighbors(v)?.iter().copied().filter(|u| adjacency.contains_key(u)).collect();
            adjacency.insert(v, inside);
        }
        Ok(FinitePatch { adjacency })
    }

    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adjacency.contains_key(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.adjacency.keys().copied().collect()
    }

    pub fn neighbors_in(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency.get(&v).into_iter().flatten().copied()
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.adjacency.iter().flat_map(|(&u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v))).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.values().map(|n| n.len()).sum::<usize>() / 2
    }

    /// Subgraph induced on a subset of this patch's vertices.
    pub fn restrict(&self, keep: &BTreeSet<Vertex>) -> FinitePatch {
        let adjacency =
            self.adjacency.iter().filter(|(v, _)| keep.contains(v)).map(|(&v, ns)| (v, ns.iter().copied().filter(|u| keep.contains(u)).collect())).collect();
        FinitePatch { adjacency }
    }

    /// Connected components after deleting `deleted`; each component sorted,
    /// the list sorted by least element.
    pub fn components(&self, deleted: &BTreeSet<Vertex>) -> Vec<Vec<Vertex>> {
        let mut seen: BTreeSet<Vertex> = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.adjacency.keys() {
            if deleted.contains(&start) || seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            seen.insert(start);
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for u in self.neighbors_in(v) {
                    if !deleted.contains(&u) && seen.insert(u) {
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(&BTreeSet::new()).len() <= 1
    }

    /// Distance inside the patch, `None` if larger than `cap`.
    pub fn distance_within(&self, u: Vertex, v: Vertex, cap: usize) -> Option<usize> {
        if !self.contains(u) || !self.contains(v) {
            return None;
        }
        let mut dist = HashMap::from([(u, 0usize)]);
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            if x == v {
                return Some(d);
            }
            if d == cap {
                continue;
            }
            for y in self.neighbors_in(x) {
                dist.entry(y).or_insert_with(|| {
                    queue.push_back(y);
                    d + 1
                });
            }
        }
        None
    }

    pub fn to_json(&self) -> PatchJson {
        PatchJson { vertices: self.vertices().collect(), edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }

    pub fn from_json(json: &PatchJson) -> Result<Self> {
        FinitePatch::new(json.vertices.iter().copied(), json.edges.iter().map(|e| (e[0], e[1])))
    }

    /// Graphviz rendering; `label` names vertices.
    pub fn to_dot(&self, label: impl Fn(Vertex) -> String) -> String {
        let mut s = String::from("graph patch {\n");
        for v in self.vertices() {
            let _ = writeln!(s, "  {v} [label=\"{}\"];", label(v).replace('"', "\\\""));
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

impl GraphOracle for FinitePatch {
    fn neighbors(&self, v: Vertex) -> Result<Arc<[Vertex]>> {
        self.adjacency.get(&v).map(|n| n.iter().copied().collect()).ok_or(Error::NotInPatch(v))
    }
}

/// Multi-source breadth-first exploration of an oracle, grown one layer at
/// a time. Distances are measured in the whole graph.
pub struct Bfs<'a> {
    oracle: &'a dyn GraphOracle,
    dist: HashMap<Vertex, usize>,
    order: Vec<Vertex>,
    frontier: Vec<Vertex>,
    radius: usize,
}

impl<'a> Bfs<'a> {
    pub fn new(oracle: &'a dyn GraphOracle, sources: impl IntoIterator<Item = Vertex>) -> Self {
        let mut dist = HashMap::new();
        let mut order = Vec::new();
        for s in sources {
            if dist.insert(s, 0).is_none() {
                order.push(s);
            }
        }
        order.sort_unstable();
        let frontier = order.clone();
        Bfs { oracle, dist, order, frontier, radius: 0 }
    }

    pub fn oracle(&self) -> &'a dyn GraphOracle {
        self.oracle
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Adds the next layer; returns false once the graph is exhausted.
    pub fn grow(&mut self, fuel: &mut Fuel) -> Result<bool> {
        let mut next = Vec::new();
        for &v in &self.frontier {
            fuel.spend(1)?;
            for &u in self.oracle.neighbors(v)?.iter() {
                if !self.dist.contains_key(&u) {
                    fuel.spend(1)?;
                    self.dist.insert(u, self.radius + 1);
                    next.push(u);
                }
            }
        }
        next.sort_unstable();
        self.radius += 1;
        self.order.extend_from_slice(&next);
        let grew = !next.is_empty();
        self.frontier = next;
        Ok(grew)
    }

    pub fn grow_to(&mut self, radius: usize, fuel: &mut Fuel) -> Result<()> {
        while self.radius < radius {
            if !self.grow(fuel)? {
                self.radius = radius;
            }
        }
        Ok(())
    }

    pub fn distance(&self, v: Vertex) -> Option<usize> {
        self.dist.get(&v).copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.dist.contains_key(&v)
    }

    /// Explored vertices in order of discovery (layer by layer, each layer
    /// sorted by name).
    pub fn vertices(&self) -> &[Vertex] {
        &self.order
    }

    pub fn outer_layer(&self) -> &[Vertex] {
        &self.frontier
    }
}

/// All vertices within distance `r` of `center`, with every internal edge.
pub fn ball(oracle: &dyn GraphOracle, center: Vertex, r: usize) -> Result<FinitePatch> {
    ball_with_fuel(oracle, center, r, &mut Fuel::unlimited())
}

pub fn ball_with_fuel(oracle: &dyn GraphOracle, center: Vertex, r: usize, fuel: &mut Fuel) -> Result<FinitePatch> {
    let mut bfs = Bfs::new(oracle, [center]);
    bfs.grow_to(r, fuel)?;
    FinitePatch::induced(oracle, bfs.vertices().iter().copied(), fuel)
}

/// Connected components of `patch` minus `deleted`.
pub fn components(patch: &FinitePatch, deleted: &BTreeSet<Vertex>) -> Vec<Vec<Vertex>> {
    patch.components(deleted)
}

/// Exact distance when at most `cap`, otherwise `None`.
pub fn distance(oracle: &dyn GraphOracle, u: Vertex, v: Vertex, cap: usize) -> Result<Option<usize>> {
    distance_with_fuel(oracle, u, v, cap, &mut Fuel::unlimited())
}

pub fn distance_with_fuel(oracle: &dyn GraphOracle, u: Vertex, v: Vertex, cap: usize, fuel: &mut Fuel) -> Result<Option<usize>> {
    if u == v {
        return Ok(Some(0));
    }
    let mut bfs = Bfs::new(oracle, [u]);
    while bfs.radius() < cap {
        if !bfs.grow(fuel)? {
            break;
        }
        if bfs.contains(v) {
            return Ok(bfs.distance(v));
        }
    }
    Ok(None)
}

/// Shortest path from `from` to `to` avoiding `blocked`, found by
/// bidirectional search; among shortest paths the meeting vertex with the
/// least name is used. `None` if `to` is unreachable within `max_len`.
pub fn shortest_path_avoiding(
    oracle: &dyn GraphOracle,
    from: Vertex,
    to: Vertex,
    blocked: &dyn Fn(Vertex) -> bool,
    max_len: usize,
    fuel: &mut Fuel,
) -> Result<Option<Vec<Vertex>>> {
    if from == to {
        return Ok(Some(vec![from]));
    }
    let mut parents = [HashMap::from([(from, from)]), HashMap::from([(to, to)])];
    let mut layers = [vec![from], vec![to]];
    let mut depth = 0;
    while depth < max_len {
        if layers[0].is_empty() || layers[1].is_empty() {
            return Ok(None);
        }
        let side = if layers[0].len() <= layers[1].len() { 0 } else { 1 };
        let mut next = Vec::new();
        let mut meets = Vec::new();
        for &v in &layers[side] {
            fuel.spend(1)?;
            for &u in oracle.neighbors(v)?.iter() {
                if parents[side].contains_key(&u) || blocked(u) {
                    continue;
                }
                fuel.spend(1)?;
                parents[side].insert(u, v);
                next.push(u);
                if parents[1 - side].contains_key(&u) {
                    meets.push(u);
                }
            }
        }
        next.sort_unstable();
        layers[side] = next;
        depth += 1;
        if let Some(&m) = meets.iter().min() {
            let walk = |p: &HashMap<Vertex, Vertex>, mut x: Vertex| {
                let mut out = vec![x];
                while p[&x] != x {
                    x = p[&x];
                    out.push(x);
                }
                out
            };
            let mut path = walk(&parents[0], m);
            path.reverse();
            path.extend(walk(&parents[1], m).into_iter().skip(1));
            return Ok(Some(path));
        }
    }
    Ok(None)
}

/// Disjoint-set forest over arbitrary vertex names.
#[derive(Debug, Default)]
pub(crate) struct UnionFind {
    index: HashMap<Vertex, usize>,
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn insert(&mut self, v: Vertex) -> usize {
        if let Some(&i) = self.index.get(&v) {
            return i;
        }
        let i = self.parent.len();
        self.index.insert(v, i);
        self.parent.push(i);
        self.size.push(1);
        i
    }

    pub(crate) fn contains(&self, v: Vertex) -> bool {
        self.index.contains_key(&v)
    }

    fn root(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    pub(crate) fn find(&mut self, v: Vertex) -> Option<usize> {
        let i = *self.index.get(&v)?;
        Some(self.root(i))
    }

    pub(crate) fn union(&mut self, u: Vertex, v: Vertex) {
        let (a, b) = (self.insert(u), self.insert(v));
        let (mut a, mut b) = (self.root(a), self.root(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{builtin_group, BuiltinGroup};

    fn cayley(b: BuiltinGroup) -> CayleyGraph {
        CayleyGraph::new(&builtin_group(b).unwrap())
    }

    fn v(g: &CayleyGraph, s: &str) -> Vertex {
        g.vertex(&g.group().parse_word(s).unwrap()).unwrap()
    }

    #[test]
    fn degrees_of_builtin_cayley_graphs() {
        assert_eq!(cayley(BuiltinGroup::Z2).degree(0).unwrap(), 4);
        let f2 = cayley(BuiltinGroup::FreeF2);
        for x in 0..30 {
            assert_eq!(f2.degree(x).unwrap(), 4);
        }
        // a = a^-1 in Z2*Z3
        let g = cayley(BuiltinGroup::Z2StarZ3);
        assert_eq!(g.degree(0).unwrap(), 3);
        assert_eq!(&*g.neighbors(0).unwrap(), &[v(&g, "a"), v(&g, "b"), v(&g, "b^-1")][..]);
    }

    #[test]
    fn neighbour_lists_match_word_problem_adjacency() {
        for b in [BuiltinGroup::Z2, BuiltinGroup::Z2StarZ3, BuiltinGroup::Bs12] {
            let g = cayley(b);
            for m in 0..25 {
                for n in 0..25 {
                    assert_eq!(g.adjacent(m, n).unwrap(), g.adjacent_by_word_problem(m, n).unwrap(), "{b} {m} {n}");
                    assert_eq!(g.adjacent(m, n).unwrap(), g.adjacent(n, m).unwrap());
                }
                assert!(!g.adjacent(m, m).unwrap());
            }
        }
    }

    #[test]
    fn ball_sizes() {
        let z2 = cayley(BuiltinGroup::Z2);
        let b1 = ball(&z2, 0, 1).unwrap();
        assert_eq!((b1.len(), b1.edge_count()), (5, 4));
        // |{|x|+|y| <= 2}| = 13
        assert_eq!(ball(&z2, 0, 2).unwrap().len(), 13);
        let z = cayley(BuiltinGroup::Z);
        let b3 = ball(&z, 0, 3).unwrap();
        assert_eq!((b3.len(), b3.edge_count()), (7, 6));
        assert!(b3.is_connected());
    }

    #[test]
    fn components_examples() {
        let path = FinitePatch::new([1, 2, 3], [(1, 2), (2, 3)]).unwrap();
        assert_eq!(path.components(&BTreeSet::from([2])), vec![vec![1], vec![3]]);
        assert_eq!(path.components(&BTreeSet::new()).len(), 1);
        let z2 = cayley(BuiltinGroup::Z2);
        let b2 = ball(&z2, 0, 2).unwrap();
        let inner = ball(&z2, 0, 1).unwrap().vertex_set();
        let comps = b2.components(&inner);
        // the sphere of radius 2 in Z^2 has no internal edges
        assert_eq!(comps.len(), 8);
        assert!(comps.iter().all(|c| c.len() == 1));
    }

    #[test]
    fn distance_examples() {
        let z2 = cayley(BuiltinGroup::Z2);
        assert_eq!(distance(&z2, 0, v(&z2, "a.b"), 5).unwrap(), Some(2));
        let z = cayley(BuiltinGroup::Z);
        assert_eq!(distance(&z, 0, v(&z, "a^5"), 3).unwrap(), None);
        let fp = cayley(BuiltinGroup::Z2StarZ3);
        assert_eq!(distance(&fp, 0, v(&fp, "a.b"), 4).unwrap(), Some(2));
    }

    #[test]
    fn balls_are_nested_and_distance_is_a_metric() {
        for b in [BuiltinGroup::Z2, BuiltinGroup::Bs12, BuiltinGroup::Z2StarZ3] {
            let g = cayley(b);
            for c in [0, 3, 7] {
                for r in 0..4 {
                    let small = ball(&g, c, r).unwrap().vertex_set();
                    let big = ball(&g, c, r + 1).unwrap().vertex_set();
                    assert!(small.is_subset(&big));
                }
            }
            let pts: Vec<Vertex> = (0..8).collect();
            for &x in &pts {
                for &y in &pts {
                    let dxy = distance(&g, x, y, 12).unwrap().unwrap();
                    assert_eq!(Some(dxy), distance(&g, y, x, 12).unwrap());
                    for &z in &pts {
                        let dxz = distance(&g, x, z, 12).unwrap().unwrap();
                        let dzy = distance(&g, z, y, 12).unwrap().unwrap();
                        assert!(dxy <= dxz + dzy);
                    }
                }
            }
        }
    }

    #[test]
    fn components_partition_the_rest() {
        let g = cayley(BuiltinGroup::Z2StarZ3);
        let patch = ball(&g, 0, 4).unwrap();
        let deleted: BTreeSet<Vertex> = [0, 1, 5].into_iter().collect();
        let comps = patch.components(&deleted);
        let mut all: Vec<Vertex> = comps.concat();
        all.sort_unstable();
        let expected: Vec<Vertex> = patch.vertices().filter(|v| !deleted.contains(v)).collect();
        assert_eq!(all, expected);
    }

    #[test]
    fn dot_and_json_exports() {
        let z2 = cayley(BuiltinGroup::Z2);
        let b = ball(&z2, 0, 2).unwrap();
        let dot = b.to_dot(|v| z2.format_vertex(v).unwrap());
        assert_eq!(dot.matches("label=").count(), 13);
        let json = serde_json::to_string(&b.to_json()).unwrap();
        let back: PatchJson = serde_json::from_str(&json).unwrap();
        assert_eq!(FinitePatch::from_json(&back).unwrap(), b);
    }
}

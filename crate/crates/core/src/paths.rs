//! Finite 3-paths and the constrained Hamiltonian 3-path construction on
//! finite connected graphs.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{distance, FinitePatch, GraphOracle};
use crate::Vertex;

/// Injective map from the integer interval `[start, start + len - 1]` to
/// vertices, with consecutive images at distance at most 3.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePath {
    start: i64,
    vertices: Vec<Vertex>,
}

impl ThreePath {
    /// Checks injectivity only; the jump bound needs a metric, see
    /// [`ThreePath::validate`].
    pub fn new(start: i64, vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::EmptyPatch);
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(Error::PathOverlap(v));
            }
        }
        Ok(ThreePath { start, vertices })
    }

    pub fn singleton(v: Vertex) -> Self {
        ThreePath { start: 0, vertices: vec![v] }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last integer of the domain.
    pub fn end(&self) -> i64 {
        self.start + self.vertices.len() as i64 - 1
    }

    pub fn domain(&self) -> (i64, i64) {
        (self.start, self.end())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        *self.vertices.last().unwrap()
    }

    pub fn get(&self, n: i64) -> Option<Vertex> {
        if n < self.start {
            return None;
        }
        self.vertices.get((n - self.start) as usize).copied()
    }

    pub fn position(&self, v: Vertex) -> Option<i64> {
        self.vertices.iter().position(|&x| x == v).map(|i| self.start + i as i64)
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.vertices.iter().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Vertex)> + '_ {
        self.vertices.iter().enumerate().map(move |(i, &v)| (self.start + i as i64, v))
    }

    /// Same vertex sequence on a shifted domain.
    pub fn shifted(&self, start: i64) -> ThreePath {
        ThreePath { start, vertices: self.vertices.clone() }
    }

    /// Visits the vertices of `self` and then those of `g`, keeping the
    /// domain of `self` fixed.
    pub fn concat(&self, g: &ThreePath, metric: &dyn GraphOracle) -> Result<ThreePath> {
        let mine: HashSet<Vertex> = self.vertices.iter().copied().collect();
        if let Some(&v) = g.vertices.iter().find(|v| mine.contains(v)) {
            return Err(Error::PathOverlap(v));
        }
        if distance(metric, self.last(), g.first(), 3)?.is_none() {
            return Err(Error::JumpTooLong { from: self.last(), to: g.first() });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&g.vertices);
        Ok(ThreePath { start: self.start, vertices })
    }

    /// Domain `[-b, -a]`, sending `x` to `f(-x)`.
    pub fn invert(&self) -> ThreePath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        ThreePath { start: -self.end(), vertices }
    }

    /// Whether `self` restricted to the domain of `other` equals `other`.
    pub fn extends(&self, other: &ThreePath) -> bool {
        other.iter().all(|(n, v)| self.get(n) == Some(v))
    }

    /// Jump lengths `d(f(n), f(n+1))`; `None` marks a jump longer than 3.
    pub fn jumps(&self, metric: &dyn GraphOracle) -> Result<Vec<Option<usize>>> {
        self.vertices.windows(2).map(|w| distance(metric, w[0], w[1], 3)).collect()
    }

    pub fn validate(&self, metric: &dyn GraphOracle) -> Result<()> {
        let mut seen = HashSet::with_capacity(self.vertices.len());
        for &v in &self.vertices {
            if !seen.insert(v) {
                return Err(Error::PathOverlap(v));
            }
        }
        for w in self.vertices.windows(2) {
            if distance(metric, w[0], w[1], 3)?.is_none() {
                return Err(Error::JumpTooLong { from: w[0], to: w[1] });
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("paths serialize")
    }
}

/// Whether a valid 3-path also has short end jumps and no two consecutive
/// jumps of length 3.
pub fn satisfies_end_conditions(path: &ThreePath, metric: &dyn GraphOracle) -> Result<bool> {
    let jumps: Vec<usize> = match path.jumps(metric)?.into_iter().collect::<Option<Vec<_>>>() {
        Some(j) => j,
        None => return Ok(false),
    };
    if jumps.len() >= 2 && (jumps[0] > 2 || jumps[jumps.len() - 1] > 2) {
        return Ok(false);
    }
    Ok(!jumps.windows(2).any(|w| w[0] == 3 && w[1] == 3))
}

/// Hamiltonian 3-path on the connected patch `p` from `u` to `v` whose first
/// and last jumps have length at most 2 and which never makes two length-3
/// jumps in a row. Ties are broken towards the least vertex name.
pub fn karaganis_constrained(p: &FinitePatch, u: Vertex, v: Vertex) -> Result<ThreePath> {
    if p.is_empty() {
        return Err(Error::EmptyPatch);
    }
    if u == v {
        return Err(Error::SameEndpoints);
    }
    for x in [u, v] {
        if !p.contains(x) {
            return Err(Error::NotInPatch(x));
        }
    }
    if !p.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut out = Vec::with_capacity(p.len());
    hamiltonian(p, &p.vertex_set(), u, v, &mut out);
    debug_assert_eq!(out.len(), p.len());
    Ok(ThreePath { start: 0, vertices: out })
}

// Appends to `out` a path on the connected vertex set `set` from `u` to `v`.
fn hamiltonian(p: &FinitePatch, set: &BTreeSet<Vertex>, u: Vertex, v: Vertex, out: &mut Vec<Vertex>) {
    if u == v {
        out.push(u);
        return;
    }
    let rest: BTreeSet<Vertex> = set.iter().copied().filter(|&x| x != v).collect();
    let sub = p.restrict(&rest);
    let mut comps = sub.components(&BTreeSet::new());
    let first = comps.iter().position(|c| c.binary_search(&u).is_ok()).expect("u lies in a component");
    let gamma1 = comps.remove(first);
    let adjacent_to = |a: Vertex, b: Vertex| p.neighbors_in(a).any(|x| x == b);

    let v1 = if gamma1.len() == 1 {
        u
    } else {
        gamma1
            .iter()
            .copied()
            .find(|&x| x != u && adjacent_to(x, v))
            .or_else(|| gamma1.iter().copied().find(|&x| adjacent_to(u, x)))
            .expect("component of size at least two has an edge at u")
    };
    hamiltonian(p, &gamma1.iter().copied().collect(), u, v1, out);

    for comp in comps {
        let ui = comp.iter().copied().find(|&x| adjacent_to(x, v)).expect("component touches v");
        let vi = if comp.len() == 1 { ui } else { comp.iter().copied().find(|&x| adjacent_to(ui, x)).expect("connected component") };
        hamiltonian(p, &comp.iter().copied().collect(), ui, vi, out);
    }
    out.push(v);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p4() -> FinitePatch {
        // a-b-c-d as 0-1-2-3
        FinitePatch::new(0..4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn small_examples() {
        let edge = FinitePatch::new([5, 9], [(5, 9)]).unwrap();
        assert_eq!(karaganis_constrained(&edge, 5, 9).unwrap().vertices(), &[5, 9]);
        assert_eq!(karaganis_constrained(&p4(), 1, 2).unwrap().vertices(), &[1, 0, 3, 2]);
        let tri = FinitePatch::new(0..3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(karaganis_constrained(&tri, 0, 1).unwrap().vertices(), &[0, 2, 1]);
    }

    #[test]
    fn rejects_bad_input() {
        let two = FinitePatch::new([0, 1, 2], [(0, 1)]).unwrap();
        assert_eq!(karaganis_constrained(&two, 0, 1), Err(Error::Disconnected));
        assert_eq!(karaganis_constrained(&p4(), 1, 1), Err(Error::SameEndpoints));
        assert_eq!(karaganis_constrained(&p4(), 1, 7), Err(Error::NotInPatch(7)));
        assert_eq!(karaganis_constrained(&FinitePatch::default(), 0, 1), Err(Error::EmptyPatch));
    }

    #[test]
    fn concat_and_invert() {
        let p = p4();
        let x = ThreePath::singleton(0);
        let y = ThreePath::singleton(1);
        assert_eq!(x.concat(&y, &p).unwrap().vertices(), &[0, 1]);
        let f = ThreePath::new(0, vec![0, 1]).unwrap();
        let g = ThreePath::new(5, vec![3, 2]).unwrap();
        let h = f.concat(&g, &p).unwrap();
        assert_eq!(h.domain(), (0, 3));
        assert_eq!(h.vertices(), &[0, 1, 3, 2]);
        assert!(h.extends(&f));
        assert_eq!(f.concat(&ThreePath::singleton(1), &p), Err(Error::PathOverlap(1)));
        let far = FinitePatch::new(0..5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(ThreePath::singleton(0).concat(&ThreePath::singleton(4), &far), Err(Error::JumpTooLong { from: 0, to: 4 }));

        let e = ThreePath::new(0, vec![7, 8]).unwrap();
        let inv = e.invert();
        assert_eq!((inv.domain(), inv.vertices()), ((-1, 0), &[8, 7][..]));
        assert_eq!(inv.invert(), e);
        assert_eq!(h.invert().vertices(), &[2, 3, 1, 0]);
    }

    #[test]
    fn json_shape() {
        let f = ThreePath::new(-2, vec![4, 1]).unwrap();
        assert_eq!(f.to_json(), serde_json::json!({"start": -2, "vertices": [4, 1]}));
    }
}

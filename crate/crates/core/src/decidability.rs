//! Semideciding finite components of `G - V`, and deciding their absence on
//! one- and two-ended graphs by dovetailing two semidecision procedures.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::graph::{Bfs, CayleyGraph, GraphOracle, UnionFind};
use crate::groups::{Ends, EndsCertificate};
use crate::paths::ThreePath;
use crate::Vertex;

/// Ball around `sources` in the whole graph with `deleted` removed,
/// grown a layer at a time while tracking connected pieces.
struct Window<'a> {
    bfs: Bfs<'a>,
    deleted: &'a BTreeSet<Vertex>,
    uf: UnionFind,
}

impl<'a> Window<'a> {
    fn new(oracle: &'a dyn GraphOracle, sources: impl IntoIterator<Item = Vertex>, deleted: &'a BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Self> {
        let bfs = Bfs::new(oracle, sources);
        let mut w = Window { bfs, deleted, uf: UnionFind::default() };
        let initial: Vec<Vertex> = w.bfs.vertices().to_vec();
        w.absorb(&initial, fuel)?;
        Ok(w)
    }

    fn absorb(&mut self, layer: &[Vertex], fuel: &mut Fuel) -> Result<()> {
        for &x in layer {
            if self.deleted.contains(&x) {
                continue;
            }
            fuel.spend(1)?;
            self.uf.insert(x);
            for &y in self.bfs.oracle().neighbors(x)?.iter() {
                if self.uf.contains(y) {
                    self.uf.union(x, y);
                }
            }
        }
        Ok(())
    }

    /// Grows one layer; false once nothing new was found.
    fn grow(&mut self, fuel: &mut Fuel) -> Result<bool> {
        let grew = self.bfs.grow(fuel)?;
        let layer = self.bfs.outer_layer().to_vec();
        self.absorb(&layer, fuel)?;
        Ok(grew)
    }

    fn root(&mut self, v: Vertex) -> Option<usize> {
        self.uf.find(v)
    }

    /// Roots of pieces that still reach the outer layer, and so may continue.
    fn open_roots(&mut self) -> BTreeSet<usize> {
        let layer = self.bfs.outer_layer().to_vec();
        layer.into_iter().filter_map(|x| self.uf.find(x)).collect()
    }

    /// Pieces with no vertex on the outer layer: whole components of the
    /// complement.
    fn closed_pieces(&mut self) -> Vec<Vec<Vertex>> {
        let open = self.open_roots();
        let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        let verts = self.bfs.vertices().to_vec();
        for x in verts {
            if let Some(r) = self.uf.find(x) {
                if !open.contains(&r) {
                    groups.entry(r).or_default().push(x);
                }
            }
        }
        sorted_groups(groups.into_values())
    }
}

fn sorted_groups(groups: impl IntoIterator<Item = Vec<Vertex>>) -> Vec<Vec<Vertex>> {
    let mut out: Vec<Vec<Vertex>> = groups
        .into_iter()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort();
    out
}

/// Vertices outside `v` adjacent to it.
pub fn outer_boundary(oracle: &dyn GraphOracle, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<BTreeSet<Vertex>> {
    let mut out = BTreeSet::new();
    for &x in v {
        fuel.spend(1)?;
        for &y in oracle.neighbors(x)?.iter() {
            if !v.contains(&y) {
                out.insert(y);
            }
        }
    }
    Ok(out)
}

fn least_outside(v: &BTreeSet<Vertex>) -> Vertex {
    (0..).find(|x| !v.contains(x)).expect("finite set")
}

/// One round at a time: compares the pieces of `B(v0, n) - V` and
/// `B(v0, n+1) - V`; halts on a piece that did not change.
pub struct FiniteComponentSearch<'a> {
    window: Window<'a>,
    rounds: usize,
}

impl<'a> FiniteComponentSearch<'a> {
    pub fn new(oracle: &'a dyn GraphOracle, v: &'a BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Self> {
        let v0 = least_outside(v);
        Ok(FiniteComponentSearch { window: Window::new(oracle, [v0], v, fuel)?, rounds: 0 })
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Runs round `n = rounds + 1`; returns a finite component if found.
    pub fn step(&mut self, fuel: &mut Fuel) -> Result<Option<Vec<Vertex>>> {
        self.rounds += 1;
        let n = self.rounds;
        // pieces of B(v0, n+1) - V lying inside B(v0, n) coincide with a
        // piece of B(v0, n) - V
        while self.window.bfs.radius() < n + 1 {
            self.window.grow(fuel)?;
        }
        Ok(self.window.closed_pieces().into_iter().next())
    }
}

/// Searches for complement paths between the vertices of `V0`, halting once
/// they fall into at most `classes` groups.
pub struct ConnectivitySearch<'a> {
    window: Window<'a>,
    boundary: Vec<Vertex>,
    classes: usize,
    rounds: usize,
}

impl<'a> ConnectivitySearch<'a> {
    pub fn new(oracle: &'a dyn GraphOracle, v: &'a BTreeSet<Vertex>, classes: usize, fuel: &mut Fuel) -> Result<Self> {
        let boundary = outer_boundary(oracle, v, fuel)?.into_iter().collect();
        let window = Window::new(oracle, v.iter().copied(), v, fuel)?;
        Ok(ConnectivitySearch { window, boundary, classes, rounds: 0 })
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Grows the search by one layer; returns the grouping of `V0` once it
    /// has at most the allowed number of classes.
    pub fn step(&mut self, fuel: &mut Fuel) -> Result<Option<Vec<Vec<Vertex>>>> {
        self.rounds += 1;
        self.window.grow(fuel)?;
        let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for &b in &self.boundary {
            let r = self.window.root(b).expect("boundary vertices are in the window");
            groups.entry(r).or_default().push(b);
        }
        Ok((groups.len() <= self.classes).then(|| sorted_groups(groups.into_values())))
    }
}

/// Outcome of running two semideciders in lockstep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DovetailTrace {
    pub finite_search_rounds: usize,
    pub connectivity_rounds: usize,
}

/// A verdict with the evidence behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every component of the complement is infinite; the boundary splits
    /// into these classes.
    NoFiniteComponent(Vec<Vec<Vertex>>),
    /// This set is a finite component of the complement.
    FiniteComponent(Vec<Vertex>),
}

impl Verdict {
    pub fn no_finite_component(&self) -> bool {
        matches!(self, Verdict::NoFiniteComponent(_))
    }
}

fn dovetail(oracle: &dyn GraphOracle, v: &BTreeSet<Vertex>, classes: usize, fuel: &mut Fuel) -> Result<(Verdict, DovetailTrace)> {
    let mut finite = FiniteComponentSearch::new(oracle, v, fuel)?;
    let mut connect = ConnectivitySearch::new(oracle, v, classes, fuel)?;
    loop {
        let found = finite.step(fuel)?;
        let joined = connect.step(fuel)?;
        let trace = DovetailTrace { finite_search_rounds: finite.rounds(), connectivity_rounds: connect.rounds() };
        match (found, joined) {
            (Some(_), Some(_)) => return Err(Error::InconsistentEnds),
            (Some(c), None) => return Ok((Verdict::FiniteComponent(c), trace)),
            (None, Some(g)) => return Ok((Verdict::NoFiniteComponent(g), trace)),
            (None, None) => {}
        }
    }
}

/// Halts with a finite component of `G - V` if one exists; otherwise runs
/// until the fuel is spent.
pub fn semidecide_finite_component(oracle: &dyn GraphOracle, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Vec<Vertex>> {
    let mut search = FiniteComponentSearch::new(oracle, v, fuel)?;
    loop {
        if let Some(c) = search.step(fuel)? {
            return Ok(c);
        }
    }
}

pub fn decide_no_finite_component_one_end(oracle: &dyn GraphOracle, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<bool> {
    Ok(dovetail(oracle, v, 1, fuel)?.0.no_finite_component())
}

pub fn decide_no_finite_component_two_ends(oracle: &dyn GraphOracle, v: &BTreeSet<Vertex>, cert: &EndsCertificate, fuel: &mut Fuel) -> Result<bool> {
    if !cert.separator.iter().all(|s| v.contains(s)) {
        return Err(Error::SeparatorMissing);
    }
    Ok(dovetail(oracle, v, 2, fuel)?.0.no_finite_component())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeciderMode {
    OneEnded,
    TwoEnded(EndsCertificate),
}

/// Components of `G - S`: the finite ones listed, the infinite ones labelled
/// by small integers on the probes that fall in them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementAnalysis {
    pub finite_components: Vec<Vec<Vertex>>,
    pub infinite_class: BTreeMap<Vertex, usize>,
}

impl ComplementAnalysis {
    pub fn finite_vertices(&self) -> BTreeSet<Vertex> {
        self.finite_components.iter().flatten().copied().collect()
    }

    pub fn same_infinite_component(&self, a: Vertex, b: Vertex) -> bool {
        matches!((self.infinite_class.get(&a), self.infinite_class.get(&b)), (Some(x), Some(y)) if x == y)
    }
}

/// Decision procedures for a graph with one or two declared ends.
#[derive(Clone)]
pub struct EndsDecider {
    oracle: Arc<dyn GraphOracle>,
    mode: DeciderMode,
}

impl EndsDecider {
    pub fn new(oracle: Arc<dyn GraphOracle>, mode: DeciderMode) -> Result<Self> {
        if let DeciderMode::TwoEnded(cert) = &mode {
            cert.validate()?;
        }
        Ok(EndsDecider { oracle, mode })
    }

    /// Decider for a Cayley graph, using its declared ends and certificate.
    pub fn for_cayley(graph: Arc<CayleyGraph>) -> Result<Self> {
        let group = graph.group().clone();
        let mode = match group.declared_ends() {
            Ends::One => DeciderMode::OneEnded,
            Ends::Two => {
                let wc = group.word_certificate().ok_or(Error::MissingCertificate)?;
                let names = |ws: &[crate::groups::Word]| ws.iter().map(|w| graph.vertex(w)).collect::<Result<Vec<_>>>();
                DeciderMode::TwoEnded(EndsCertificate { separator: names(&wc.separator)?, side_a: names(&wc.side_a)?, side_b: names(&wc.side_b)? })
            }
            Ends::Many => return Err(Error::TooManyEnds),
        };
        EndsDecider::new(graph, mode)
    }

    pub fn oracle(&self) -> &dyn GraphOracle {
        &*self.oracle
    }

    pub fn oracle_arc(&self) -> &Arc<dyn GraphOracle> {
        &self.oracle
    }

    pub fn mode(&self) -> &DeciderMode {
        &self.mode
    }

    pub fn ends(&self) -> usize {
        match self.mode {
            DeciderMode::OneEnded => 1,
            DeciderMode::TwoEnded(_) => 2,
        }
    }

    pub fn separator(&self) -> BTreeSet<Vertex> {
        match &self.mode {
            DeciderMode::OneEnded => BTreeSet::new(),
            DeciderMode::TwoEnded(c) => c.separator.iter().copied().collect(),
        }
    }

    /// `v` together with the separator in two-ended mode.
    pub fn augment(&self, v: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        let mut out = v.clone();
        out.extend(self.separator());
        out
    }

    pub fn decide(&self, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Verdict> {
        Ok(self.decide_traced(v, fuel)?.0)
    }

    pub fn decide_traced(&self, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<(Verdict, DovetailTrace)> {
        let full = self.augment(v);
        dovetail(self.oracle(), &full, self.ends(), fuel)
    }

    pub fn no_finite_component(&self, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<bool> {
        Ok(self.decide(v, fuel)?.no_finite_component())
    }

    /// Unvisited vertices within distance 3 of `x`, in increasing order.
    pub fn candidates_near(&self, x: Vertex, visited: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Vec<Vertex>> {
        let mut bfs = Bfs::new(self.oracle(), [x]);
        bfs.grow_to(3, fuel)?;
        let mut out: Vec<Vertex> = bfs.vertices().iter().copied().filter(|v| !visited.contains(v)).collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Witness pair `(first side, last side)` for a bi-extensible path:
    /// distinct unvisited vertices near the first and last vertex.
    pub fn witnesses(&self, path: &ThreePath, fuel: &mut Fuel) -> Result<Option<(Vertex, Vertex)>> {
        let visited = self.augment(&path.vertex_set());
        let near_last = self.candidates_near(path.last(), &visited, fuel)?;
        let near_first = self.candidates_near(path.first(), &visited, fuel)?;
        for &a in &near_first {
            if let Some(&b) = near_last.iter().find(|&&b| b != a) {
                return Ok(Some((a, b)));
            }
        }
        Ok(None)
    }

    pub fn right_witness(&self, path: &ThreePath, fuel: &mut Fuel) -> Result<Option<Vertex>> {
        let visited = self.augment(&path.vertex_set());
        Ok(self.candidates_near(path.last(), &visited, fuel)?.first().copied())
    }

    pub fn is_right_extensible(&self, path: &ThreePath, fuel: &mut Fuel) -> Result<bool> {
        if self.right_witness(path, fuel)?.is_none() {
            return Ok(false);
        }
        self.no_finite_component(&path.vertex_set(), fuel)
    }

    pub fn is_bi_extensible(&self, path: &ThreePath, fuel: &mut Fuel) -> Result<bool> {
        if self.witnesses(path, fuel)?.is_none() {
            return Ok(false);
        }
        self.no_finite_component(&path.vertex_set(), fuel)
    }

    /// Finite components of `G - S` and a labelling of the infinite
    /// components met by `probes`. In two-ended mode the separator is
    /// removed first and its vertices outside `S` are glued back at the end.
    pub fn analyze_complement(&self, s: &BTreeSet<Vertex>, probes: &[Vertex], fuel: &mut Fuel) -> Result<ComplementAnalysis> {
        let oracle = self.oracle();
        let full = self.augment(s);
        let boundary = outer_boundary(oracle, &full, fuel)?;
        let tracked: BTreeSet<Vertex> = boundary.iter().copied().chain(probes.iter().copied().filter(|p| !full.contains(p))).collect();
        let mut window = Window::new(oracle, full.iter().copied().chain(tracked.iter().copied()), &full, fuel)?;
        loop {
            let open = window.open_roots();
            let tracked_open: BTreeSet<usize> = tracked.iter().filter_map(|&t| window.root(t)).filter(|r| open.contains(r)).collect();
            if tracked_open.len() <= self.ends() {
                break;
            }
            window.grow(fuel)?;
        }
        let open = window.open_roots();
        let glue: Vec<Vertex> = full.difference(s).copied().collect();
        // glue separator vertices back, recording which pieces they join
        let mut pieces: UnionFind = UnionFind::default();
        let verts = window.bfs.vertices().to_vec();
        let mut root_of: BTreeMap<Vertex, usize> = BTreeMap::new();
        for &x in &verts {
            if let Some(r) = window.root(x) {
                root_of.insert(x, r);
                pieces.insert(r as Vertex);
            }
        }
        let glue_base = Vertex::MAX / 2;
        for (i, &g) in glue.iter().enumerate() {
            let gid = glue_base + i as Vertex;
            pieces.insert(gid);
            for &y in oracle.neighbors(g)?.iter() {
                if let Some(&r) = root_of.get(&y) {
                    pieces.union(gid, r as Vertex);
                } else if let Some(j) = glue.iter().position(|&h| h == y) {
                    pieces.union(gid, glue_base + j as Vertex);
                }
            }
        }
        let open_merged: BTreeSet<usize> = open.iter().filter_map(|&r| pieces.find(r as Vertex)).collect();
        let mut finite: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        let mut infinite_class = BTreeMap::new();
        let mut class_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut labelled: Vec<(Vertex, usize)> = root_of.iter().map(|(&x, &r)| (x, pieces.find(r as Vertex).unwrap())).collect();
        for (i, &g) in glue.iter().enumerate() {
            labelled.push((g, pieces.find(glue_base + i as Vertex).unwrap()));
        }
        for (x, m) in labelled {
            if open_merged.contains(&m) {
                if tracked.contains(&x) || probes.contains(&x) {
                    let next = class_ids.len();
                    let id = *class_ids.entry(m).or_insert(next);
                    infinite_class.insert(x, id);
                }
            } else {
                finite.entry(m).or_default().push(x);
            }
        }
        Ok(ComplementAnalysis { finite_components: sorted_groups(finite.into_values()), infinite_class })
    }
}

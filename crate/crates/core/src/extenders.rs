//! Right- and bi-extensible 3-paths, and growing a bi-extensible path so
//! that it visits a chosen vertex.

use std::collections::{BTreeMap, BTreeSet};

use crate::decidability::{DeciderMode, EndsDecider};
use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::graph::{distance_with_fuel, shortest_path_avoiding, Bfs, FinitePatch};
use crate::paths::{karaganis_constrained, ThreePath};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witnesses {
    /// Unvisited vertex within distance 3 of the last vertex.
    Right(Vertex),
    /// Distinct unvisited vertices near the first and the last vertex.
    Both { first: Vertex, last: Vertex },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensibleState {
    pub path: ThreePath,
    /// Ball of radius 1 around the path and its witnesses.
    pub window: FinitePatch,
    pub witnesses: Witnesses,
}

impl ExtensibleState {
    pub fn is_bi_extensible(&self) -> bool {
        matches!(self.witnesses, Witnesses::Both { .. })
    }

    fn build(dec: &EndsDecider, path: ThreePath, witnesses: Witnesses, fuel: &mut Fuel) -> Result<Self> {
        let mut centres: Vec<Vertex> = path.vertices().to_vec();
        match witnesses {
            Witnesses::Right(x) => centres.push(x),
            Witnesses::Both { first, last } => centres.extend([first, last]),
        }
        let mut bfs = Bfs::new(dec.oracle(), centres);
        bfs.grow_to(1, fuel)?;
        let window = FinitePatch::induced(dec.oracle(), bfs.vertices().iter().copied(), fuel)?;
        Ok(ExtensibleState { path, window, witnesses })
    }
}

fn near(dec: &EndsDecider, x: Vertex, visited: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Vec<Vertex>> {
    dec.candidates_near(x, visited, fuel)
}

/// Whether `G - V` has no finite component, for any finite `V`.
pub fn complement_has_no_finite_component(dec: &EndsDecider, v: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<bool> {
    if dec.separator().is_subset(v) {
        dec.no_finite_component(v, fuel)
    } else {
        Ok(dec.analyze_complement(v, &[], fuel)?.finite_components.is_empty())
    }
}

/// Witness pair: the least vertex near the first vertex, then the least
/// other one near the last. With two ends a pair split between the two
/// infinite components is preferred.
pub fn choose_witnesses(dec: &EndsDecider, path: &ThreePath, fuel: &mut Fuel) -> Result<Option<(Vertex, Vertex)>> {
    let visited = path.vertex_set();
    let firsts = near(dec, path.first(), &visited, fuel)?;
    let lasts = near(dec, path.last(), &visited, fuel)?;
    if let DeciderMode::TwoEnded(_) = dec.mode() {
        let probes: Vec<Vertex> = firsts.iter().chain(&lasts).copied().collect();
        let analysis = dec.analyze_complement(&visited, &probes, fuel)?;
        for &a in &firsts {
            for &b in &lasts {
                if a != b && analysis.infinite_class.contains_key(&a) && analysis.infinite_class.contains_key(&b) && !analysis.same_infinite_component(a, b) {
                    return Ok(Some((a, b)));
                }
            }
        }
    }
    for &a in &firsts {
        if let Some(&b) = lasts.iter().find(|&&b| b != a) {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

/// Full check of a bi-extensible candidate; returns the resulting state.
pub fn certify_bi_extensible(dec: &EndsDecider, path: ThreePath, fuel: &mut Fuel) -> Result<Option<ExtensibleState>> {
    let Some((first, last)) = choose_witnesses(dec, &path, fuel)? else {
        return Ok(None);
    };
    if !complement_has_no_finite_component(dec, &path.vertex_set(), fuel)? {
        return Ok(None);
    }
    Ok(Some(ExtensibleState::build(dec, path, Witnesses::Both { first, last }, fuel)?))
}

// Finite components of G - x that touch `around`.
fn finite_pockets(dec: &EndsDecider, x: &BTreeSet<Vertex>, around: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<BTreeSet<Vertex>> {
    let analysis = dec.analyze_complement(x, &[], fuel)?;
    let mut out = BTreeSet::new();
    for comp in analysis.finite_components {
        let mut touches = false;
        for &c in &comp {
            if dec.oracle().neighbors(c)?.iter().any(|n| around.contains(n)) {
                touches = true;
                break;
            }
        }
        if touches {
            out.extend(comp);
        }
    }
    Ok(out)
}

fn closure(dec: &EndsDecider, core: &BTreeSet<Vertex>, blocked: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<BTreeSet<Vertex>> {
    let x: BTreeSet<Vertex> = core.union(blocked).copied().collect();
    let mut lam = core.clone();
    lam.extend(finite_pockets(dec, &x, core, fuel)?);
    Ok(lam)
}

/// Least vertex of `lam` other than `avoid` adjacent to a vertex outside
/// `lam` and `blocked`, else the least one with such a vertex within
/// distance 3.
fn exit_vertex(dec: &EndsDecider, lam: &BTreeSet<Vertex>, avoid: Vertex, blocked: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Option<Vertex>> {
    let outside = |y: &Vertex| !lam.contains(y) && !blocked.contains(y);
    for &x in lam.iter().filter(|&&x| x != avoid) {
        fuel.spend(1)?;
        if dec.oracle().neighbors(x)?.iter().any(outside) {
            return Ok(Some(x));
        }
    }
    for &x in lam.iter().filter(|&&x| x != avoid) {
        let mut bfs = Bfs::new(dec.oracle(), [x]);
        bfs.grow_to(3, fuel)?;
        if bfs.vertices().iter().any(outside) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Right-extensible 3-path in `G - blocked` starting at `u` and visiting
/// `target`: a shortest path, closed under finite pockets, then traversed
/// by a constrained Hamiltonian 3-path ending at a vertex on its boundary.
fn right_extensible_avoiding(dec: &EndsDecider, u: Vertex, target: Vertex, blocked: &BTreeSet<Vertex>, fuel: &mut Fuel) -> Result<Option<ThreePath>> {
    let Some(walk) = shortest_path_avoiding(dec.oracle(), u, target, &|x| blocked.contains(&x), usize::MAX, fuel)? else {
        return Ok(None);
    };
    let lam = closure(dec, &walk.into_iter().collect(), blocked, fuel)?;
    if lam.len() == 1 {
        return Ok(Some(ThreePath::singleton(u)));
    }
    let Some(end) = exit_vertex(dec, &lam, u, blocked, fuel)? else {
        return Ok(None);
    };
    let patch = FinitePatch::induced(dec.oracle(), lam.iter().copied(), fuel)?;
    Ok(Some(karaganis_constrained(&patch, u, end)?))
}

/// Right-extensible 3-path starting at `u` and visiting `v`.
pub fn make_right_extensible(dec: &EndsDecider, u: Vertex, v: Vertex, fuel: &mut Fuel) -> Result<ExtensibleState> {
    let path = right_extensible_avoiding(dec, u, v, &BTreeSet::new(), fuel)?.ok_or(Error::NotExtensible("no right-extensible path found"))?;
    let witness = dec.candidates_near(path.last(), &path.vertex_set(), fuel)?.first().copied().ok_or(Error::NotExtensible("no right witness"))?;
    if !complement_has_no_finite_component(dec, &path.vertex_set(), fuel)? {
        return Err(Error::NotExtensible("complement has a finite component"));
    }
    ExtensibleState::build(dec, path, Witnesses::Right(witness), fuel)
}

/// Bi-extensible 3-path visiting `w`, traversing `{w, w'}` closed under
/// finite pockets.
pub fn make_bi_extensible(dec: &EndsDecider, w: Vertex, fuel: &mut Fuel) -> Result<ExtensibleState> {
    let oracle = dec.oracle();
    let w2 = *oracle.neighbors(w)?.first().ok_or(Error::NotExtensible("isolated vertex"))?;
    let lam = closure(dec, &BTreeSet::from([w, w2]), &BTreeSet::new(), fuel)?;
    let mut start = None;
    for &x in &lam {
        fuel.spend(1)?;
        if oracle.neighbors(x)?.iter().any(|y| !lam.contains(y)) {
            start = Some(x);
            break;
        }
    }
    let u = start.ok_or(Error::NotExtensible("finite graph"))?;
    let v = oracle.neighbors(u)?.iter().copied().find(|y| lam.contains(y)).expect("connected, at least two vertices");
    let patch = FinitePatch::induced(oracle, lam.iter().copied(), fuel)?;
    let path = karaganis_constrained(&patch, u, v)?;
    certify_bi_extensible(dec, path, fuel)?.ok_or(Error::NotExtensible("initial path is not bi-extensible"))
}

/// Checks that `candidate` extends `old` in both directions, visits `w`,
/// is a 3-path, and is bi-extensible.
pub fn validate_extension(dec: &EndsDecider, old: &ThreePath, candidate: ThreePath, w: Vertex, fuel: &mut Fuel) -> Result<Option<ExtensibleState>> {
    if candidate.start() >= old.start() || candidate.end() <= old.end() || !candidate.extends(old) || candidate.position(w).is_none() {
        return Ok(None);
    }
    if candidate.len() != candidate.vertex_set().len() {
        return Ok(None);
    }
    let vs = candidate.vertices();
    let lo = (old.start() - candidate.start()) as usize;
    let hi = lo + old.len() - 1;
    for i in (0..lo).chain(hi..vs.len() - 1) {
        if distance_with_fuel(dec.oracle(), vs[i], vs[i + 1], 3, fuel)?.is_none() {
            return Ok(None);
        }
    }
    certify_bi_extensible(dec, candidate, fuel)
}

fn assemble(g: &[Vertex], f: &ThreePath, h: &[Vertex]) -> Result<ThreePath> {
    let mut vs: Vec<Vertex> = g.iter().rev().copied().collect();
    vs.extend_from_slice(f.vertices());
    vs.extend_from_slice(h);
    ThreePath::new(f.start() - g.len() as i64, vs)
}

// The two-sided construction: g grows from the witness near the first
// vertex, h from the one near the last, one of them reaching w.
fn accelerated(dec: &EndsDecider, st: &ExtensibleState, w: Vertex, fuel: &mut Fuel) -> Result<Option<ThreePath>> {
    let Witnesses::Both { first: a, last: b } = st.witnesses else {
        return Ok(None);
    };
    let f = &st.path;
    let visited = f.vertex_set();
    let analysis = dec.analyze_complement(&visited, &[a, b, w], fuel)?;
    let w_new = !visited.contains(&w);
    if !analysis.same_infinite_component(a, b) {
        let tg = if w_new && analysis.same_infinite_component(a, w) { w } else { a };
        let th = if w_new && analysis.same_infinite_component(b, w) { w } else { b };
        if w_new && tg != w && th != w {
            return Ok(None);
        }
        let Some(g) = right_extensible_avoiding(dec, a, tg, &visited, fuel)? else {
            return Ok(None);
        };
        let mut blocked = visited.clone();
        blocked.extend(g.vertices().iter().copied());
        let Some(h) = right_extensible_avoiding(dec, b, th, &blocked, fuel)? else {
            return Ok(None);
        };
        return Ok(Some(assemble(g.vertices(), f, h.vertices())?));
    }
    let t = if w_new { w } else { a };
    let block = |x: Vertex| visited.contains(&x);
    let Some(pa) = shortest_path_avoiding(dec.oracle(), a, t, &block, usize::MAX, fuel)? else {
        return Ok(None);
    };
    let Some(pb) = shortest_path_avoiding(dec.oracle(), b, t, &block, usize::MAX, fuel)? else {
        return Ok(None);
    };
    let core: BTreeSet<Vertex> = pa.into_iter().chain(pb).collect();
    let lam = closure(dec, &core, &visited, fuel)?;
    let patch = FinitePatch::induced(dec.oracle(), lam.iter().copied(), fuel)?;
    let p = karaganis_constrained(&patch, a, b)?;
    let pv = p.vertices();
    let index: BTreeMap<Vertex, usize> = pv.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let outside = |y: &Vertex| !lam.contains(y) && !visited.contains(y);
    for &x in &lam {
        fuel.spend(1)?;
        if !dec.oracle().neighbors(x)?.iter().any(outside) {
            continue;
        }
        let i = index[&x];
        // split next to a short jump so both new ends stay near x
        let split = if i + 1 < pv.len() && distance_with_fuel(dec.oracle(), x, pv[i + 1], 2, fuel)?.is_some() {
            i + 1
        } else if i > 0 && distance_with_fuel(dec.oracle(), pv[i - 1], x, 2, fuel)?.is_some() {
            i
        } else {
            continue;
        };
        let g = &pv[..split];
        let h: Vec<Vertex> = pv[split..].iter().rev().copied().collect();
        return Ok(Some(assemble(g, f, &h)?));
    }
    Ok(None)
}

/// Deterministic exhaustive search. Candidates add a walk `r` outward from
/// the first vertex and a walk `q` outward from the last, inside the ball of
/// radius `rho` around the path for `rho = 4, 8, 16, ...`; they are tried by
/// total added length, then by `|r|`, then lexicographically on `(r, q)`.
fn exhaustive(dec: &EndsDecider, st: &ExtensibleState, w: Vertex, fuel: &mut Fuel) -> Result<ExtensibleState> {
    let f = &st.path;
    let visited = f.vertex_set();
    let mut rho = 4;
    loop {
        let mut bfs = Bfs::new(dec.oracle(), visited.iter().copied());
        bfs.grow_to(rho, fuel)?;
        let allowed: Vec<Vertex> = {
            let mut a: Vec<Vertex> = bfs.vertices().iter().copied().filter(|x| !visited.contains(x)).collect();
            a.sort_unstable();
            a
        };
        let mut hops: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
        for &x in allowed.iter().chain([f.first(), f.last()].iter()) {
            let mut b = Bfs::new(dec.oracle(), [x]);
            b.grow_to(3, fuel)?;
            let mut n: Vec<Vertex> = b.vertices().iter().copied().filter(|y| *y != x && allowed.binary_search(y).is_ok()).collect();
            n.sort_unstable();
            hops.insert(x, n);
        }
        for total in 2..=allowed.len() {
            for lr in 1..total {
                let mut search = Search { dec, st, w, hops: &hops, fuel: &mut *fuel, used: BTreeSet::new(), found: None };
                search.walks(f.first(), lr, total - lr, &mut Vec::new())?;
                if let Some(found) = search.found {
                    return Ok(found);
                }
            }
        }
        rho *= 2;
    }
}

struct Search<'a> {
    dec: &'a EndsDecider,
    st: &'a ExtensibleState,
    w: Vertex,
    hops: &'a BTreeMap<Vertex, Vec<Vertex>>,
    fuel: &'a mut Fuel,
    used: BTreeSet<Vertex>,
    found: Option<ExtensibleState>,
}

impl Search<'_> {
    fn walks(&mut self, from: Vertex, left: usize, right: usize, r: &mut Vec<Vertex>) -> Result<()> {
        if self.found.is_some() {
            return Ok(());
        }
        if left == 0 {
            let r = r.clone();
            return self.suffix(self.st.path.last(), right, &r, &mut Vec::new());
        }
        for &x in &self.hops[&from] {
            if self.used.insert(x) {
                r.push(x);
                self.walks(x, left - 1, right, r)?;
                r.pop();
                self.used.remove(&x);
            }
        }
        Ok(())
    }

    fn suffix(&mut self, from: Vertex, right: usize, r: &[Vertex], q: &mut Vec<Vertex>) -> Result<()> {
        if self.found.is_some() {
            return Ok(());
        }
        if right == 0 {
            self.fuel.spend(1)?;
            let visits = self.st.path.position(self.w).is_some() || r.contains(&self.w) || q.contains(&self.w);
            if !visits {
                return Ok(());
            }
            let candidate = assemble(r, &self.st.path, q)?;
            self.found = validate_extension(self.dec, &self.st.path, candidate, self.w, self.fuel)?;
            return Ok(());
        }
        for &x in &self.hops[&from] {
            if self.used.insert(x) {
                q.push(x);
                self.suffix(x, right - 1, r, q)?;
                q.pop();
                self.used.remove(&x);
            }
        }
        Ok(())
    }
}

/// Extends a bi-extensible state in both directions so that it visits `w`.
pub fn extend_to_visit(dec: &EndsDecider, st: &ExtensibleState, w: Vertex, fuel: &mut Fuel) -> Result<ExtensibleState> {
    if !st.is_bi_extensible() {
        return Err(Error::NotExtensible("state is only right-extensible"));
    }
    if let Some(candidate) = accelerated(dec, st, w, fuel)? {
        if let Some(next) = validate_extension(dec, &st.path, candidate, w, fuel)? {
            return Ok(next);
        }
    }
    exhaustive(dec, st, w, fuel)
}

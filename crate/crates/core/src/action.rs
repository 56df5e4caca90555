//! The translation-like action by the integers: a growing Hamiltonian
//! bi-infinite 3-path for graphs with one or two ends, right multiplication
//! by a cyclic subgroup for groups with more.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::decidability::EndsDecider;
use crate::error::{Error, Result};
use crate::extenders::{extend_to_visit, make_bi_extensible, ExtensibleState};
use crate::fuel::Fuel;
use crate::graph::{CayleyGraph, GraphOracle};
use crate::groups::{builtin_group, BuiltinGroup, Ends};
use crate::paths::ThreePath;
use crate::stallings::{builtin_splitting, Splitting};
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Transitive,
    Subgroup,
}

enum Mode {
    Transitive(Box<Transitive>),
    Subgroup { graph: Arc<CayleyGraph>, splitting: Splitting },
}

struct Transitive {
    dec: EndsDecider,
    state: Option<ExtensibleState>,
    /// Domain of stage `i`; stages are restrictions of the current path.
    domains: Vec<(i64, i64)>,
    index: HashMap<Vertex, i64>,
}

/// Evaluates `v * n`. Transitive engines cache their stages, so evaluation
/// takes `&mut self`.
pub struct ActionEngine {
    mode: Mode,
}

impl std::fmt::Debug for ActionEngine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ActionEngine").field("kind", &self.kind()).field("stages", &self.stages_built()).finish()
    }
}

impl ActionEngine {
    /// Transitive engine on a graph with one or two ends; vertex `i` is the
    /// target of stage `i`.
    pub fn transitive(dec: EndsDecider) -> Self {
        ActionEngine { mode: Mode::Transitive(Box::new(Transitive { dec, state: None, domains: Vec::new(), index: HashMap::new() })) }
    }

    /// Right multiplication by the cyclic generator of `splitting`.
    pub fn subgroup(graph: Arc<CayleyGraph>, splitting: Splitting) -> Result<Self> {
        if graph.group().generator_count() != splitting.group().generator_count() {
            return Err(Error::InvalidData("splitting and graph use different generators".into()));
        }
        Ok(ActionEngine { mode: Mode::Subgroup { graph, splitting } })
    }

    /// Chooses the mode from the declared number of ends.
    pub fn for_cayley(graph: Arc<CayleyGraph>, splitting: Option<Splitting>) -> Result<Self> {
        match (graph.group().declared_ends(), splitting) {
            (Ends::Many, Some(s)) => ActionEngine::subgroup(graph, s),
            (Ends::Many, None) => Err(Error::TooManyEnds),
            (_, _) => Ok(ActionEngine::transitive(EndsDecider::for_cayley(graph)?)),
        }
    }

    pub fn for_builtin(name: BuiltinGroup) -> Result<Self> {
        let graph = Arc::new(CayleyGraph::new(&builtin_group(name)?));
        let splitting = match graph.group().declared_ends() {
            Ends::Many => Some(builtin_splitting(name)?),
            _ => None,
        };
        ActionEngine::for_cayley(graph, splitting)
    }

    pub fn kind(&self) -> ActionKind {
        match self.mode {
            Mode::Transitive(_) => ActionKind::Transitive,
            Mode::Subgroup { .. } => ActionKind::Subgroup,
        }
    }

    pub fn oracle(&self) -> &dyn GraphOracle {
        match &self.mode {
            Mode::Transitive(t) => t.dec.oracle(),
            Mode::Subgroup { graph, .. } => &**graph,
        }
    }

    pub fn splitting(&self) -> Option<&Splitting> {
        match &self.mode {
            Mode::Subgroup { splitting, .. } => Some(splitting),
            Mode::Transitive(_) => None,
        }
    }

    fn transitive_mut(&mut self) -> Result<&mut Transitive> {
        match &mut self.mode {
            Mode::Transitive(t) => Ok(t),
            Mode::Subgroup { .. } => Err(Error::WrongMode("transitive")),
        }
    }

    fn transitive_ref(&self) -> Result<&Transitive> {
        match &self.mode {
            Mode::Transitive(t) => Ok(t),
            Mode::Subgroup { .. } => Err(Error::WrongMode("transitive")),
        }
    }

    /// Number of stages built so far.
    pub fn stages_built(&self) -> usize {
        match &self.mode {
            Mode::Transitive(t) => t.domains.len(),
            Mode::Subgroup { .. } => 0,
        }
    }

    /// Stage `i`, building it and its predecessors if needed.
    pub fn build_stage(&mut self, i: usize, fuel: &mut Fuel) -> Result<ThreePath> {
        let t = self.transitive_mut()?;
        while t.domains.len() <= i {
            t.grow(fuel)?;
        }
        t.stage(i)
    }

    /// The path of the newest stage.
    pub fn current_path(&self) -> Option<&ThreePath> {
        self.transitive_ref().ok()?.state.as_ref().map(|s| &s.path)
    }

    /// `f^-1(v)` if `v` has been visited.
    pub fn position(&self, v: Vertex) -> Option<i64> {
        self.transitive_ref().ok()?.index.get(&v).copied()
    }

    /// Positions of every visited vertex.
    pub fn visited_index(&self) -> BTreeMap<Vertex, i64> {
        match &self.mode {
            Mode::Transitive(t) => t.index.iter().map(|(&v, &n)| (v, n)).collect(),
            Mode::Subgroup { .. } => BTreeMap::new(),
        }
    }

    pub fn act(&mut self, v: Vertex, n: i64, fuel: &mut Fuel) -> Result<Vertex> {
        match &mut self.mode {
            Mode::Transitive(t) => {
                let p = loop {
                    if let Some(&p) = t.index.get(&v) {
                        break p;
                    }
                    t.grow(fuel)?;
                };
                let target = p.checked_add(n).ok_or_else(|| Error::InvalidData("position overflow".into()))?;
                loop {
                    let path = &t.state.as_ref().expect("grown at least once").path;
                    if let Some(x) = path.get(target) {
                        return Ok(x);
                    }
                    t.grow(fuel)?;
                }
            }
            Mode::Subgroup { graph, splitting } => {
                fuel.spend(n.unsigned_abs() + 1)?;
                let w = graph.word(v)?.concat(&splitting.cyclic_generator().pow(n));
                graph.vertex(&w)
            }
        }
    }

    /// Whether `v` lies in the orbit `u <c>` of `u`.
    pub fn same_orbit(&self, u: Vertex, v: Vertex, fuel: &mut Fuel) -> Result<bool> {
        match &self.mode {
            Mode::Transitive(_) => Ok(true),
            Mode::Subgroup { graph, splitting } => {
                let w = graph.word(u)?.inverse().concat(&graph.word(v)?);
                Ok(splitting.cyclic_power(&w, fuel)?.is_some())
            }
        }
    }

    /// The least vertex of each of the first `count` orbits, in order.
    pub fn orbit_representatives(&self, count: usize, fuel: &mut Fuel) -> Result<Vec<Vertex>> {
        if let Mode::Transitive(_) = self.mode {
            return Ok(if count == 0 { vec![] } else { vec![0] });
        }
        let mut reps: Vec<Vertex> = Vec::new();
        let mut k: Vertex = 0;
        while reps.len() < count {
            fuel.spend(1)?;
            let mut fresh = true;
            for &r in &reps {
                if self.same_orbit(r, k, fuel)? {
                    fresh = false;
                    break;
                }
            }
            if fresh {
                reps.push(k);
            }
            k += 1;
        }
        Ok(reps)
    }
}

impl ActionEngine {
    /// `(rep, n)` with `v = rep * n` and `rep` the representative of the
    /// orbit of `v` listed by [`ActionEngine::orbit_representatives`], which
    /// is the least vertex of that orbit.
    pub fn orbit_coordinates(&mut self, v: Vertex, fuel: &mut Fuel) -> Result<(Vertex, i64)> {
        match &mut self.mode {
            Mode::Transitive(t) => {
                while !(t.index.contains_key(&v) && t.index.contains_key(&0)) {
                    t.grow(fuel)?;
                }
                Ok((0, t.index[&v] - t.index[&0]))
            }
            Mode::Subgroup { graph, splitting } => {
                let target = graph.word(v)?;
                for k in 0..=v {
                    fuel.spend(1)?;
                    let w = graph.word(k)?.inverse().concat(&target);
                    if let Some(n) = splitting.cyclic_power(&w, fuel)? {
                        return Ok((k, n));
                    }
                }
                unreachable!("v lies in its own orbit")
            }
        }
    }
}

impl Transitive {
    fn stage(&self, i: usize) -> Result<ThreePath> {
        let (a, b) = self.domains[i];
        let path = &self.state.as_ref().expect("stage exists").path;
        let verts = (a..=b).map(|n| path.get(n).expect("stage domains are nested")).collect();
        ThreePath::new(a, verts)
    }

    fn grow(&mut self, fuel: &mut Fuel) -> Result<()> {
        let next = match &self.state {
            None => {
                let mut st = make_bi_extensible(&self.dec, 0, fuel)?;
                for s in self.dec.separator() {
                    if st.path.position(s).is_none() {
                        st = extend_to_visit(&self.dec, &st, s, fuel)?;
                    }
                }
                st
            }
            Some(st) => extend_to_visit(&self.dec, st, self.domains.len() as Vertex, fuel)?,
        };
        let (old_start, old_end) = self.domains.last().copied().unwrap_or((1, 0));
        for (n, v) in next.path.iter() {
            if n < old_start || n > old_end {
                self.index.insert(v, n);
            }
        }
        self.domains.push(next.path.domain());
        self.state = Some(next);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::distance;
    use crate::groups::Word;

    fn assert_send<T: Send>() {}

    #[test]
    fn engine_is_transferable() {
        assert_send::<ActionEngine>();
    }

    #[test]
    fn stages_on_z() {
        let mut e = ActionEngine::for_builtin(BuiltinGroup::Z).unwrap();
        let mut fuel = Fuel::default();
        let f10 = e.build_stage(10, &mut fuel).unwrap();
        assert!(f10.len() >= 12);
        for v in 0..=10 {
            assert!(f10.position(v).is_some());
            assert_eq!(e.position(v), f10.position(v));
        }
        let f2 = e.build_stage(2, &mut fuel).unwrap();
        let f3 = e.build_stage(3, &mut fuel).unwrap();
        assert!(f3.extends(&f2));
        assert!(f3.start() < f2.start() && f3.end() > f2.end());
    }

    #[test]
    fn stage_zero_on_z2_visits_identity() {
        let mut e = ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap();
        let f0 = e.build_stage(0, &mut Fuel::default()).unwrap();
        assert!(f0.position(0).is_some());
    }

    #[test]
    fn act_on_z2() {
        let mut e = ActionEngine::for_builtin(BuiltinGroup::Z2).unwrap();
        let mut fuel = Fuel::default();
        for v in [0, 5, 17, 40] {
            assert_eq!(e.act(v, 0, &mut fuel).unwrap(), v);
            let w = e.act(v, 1, &mut fuel).unwrap();
            assert!(distance(e.oracle(), v, w, 3).unwrap().is_some());
            let back = e.act(w, -1, &mut fuel).unwrap();
            assert_eq!(back, v);
        }
    }

    #[test]
    fn subgroup_mode_on_f2() {
        let mut e = ActionEngine::for_builtin(BuiltinGroup::FreeF2).unwrap();
        assert_eq!(e.kind(), ActionKind::Subgroup);
        let g = CayleyGraph::new(&builtin_group(BuiltinGroup::FreeF2).unwrap());
        let at = |s: &str| g.vertex(&g.group().parse_word(s).unwrap()).unwrap();
        let mut fuel = Fuel::default();
        assert_eq!(e.act(at("b"), 2, &mut fuel).unwrap(), at("b.a.a"));
        assert_eq!(e.act(at("b"), -1, &mut fuel).unwrap(), at("b.a^-1"));
        assert!(e.same_orbit(0, at("a^3"), &mut fuel).unwrap());
        assert!(!e.same_orbit(0, at("b"), &mut fuel).unwrap());
        assert!(e.same_orbit(at("b.a"), at("b.a^-2"), &mut fuel).unwrap());
        let reps = e.orbit_representatives(3, &mut fuel).unwrap();
        let words: Vec<Word> = reps.iter().map(|&v| g.word(v).unwrap()).collect();
        assert_eq!(words, vec![Word::empty(), g.group().parse_word("b").unwrap(), g.group().parse_word("b^-1").unwrap()]);
    }

    #[test]
    fn transitive_representatives() {
        let e = ActionEngine::for_builtin(BuiltinGroup::Z).unwrap();
        let mut fuel = Fuel::default();
        assert_eq!(e.orbit_representatives(1, &mut fuel).unwrap(), vec![0]);
        assert!(e.same_orbit(3, 8, &mut fuel).unwrap());
    }
}

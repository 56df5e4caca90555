//! Python bindings.

use std::collections::BTreeMap;
use std::sync::Arc;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tlaction_core::action::{ActionEngine, ActionKind};
use tlaction_core::config::{load_group, LoadedGroup};
use tlaction_core::graph::{ball_with_fuel, CayleyGraph, FinitePatch};
use tlaction_core::groups::Word;
use tlaction_core::stallings::z_subgroup_membership;
use tlaction_core::subshift::{self, PatternJson, SemiVerdict, Shape};
use tlaction_core::verify::{run_suite, Suite, VerifyOptions};
use tlaction_core::{paths, Error, Fuel, Vertex};

fn err(e: Error) -> PyErr {
    match e {
        Error::FuelExhausted { .. } | Error::EnumerationLimit(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn fuel(limit: Option<u64>) -> Fuel {
    limit.map(Fuel::new).unwrap_or_default()
}

/// A finitely generated group with its Cayley graph numbering.
#[pyclass(name = "Group", frozen)]
struct PyGroup {
    loaded: LoadedGroup,
    graph: Arc<CayleyGraph>,
}

impl PyGroup {
    fn parse(&self, word: &str) -> PyResult<Word> {
        self.loaded.group.parse_word(word).map_err(err)
    }
}

#[pymethods]
impl PyGroup {
    /// A built-in name such as "Z2" or a path to a JSON group config.
    #[new]
    fn new(source: &str) -> PyResult<Self> {
        let loaded = load_group(source).map_err(err)?;
        let graph = Arc::new(CayleyGraph::new(&loaded.group));
        Ok(PyGroup { loaded, graph })
    }

    #[getter]
    fn name(&self) -> String {
        self.loaded.group.name().to_string()
    }

    #[getter]
    fn generators(&self) -> Vec<String> {
        self.loaded.group.generator_names().to_vec()
    }

    fn vertex(&self, word: &str) -> PyResult<Vertex> {
        self.graph.vertex(&self.parse(word)?).map_err(err)
    }

    fn word(&self, v: Vertex) -> PyResult<String> {
        self.graph.format_vertex(v).map_err(err)
    }

    fn equal(&self, u: &str, v: &str) -> PyResult<bool> {
        Ok(self.loaded.group.equal(&self.parse(u)?, &self.parse(v)?))
    }

    fn ball(&self, radius: usize) -> PyResult<Vec<Vertex>> {
        Ok(ball_with_fuel(&*self.graph, 0, radius, &mut Fuel::default()).map_err(err)?.vertices().collect())
    }

    /// Normal form of `word` in the group's splitting, as text.
    fn normal_form(&self, word: &str) -> PyResult<String> {
        let s = self.loaded.splitting.as_ref().ok_or_else(|| PyValueError::new_err("group has no splitting"))?;
        let nf = s.normal_form(&self.parse(word)?, &mut Fuel::default()).map_err(err)?;
        Ok(s.format(&nf))
    }

    /// Whether `word` lies in the infinite cyclic subgroup of the splitting.
    fn in_cyclic_subgroup(&self, word: &str) -> PyResult<bool> {
        let s = self.loaded.splitting.as_ref().ok_or_else(|| PyValueError::new_err("group has no splitting"))?;
        z_subgroup_membership(s, &self.parse(word)?, &mut Fuel::default()).map_err(err)
    }

    /// JSON report of an invariant suite.
    #[pyo3(signature = (suite = "all", seed = 0, stages = 50, samples = 50))]
    fn verify(&self, suite: &str, seed: u64, stages: usize, samples: usize) -> PyResult<String> {
        let suite: Suite = suite.parse().map_err(err)?;
        let opts = VerifyOptions { suite, seed, stages, samples, ..VerifyOptions::default() };
        Ok(run_suite(&self.loaded, &opts).map_err(err)?.to_json())
    }

    fn __repr__(&self) -> String {
        format!("Group({:?})", self.loaded.group.name())
    }
}

/// The translation-like action `v * n` on a group's Cayley graph.
#[pyclass(name = "ActionEngine")]
struct PyEngine {
    group: Py<PyGroup>,
    engine: ActionEngine,
}

#[pymethods]
impl PyEngine {
    #[new]
    fn new(group: Py<PyGroup>) -> PyResult<Self> {
        let g = group.get();
        let engine = ActionEngine::for_cayley(g.graph.clone(), g.loaded.splitting.clone()).map_err(err)?;
        Ok(PyEngine { group, engine })
    }

    #[getter]
    fn kind(&self) -> &'static str {
        match self.engine.kind() {
            ActionKind::Transitive => "transitive",
            ActionKind::Subgroup => "subgroup",
        }
    }

    #[pyo3(signature = (v, n, fuel = None))]
    fn act(&mut self, v: Vertex, n: i64, fuel: Option<u64>) -> PyResult<Vertex> {
        self.engine.act(v, n, &mut self::fuel(fuel)).map_err(err)
    }

    #[pyo3(signature = (u, v, fuel = None))]
    fn same_orbit(&self, u: Vertex, v: Vertex, fuel: Option<u64>) -> PyResult<bool> {
        self.engine.same_orbit(u, v, &mut self::fuel(fuel)).map_err(err)
    }

    #[pyo3(signature = (count, fuel = None))]
    fn orbit_representatives(&self, count: usize, fuel: Option<u64>) -> PyResult<Vec<Vertex>> {
        self.engine.orbit_representatives(count, &mut self::fuel(fuel)).map_err(err)
    }

    /// Stage `i` as `(start, vertices)`.
    #[pyo3(signature = (i, fuel = None))]
    fn build_stage(&mut self, i: usize, fuel: Option<u64>) -> PyResult<(i64, Vec<Vertex>)> {
        let p = self.engine.build_stage(i, &mut self::fuel(fuel)).map_err(err)?;
        Ok((p.start(), p.vertices().to_vec()))
    }

    fn visited_index(&self) -> BTreeMap<Vertex, i64> {
        self.engine.visited_index()
    }

    /// The arrow pattern of the action on a ball, as JSON.
    #[pyo3(signature = (radius, center = 0, j = 3))]
    fn arrow_patch(&mut self, radius: usize, center: Vertex, j: usize) -> PyResult<String> {
        let graph = self.group.get().graph.clone();
        let p = subshift::x_star_ball(&graph, &mut self.engine, center, radius, j, &mut Fuel::default()).map_err(err)?;
        Ok(serde_json::to_string(&subshift::arrow_patch_json(&graph, &p).map_err(err)?).expect("serializable"))
    }

    /// Encodes the period-3 point with `z(0) = phase`, given on
    /// `[-range, range]`, on the ball of radius `radius`.
    #[pyo3(signature = (range, radius, phase = "circle", j = 3))]
    fn psi(&mut self, range: i64, radius: usize, phase: &str, j: usize) -> PyResult<String> {
        let graph = self.group.get().graph.clone();
        let shape: Shape = phase.parse().map_err(err)?;
        let z = shape.periodic(-range, (2 * range + 1) as usize);
        let mut fuel = Fuel::default();
        let region = ball_with_fuel(&*graph, 0, radius, &mut fuel).map_err(err)?.vertex_set();
        let p = subshift::psi_map(&graph, &mut self.engine, &z, &region, j, &mut fuel).map_err(err)?;
        Ok(serde_json::to_string(&subshift::product_patch_json(&graph, &p).map_err(err)?).expect("serializable"))
    }
}

/// Whether a pattern JSON is forbidden. Arrow-only patterns are checked
/// against X_J; patterns with an A layer against the period-3 product shift,
/// where `None` means no violation was found within `budget` rules.
#[pyfunction]
#[pyo3(signature = (group, patch_json, j = 3, budget = 10_000))]
fn subshift_forbidden(group: &PyGroup, patch_json: &str, j: usize, budget: usize) -> PyResult<Option<bool>> {
    let pj: PatternJson = serde_json::from_str(patch_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let mut fuel = Fuel::default();
    if pj.a.is_none() {
        let p = subshift::arrow_patch_from_json(&group.graph, &pj, j).map_err(err)?;
        return Ok(Some(subshift::xj_forbidden(&group.graph, j, &p, &mut fuel).map_err(err)?));
    }
    let p = subshift::product_patch_from_json::<Shape>(&group.graph, &pj, j).map_err(err)?;
    Ok(match subshift::yxj_forbidden(&group.graph, j, &subshift::period3_forbidden, &p, budget, &mut fuel).map_err(err)? {
        SemiVerdict::Forbidden => Some(true),
        SemiVerdict::FalseSoFar => None,
    })
}

/// The ℤ-sequence read along the arrows of a product pattern JSON, as
/// `(start, letters)`.
#[pyfunction]
#[pyo3(signature = (group, patch_json, j = 3))]
fn phi(group: &PyGroup, patch_json: &str, j: usize) -> PyResult<(i64, Vec<String>)> {
    let pj: PatternJson = serde_json::from_str(patch_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let p = subshift::product_patch_from_json::<Shape>(&group.graph, &pj, j).map_err(err)?;
    let z = subshift::phi_map(&group.graph, &p).map_err(err)?;
    Ok((z.start, z.values.iter().map(|s| s.to_string()).collect()))
}

/// Constrained Hamiltonian 3-path from `u` to `v` on a finite connected graph.
#[pyfunction]
fn karaganis(vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>, u: Vertex, v: Vertex) -> PyResult<Vec<Vertex>> {
    let patch = FinitePatch::new(vertices, edges).map_err(err)?;
    Ok(paths::karaganis_constrained(&patch, u, v).map_err(err)?.vertices().to_vec())
}

#[pymodule]
fn tlaction(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGroup>()?;
    m.add_class::<PyEngine>()?;
    m.add_function(wrap_pyfunction!(subshift_forbidden, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(karaganis, m)?)?;
    Ok(())
}

//! Seeded invariant suites with machine-readable reports.
//!
//! Reports carry no wall-clock data: runtime is the fuel spent, so equal
//! seeds and options give byte-identical reports.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::action::{ActionEngine, ActionKind};
use crate::config::LoadedGroup;
use crate::error::{Error, Result};
use crate::fuel::Fuel;
use crate::graph::{ball_with_fuel, distance_with_fuel, CayleyGraph, FinitePatch};
use crate::groups::{Letter, Word};
use crate::paths::{karaganis_constrained, satisfies_end_conditions};
use crate::subshift::{self, ArrowLetter, PatternPatch, SemiVerdict, Shape, ZSegment};
use crate::Vertex;

/// Name of the jump-bound check.
pub const JUMP_BOUND_CHECK: &str = "thm-t2-bound-3";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Paths,
    Action,
    Stallings,
    Subshift,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paths" => Ok(Suite::Paths),
            "action" => Ok(Suite::Action),
            "stallings" => Ok(Suite::Stallings),
            "subshift" => Ok(Suite::Subshift),
            "all" => Ok(Suite::All),
            _ => Err(Error::Config(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Paths => "paths",
            Suite::Action => "action",
            Suite::Stallings => "stallings",
            Suite::Subshift => "subshift",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub seed: u64,
    pub stages: usize,
    pub samples: usize,
    pub j: usize,
    pub fuel: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suite: Suite::All, seed: 0, stages: 50, samples: 50, j: 3, fuel: crate::fuel::DEFAULT_FUEL }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passes: u64,
    pub failures: u64,
    /// First few failing cases.
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Runtime {
    pub fuel: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub suite: Suite,
    pub group: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub passes: u64,
    pub failures: u64,
    pub runtime: Runtime,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

const MAX_EXAMPLES: usize = 5;

struct Checks {
    results: BTreeMap<String, CheckResult>,
    order: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Checks { results: BTreeMap::new(), order: Vec::new() }
    }

    fn entry(&mut self, name: &str) -> &mut CheckResult {
        if !self.results.contains_key(name) {
            self.order.push(name.to_string());
        }
        self.results.entry(name.to_string()).or_insert_with(|| CheckResult { name: name.to_string(), passes: 0, failures: 0, examples: Vec::new() })
    }

    fn record(&mut self, name: &str, ok: bool, case: impl FnOnce() -> String) {
        let c = self.entry(name);
        if ok {
            c.passes += 1;
        } else {
            c.failures += 1;
            if c.examples.len() < MAX_EXAMPLES {
                c.examples.push(case());
            }
        }
    }

    /// Fuel exhaustion propagates; other errors count as failures.
    fn outcome(&mut self, name: &str, r: Result<bool>, case: impl Fn() -> String) -> Result<()> {
        match r {
            Ok(ok) => self.record(name, ok, case),
            Err(e @ Error::FuelExhausted { .. }) => return Err(e),
            Err(e) => self.record(name, false, || format!("{}: {e}", case())),
        }
        Ok(())
    }

    fn finish(mut self) -> Vec<CheckResult> {
        self.order.iter().map(|n| self.results.remove(n).expect("recorded")).collect()
    }
}

/// Runs `opts.suite` on `group`. A suite that yields no checks for this
/// group is an error.
pub fn run_suite(group: &LoadedGroup, opts: &VerifyOptions) -> Result<Report> {
    let mut fuel = Fuel::new(opts.fuel);
    let mut checks = Checks::new();
    let suites: &[Suite] = match opts.suite {
        Suite::All => &[Suite::Paths, Suite::Action, Suite::Stallings, Suite::Subshift],
        ref s => std::slice::from_ref(s),
    };
    let graph = Arc::new(CayleyGraph::new(&group.group));
    let mut engine = None;
    for (i, &suite) in suites.iter().enumerate() {
        // each suite draws from its own stream
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ ((i as u64 + 1) << 56));
        match suite {
            Suite::Paths => paths_suite(&mut checks, &mut rng, opts)?,
            Suite::Action => {
                let e = engine_for(&mut engine, group, &graph)?;
                action_suite(&mut checks, &mut rng, opts, &graph, e, &mut fuel)?
            }
            Suite::Stallings => stallings_suite(&mut checks, &mut rng, opts, group, &mut fuel)?,
            Suite::Subshift => {
                let e = engine_for(&mut engine, group, &graph)?;
                subshift_suite(&mut checks, &mut rng, opts, &graph, e, &mut fuel)?
            }
            Suite::All => unreachable!(),
        }
    }
    let checks = checks.finish();
    if checks.is_empty() {
        return Err(Error::EmptySuite(format!("{} on {}", opts.suite, group.group.name())));
    }
    Ok(Report {
        suite: opts.suite,
        group: group.group.name().to_string(),
        seed: opts.seed,
        passes: checks.iter().map(|c| c.passes).sum(),
        failures: checks.iter().map(|c| c.failures).sum(),
        checks,
        runtime: Runtime { fuel: fuel.spent() },
    })
}

fn engine_for<'a>(slot: &'a mut Option<ActionEngine>, group: &LoadedGroup, graph: &Arc<CayleyGraph>) -> Result<&'a mut ActionEngine> {
    if slot.is_none() {
        *slot = Some(ActionEngine::for_cayley(graph.clone(), group.splitting.clone())?);
    }
    Ok(slot.as_mut().expect("just built"))
}

/// Random connected graph on `n` vertices: a random tree plus extra edges.
pub fn random_connected_graph(rng: &mut impl Rng, n: usize) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges
}

fn paths_suite(checks: &mut Checks, rng: &mut ChaCha8Rng, opts: &VerifyOptions) -> Result<()> {
    for _ in 0..opts.samples {
        let n = rng.gen_range(2..=8);
        let edges = random_connected_graph(rng, n);
        let patch = FinitePatch::new((0..n).map(|x| x as Vertex), edges.iter().map(|&(a, b)| (a as Vertex, b as Vertex)))?;
        for u in 0..n as Vertex {
            for v in 0..n as Vertex {
                if u == v {
                    continue;
                }
                let case = || format!("edges {edges:?}, {u} -> {v}");
                let path = karaganis_constrained(&patch, u, v);
                checks.outcome("karaganis-hamiltonian", path.as_ref().map(|p| p.len() == n && p.first() == u && p.last() == v).map_err(Clone::clone), case)?;
                if let Ok(p) = path {
                    checks.outcome("karaganis-jumps", p.validate(&patch).map(|_| true), case)?;
                    checks.outcome("karaganis-end-conditions", satisfies_end_conditions(&p, &patch), case)?;
                }
            }
        }
    }
    Ok(())
}

fn sample_range(graph: &CayleyGraph, opts: &VerifyOptions) -> Vertex {
    // enumerated numberings get expensive quickly
    match graph.numbering().is_regular() {
        true => opts.stages as Vertex + 1,
        false => (opts.stages as Vertex + 1).min(20),
    }
}

fn action_suite(
    checks: &mut Checks,
    rng: &mut ChaCha8Rng,
    opts: &VerifyOptions,
    graph: &CayleyGraph,
    engine: &mut ActionEngine,
    fuel: &mut Fuel,
) -> Result<()> {
    let range = sample_range(graph, opts);
    let transitive = engine.kind() == ActionKind::Transitive;
    if transitive {
        let top = engine.build_stage(opts.stages, fuel)?;
        for i in 0..opts.stages {
            let (a, b) = (engine.build_stage(i, fuel)?, engine.build_stage(i + 1, fuel)?);
            checks.record("stages-nest", b.extends(&a), || format!("stage {i}"));
            checks.record("stage-visits-target", a.position(i as Vertex).is_some(), || format!("stage {i}"));
        }
        let index = engine.visited_index();
        let positions: BTreeSet<i64> = (0..=opts.stages as Vertex).filter_map(|v| index.get(&v).copied()).collect();
        checks.record("coverage-injective", positions.len() == opts.stages + 1, || format!("{} distinct positions", positions.len()));
        checks.outcome("path-is-3-path", top.validate(engine.oracle()).map(|_| true), || "current path".into())?;
    }
    let bound = match engine.splitting() {
        Some(s) => s.cyclic_generator().len(),
        None => 3,
    };
    let name = if transitive { JUMP_BOUND_CHECK } else { "cyclic-jump-bound" };
    for _ in 0..opts.samples {
        let v = rng.gen_range(0..range);
        let w = engine.act(v, 1, fuel)?;
        let d = distance_with_fuel(graph, v, w, bound, fuel)?;
        checks.record(name, d.is_some(), || format!("v = {v}, v*1 = {w}"));
    }
    for _ in 0..opts.samples {
        let v = rng.gen_range(0..range);
        let (n, m) = (rng.gen_range(-5i64..=5), rng.gen_range(-5i64..=5));
        let vn = engine.act(v, n, fuel)?;
        let lhs = engine.act(vn, m, fuel)?;
        let rhs = engine.act(v, n + m, fuel)?;
        checks.record("action-composes", lhs == rhs, || format!("v = {v}, n = {n}, m = {m}"));
        checks.record("action-identity", engine.act(v, 0, fuel)? == v, || format!("v = {v}"));
        if n != 0 {
            checks.record("action-free", vn != v, || format!("v = {v}, n = {n}"));
        }
    }
    Ok(())
}

fn random_word(rng: &mut ChaCha8Rng, generators: usize, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    Word((0..len).map(|_| Letter::from_code(rng.gen_range(0..2 * generators))).collect())
}

fn stallings_suite(checks: &mut Checks, rng: &mut ChaCha8Rng, opts: &VerifyOptions, group: &LoadedGroup, fuel: &mut Fuel) -> Result<()> {
    let Some(s) = &group.splitting else { return Ok(()) };
    let g = s.group();
    let c = s.cyclic_generator();
    for _ in 0..opts.samples {
        let w = random_word(rng, g.generator_count(), 12);
        let case = || g.format_word(&w);
        let nf = s.normal_form(&w, fuel)?;
        let product = s.product(&nf)?;
        checks.record("normal-form-product", g.equal(&product, &w), case);
        checks.record("normal-form-is-normal", s.is_normal(&nf)?, case);
        let again = s.normal_form(&product, fuel)?;
        checks.record("normal-form-idempotent", again == nf, case);
        let brute = (-(w.len() as i64)..=w.len() as i64).any(|n| g.equal(&w, &c.pow(n)));
        checks.record("cyclic-membership", crate::stallings::z_subgroup_membership(s, &w, fuel)? == brute, case);
    }
    Ok(())
}

/// `p(h) = q(c h)` on the ball of radius `r`, for a pattern `q` on `c B(r)`.
fn translate_to_identity<T: Clone>(graph: &CayleyGraph, q: &PatternPatch<T>, center: Vertex, ball: &[Vertex]) -> Result<PatternPatch<T>> {
    let c = graph.word(center)?;
    let mut values = BTreeMap::new();
    for &h in ball {
        let v = graph.vertex(&c.concat(&graph.word(h)?))?;
        values.insert(h, q.values[&v].clone());
    }
    Ok(PatternPatch { values })
}

fn translated_ball(graph: &CayleyGraph, center: Vertex, ball: &[Vertex]) -> Result<BTreeSet<Vertex>> {
    let c = graph.word(center)?;
    ball.iter().map(|&h| graph.vertex(&c.concat(&graph.word(h)?))).collect()
}

/// Ψ on `region` for the period-3 point with phase `shape`, widening the
/// segment until it covers the region.
pub fn psi_period3(
    graph: &CayleyGraph,
    engine: &mut ActionEngine,
    shape: Shape,
    region: &BTreeSet<Vertex>,
    j: usize,
    fuel: &mut Fuel,
) -> Result<(ZSegment<Shape>, PatternPatch<(Shape, ArrowLetter)>)> {
    let mut z = shape.periodic(-1, 3);
    loop {
        match subshift::psi_map(graph, engine, &z, region, j, fuel) {
            Err(Error::InsufficientRange { need_min, need_max, .. }) => {
                z = shape.periodic(need_min, (need_max - need_min + 1) as usize);
            }
            other => return other.map(|p| (z, p)),
        }
    }
}

fn subshift_suite(
    checks: &mut Checks,
    rng: &mut ChaCha8Rng,
    opts: &VerifyOptions,
    graph: &CayleyGraph,
    engine: &mut ActionEngine,
    fuel: &mut Fuel,
) -> Result<()> {
    let range = sample_range(graph, opts);
    let j = opts.j;
    let (patch_radius, region_radius) = if graph.numbering().is_regular() { (2, 4) } else { (1, 1) };
    for _ in 0..opts.samples {
        let center = rng.gen_range(0..range);
        let r = rng.gen_range(0..=patch_radius);
        let case = || format!("center {center}, radius {r}");
        let p = subshift::x_star_ball(graph, engine, center, r, j, fuel).and_then(|p| subshift::xj_forbidden(graph, j, &p, fuel));
        checks.outcome("xj-sound", p.map(|f| !f), case)?;
    }
    let ball1: Vec<Vertex> = ball_with_fuel(graph, 0, 1, fuel)?.vertices().collect();
    for &h in &ball1 {
        let id = ArrowLetter { l: Word::empty(), r: Word::empty() };
        let p = PatternPatch { values: [(0, id)].into_iter().collect() };
        checks.outcome("xj-flags-fixed-point", subshift::xj_forbidden(graph, j, &p, fuel), || "identity arrow".into())?;
        if h == 0 {
            continue;
        }
        // an arrow towards h that h does not point back along
        let x = graph.word(h)?;
        let mut values: BTreeMap<Vertex, ArrowLetter> = ball1.iter().map(|&v| (v, ArrowLetter { l: x.inverse(), r: x.clone() })).collect();
        values.insert(h, ArrowLetter { l: x.clone(), r: x.clone() });
        let p = PatternPatch { values };
        checks.outcome("xj-flags-incoherent", subshift::xj_forbidden(graph, j, &p, fuel), || format!("towards {}", graph.group().format_word(&x)))?;
    }
    for _ in 0..opts.samples.min(20) {
        let center = rng.gen_range(0..range);
        let r = rng.gen_range(0..=patch_radius);
        let shape = Shape::ALL[rng.gen_range(0..3)];
        let case = || format!("center {center}, radius {r}, phase {shape}");
        let ball: Vec<Vertex> = ball_with_fuel(graph, 0, r, fuel)?.vertices().collect();
        let region = translated_ball(graph, center, &ball)?;
        let verdict = psi_period3(graph, engine, shape, &region, j, fuel).and_then(|(_, q)| {
            let p = translate_to_identity(graph, &q, center, &ball)?;
            subshift::yxj_forbidden(graph, j, &subshift::period3_forbidden, &p, 10_000, fuel)
        });
        checks.outcome("psi-false-so-far", verdict.map(|v| v == SemiVerdict::FalseSoFar), case)?;
    }
    for _ in 0..opts.samples.min(20) {
        let r = rng.gen_range(0..=region_radius);
        let shape = Shape::ALL[rng.gen_range(0..3)];
        let case = || format!("radius {r}, phase {shape}");
        let region = ball_with_fuel(graph, 0, r, fuel)?.vertex_set();
        let back = psi_period3(graph, engine, shape, &region, j, fuel).and_then(|(z, p)| Ok((z, subshift::phi_map(graph, &p)?)));
        checks.outcome("phi-psi-roundtrip", back.map(|(z, y)| (y.start..=y.end()).all(|n| z.get(n).is_some() && z.get(n) == y.get(n))), case)?;
    }
    Ok(())
}

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use tlaction_core::action::ActionEngine;
use tlaction_core::config::{load_group, LoadedGroup};
use tlaction_core::graph::{ball_with_fuel, CayleyGraph};
use tlaction_core::subshift::{self, PatternJson, SemiVerdict, Shape};
use tlaction_core::verify::{run_suite, Suite, VerifyOptions};
use tlaction_core::{Error, Fuel};

const EXIT_CONFIG: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

/// Translation-like actions by the integers on Cayley graphs.
#[derive(Parser, Debug)]
#[command(name = "tlaction", version)]
struct Cli {
    /// Built-in group name or path to a JSON group config.
    #[arg(long, global = true, default_value = "Z2")]
    group: String,
    #[arg(long, global = true, env = "TLACTION_FUEL", default_value_t = tlaction_core::fuel::DEFAULT_FUEL)]
    fuel: u64,
    /// Jump bound for arrow alphabets.
    #[arg(long = "J", global = true, default_value_t = 3)]
    j: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print 1 * n for n in [-steps, steps].
    Act {
        #[arg(long, default_value_t = 5)]
        steps: i64,
        /// Starting vertex as a word.
        #[arg(long, default_value = "1")]
        from: String,
    },
    /// Run an invariant suite and print a JSON report.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 50)]
        stages: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    Export {
        what: ExportKind,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 10)]
        stages: usize,
    },
    /// Decide whether a pattern JSON is forbidden; patterns with an A layer
    /// are checked against the period-3 shift.
    SubshiftCheck {
        patch: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
    },
    /// Encode the period-3 point through the action on a ball.
    Psi {
        /// The sequence is given on [-range, range].
        #[arg(long, default_value_t = 10)]
        range: i64,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value = "circle")]
        phase: Shape,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExportKind {
    Patch,
    Dot,
    Visited,
}

enum Failure {
    Core(Error),
    Io(std::io::Error),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::FuelExhausted { .. } | Error::EnumerationLimit(_) => EXIT_FUEL,
        Error::PathOverlap(_) | Error::JumpTooLong { .. } | Error::InconsistentEnds | Error::NotExtensible(_) => EXIT_INVARIANT,
        _ => EXIT_CONFIG,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.fuel == 0 || cli.j == 0 {
        eprintln!("error: --fuel and --J must be positive");
        return ExitCode::from(EXIT_CONFIG);
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(EXIT_INVARIANT)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn engine(loaded: &LoadedGroup, graph: &Arc<CayleyGraph>) -> Result<ActionEngine, Error> {
    ActionEngine::for_cayley(graph.clone(), loaded.splitting.clone())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let loaded = load_group(&cli.group)?;
    let graph = Arc::new(CayleyGraph::new(&loaded.group));
    let mut fuel = Fuel::new(cli.fuel);
    match &cli.command {
        Command::Act { steps, from } => {
            let mut e = engine(&loaded, &graph)?;
            let v = graph.vertex(&loaded.group.parse_word(from)?)?;
            let mut out = String::new();
            for n in -steps.abs()..=steps.abs() {
                let w = e.act(v, n, &mut fuel)?;
                out.push_str(&format!("{n}\t{}\n", graph.format_vertex(w)?));
            }
            emit(cli, &out)
        }
        Command::Verify { suite, stages, samples } => {
            let opts = VerifyOptions { suite: *suite, seed: cli.seed, stages: *stages, samples: *samples, j: cli.j, fuel: cli.fuel };
            let report = run_suite(&loaded, &opts)?;
            emit(cli, &json(&report))?;
            if report.failures > 0 {
                return Err(Failure::Invariant(format!("{} failed checks", report.failures)));
            }
            Ok(())
        }
        Command::Export { what, radius, stages } => match what {
            ExportKind::Dot => {
                let ball = ball_with_fuel(&*graph, 0, *radius, &mut fuel)?;
                let dot = ball.to_dot(|v| graph.format_vertex(v).unwrap_or_else(|_| v.to_string()));
                emit(cli, &dot)
            }
            ExportKind::Patch => {
                let mut e = engine(&loaded, &graph)?;
                let p = subshift::x_star_ball(&graph, &mut e, 0, *radius, cli.j, &mut fuel)?;
                emit(cli, &json(&subshift::arrow_patch_json(&graph, &p)?))
            }
            ExportKind::Visited => {
                let mut e = engine(&loaded, &graph)?;
                e.build_stage(*stages, &mut fuel)?;
                let mut map = BTreeMap::new();
                for (v, n) in e.visited_index() {
                    map.insert(v, (graph.format_vertex(v)?, n));
                }
                // keyed by word, listed in vertex order
                let entries: Vec<serde_json::Value> = map.into_values().map(|(w, n)| serde_json::json!({ "vertex": w, "position": n })).collect();
                emit(cli, &json(&entries))
            }
        },
        Command::SubshiftCheck { patch, budget } => {
            let text = std::fs::read_to_string(patch)?;
            let pj: PatternJson = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            let result = if pj.a.is_none() {
                let p = subshift::arrow_patch_from_json(&graph, &pj, cli.j)?;
                let forbidden = subshift::xj_forbidden(&graph, cli.j, &p, &mut fuel)?;
                serde_json::json!({ "shift": "X_J", "forbidden": forbidden })
            } else {
                let p = subshift::product_patch_from_json::<Shape>(&graph, &pj, cli.j)?;
                let verdict = subshift::yxj_forbidden(&graph, cli.j, &subshift::period3_forbidden, &p, *budget, &mut fuel)?;
                serde_json::json!({ "shift": "Y[X_J]", "forbidden": verdict == SemiVerdict::Forbidden, "verdict": verdict })
            };
            emit(cli, &json(&result))
        }
        Command::Psi { range, radius, phase } => {
            let mut e = engine(&loaded, &graph)?;
            let range = range.abs();
            let z = phase.periodic(-range, (2 * range + 1) as usize);
            let region = ball_with_fuel(&*graph, 0, *radius, &mut fuel)?.vertex_set();
            let p = subshift::psi_map(&graph, &mut e, &z, &region, cli.j, &mut fuel)?;
            emit(cli, &json(&subshift::product_patch_json(&graph, &p)?))
        }
    }
}

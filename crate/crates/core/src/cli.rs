//! The `dirflag` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::chains::{allowed_betti_numbers, flag_betti_numbers};
use crate::digraph::{Digraph, VertexMap};
use crate::experiments::run_experiment;
use crate::field::FieldSpec;
use crate::homotopy::{multi_step_search, SearchOutcome, SystemKind};
use crate::io::{parse_graph, GraphInput};
use crate::persistence::{grounded_persistent_h1, persistent_dfl_homology, shortest_path_filtration, Barcode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dirflag", version, about = "Directed flag complexes, digraph homotopy and persistence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of the directed flag complex or the allowed-path complex
    Homology {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ComplexKind::Dfl)]
        complex: ComplexKind,
        /// Highest degree reported
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        json: bool,
    },
    /// Persistence barcode of a weighted digraph
    Barcode {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Pipeline::SpDfl)]
        pipeline: Pipeline,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
        #[arg(long, default_value = "2")]
        field: FieldSpec,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Search for a zig-zag of one-step homotopies from f to g
    Homotopy {
        /// Source digraph G
        g: PathBuf,
        /// Target digraph H (defaults to G)
        h: Option<PathBuf>,
        /// Images of the vertices of G under f, e.g. "0 1 1" or "0,1,1"
        #[arg(long)]
        map_f: String,
        #[arg(long)]
        map_g: String,
        #[arg(long, value_enum, default_value_t = SystemArg::Dfl)]
        system: SystemArg,
        /// Maximum number of candidate maps examined
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        /// Also write the witness JSON to this file
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Run a seeded experiment and print its JSON report
    Experiment {
        /// subdiv-dag, subdiv-nondag, appendage, derangement or cylinder-k2
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        trials: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ComplexKind {
    Dfl,
    Allowed,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Pipeline {
    SpDfl,
    GroundedH1,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SystemArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "dfl")]
    Dfl,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn fail<T>(code: i32, message: impl Into<String>) -> Result<T, Failure> {
    Err(Failure { code, message: message.into() })
}

fn read_input(path: &Path) -> Result<GraphInput, Failure> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_USAGE, format!("{}: {e}", path.display())),
    };
    parse_graph(&text).map_err(|e| Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) })
}

fn graph_of(path: &Path) -> Result<Digraph, Failure> {
    read_input(path)?.digraph().map_err(|e| Failure { code: EXIT_PARSE, message: format!("{}: {e}", path.display()) })
}

fn parse_map(text: &str, source: &Digraph, target: &Digraph, name: &str) -> Result<VertexMap, Failure> {
    let mut image = Vec::new();
    for tok in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let v = match tok.parse::<usize>() {
            Ok(v) => v,
            Err(_) => match target.labels().and_then(|l| l.iter().position(|x| x == tok)) {
                Some(v) => v,
                None => return fail(EXIT_PARSE, format!("--map-{name}: unknown vertex `{tok}`")),
            },
        };
        image.push(v);
    }
    if image.len() != source.vertex_count() {
        return fail(
            EXIT_PARSE,
            format!("--map-{name}: {} images given for {} vertices", image.len(), source.vertex_count()),
        );
    }
    VertexMap::new(image, target.vertex_count()).map_err(|e| Failure { code: EXIT_PARSE, message: format!("--map-{name}: {e}") })
}

fn configure_threads() {
    if let Some(n) = std::env::var("DIRFLAG_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Homology { input, complex, max_dim, field, json } => {
            let g = graph_of(&input)?;
            let betti = match complex {
                ComplexKind::Dfl => flag_betti_numbers(&g, max_dim, field),
                ComplexKind::Allowed => allowed_betti_numbers(&g, max_dim, field),
            };
            if json {
                let kind = match complex {
                    ComplexKind::Dfl => "dfl",
                    ComplexKind::Allowed => "allowed",
                };
                let doc = json!({ "complex": kind, "field": field.to_string(), "betti": betti });
                Ok(format!("{doc}\n"))
            } else {
                let cells: Vec<String> = betti.iter().map(usize::to_string).collect();
                Ok(format!("{}\n", cells.join(" ")))
            }
        }
        Command::Barcode { input, pipeline, max_degree, field, format } => {
            let parsed = read_input(&input)?;
            let bad = |e: crate::digraph::GraphError| Failure { code: EXIT_PARSE, message: format!("{}: {e}", input.display()) };
            let w = parsed.weighted().map_err(bad)?;
            let barcode: Barcode = match pipeline {
                Pipeline::SpDfl => persistent_dfl_homology(&shortest_path_filtration(&w), max_degree, field),
                Pipeline::GroundedH1 => grounded_persistent_h1(&w, field),
            };
            Ok(match format {
                Format::Csv => barcode.to_csv(),
                Format::Json => format!("{}\n", serde_json::to_string(&barcode).expect("barcodes serialise")),
            })
        }
        Command::Homotopy { g, h, map_f, map_g, system, budget, witness_out } => {
            let gr = graph_of(&g)?;
            let hr = match &h {
                Some(p) => graph_of(p)?,
                None => gr.clone(),
            };
            let f = parse_map(&map_f, &gr, &hr, "f")?;
            let gm = parse_map(&map_g, &gr, &hr, "g")?;
            if f == gm {
                return Ok("equal\n".into());
            }
            let system = match system {
                SystemArg::A => SystemKind::A,
                SystemArg::Dfl => SystemKind::Dfl,
            };
            let outcome = multi_step_search(&f, &gm, &gr, &hr, &system, budget)
                .map_err(|e| Failure { code: EXIT_PARSE, message: e.to_string() })?;
            match outcome {
                SearchOutcome::Found(w) => {
                    let doc = serde_json::to_string(&w.to_doc()).expect("witnesses serialise");
                    if let Some(path) = witness_out {
                        if let Err(e) = std::fs::write(&path, format!("{doc}\n")) {
                            return fail(EXIT_USAGE, format!("{}: {e}", path.display()));
                        }
                    }
                    Ok(format!("witness ({} steps)\n{doc}\n", w.len()))
                }
                SearchOutcome::Absent { explored } => Ok(format!("absent (exhausted, {explored} maps explored)\n")),
                SearchOutcome::Inconclusive { explored } => {
                    fail(EXIT_BUDGET, format!("inconclusive (budget exhausted after {explored} maps)"))
                }
            }
        }
        Command::Experiment { name, seed, trials } => {
            let report = run_experiment(&name, seed, trials).map_err(|e| Failure { code: EXIT_USAGE, message: e.to_string() })?;
            Ok(format!("{}\n", serde_json::to_string_pretty(&report).expect("reports serialise")))
        }
    }
}

/// Run the command line with `args` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code. Nothing
/// is written to `out` when the command fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    configure_threads();
    match execute(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            if f.code == EXIT_BUDGET {
                let _ = out.write_all(format!("{}\n", f.message).as_bytes());
            } else {
                let _ = writeln!(err, "error: {}", f.message);
            }
            f.code
        }
    }
}

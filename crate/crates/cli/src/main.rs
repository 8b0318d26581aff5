use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gch_core::complexes::{build_complex, degree_report, homology, ComplexKind, ComplexSpec};
use gch_core::enumerate::{enumerate_graphs, enumerate_ribbon_structures, EnumSpec};
use gch_core::io::{export_complex, read_graph_file, GraphDocument};
use gch_core::moduli::{build_cell_poset, build_spine, f_vector, Cells};
use gch_core::ribbon::surface_invariants;
use gch_core::verify::{run_suite, Suite};
use gch_core::{Error, Parity};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "gch", version, about = "Exact graph complex homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List isomorphism classes of graphs.
    Enumerate {
        #[arg(long)]
        genus: usize,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
        min_valence: u8,
        #[arg(long)]
        tadpoles: bool,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        max_edges: Option<usize>,
        #[arg(long)]
        ribbon: bool,
    },
    /// Build complexes and summarize generators and boundaries.
    Complex {
        #[command(flatten)]
        spec: SpecArgs,
        /// Write generator manifests and SMS matrices under this directory.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Compute homology.
    Homology {
        #[command(flatten)]
        spec: SpecArgs,
        /// Also report degrees for this value of N.
        #[arg(long = "N")]
        n: Option<i64>,
    },
    /// Cells of the moduli space of graphs, or its spine.
    Moduli {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        spine: bool,
    },
    /// Surface genus and boundary count of a ribbon graph document.
    Surface {
        #[arg(long)]
        input: PathBuf,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// One or more kinds, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    kind: Vec<ComplexKind>,
    #[arg(long)]
    parity: Parity,
    #[arg(long)]
    genus: usize,
    #[arg(long)]
    max_edges: Option<usize>,
}

impl SpecArgs {
    fn specs(&self) -> Vec<ComplexSpec> {
        self.kind
            .iter()
            .map(|&kind| ComplexSpec {
                kind,
                parity: self.parity,
                genus: self.genus,
                max_edges: self.max_edges,
                n: 0,
            })
            .collect()
    }
}

enum Failure {
    Usage(String),
    Infeasible(String),
    Internal(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unbounded(_) => Failure::Infeasible(e.to_string()),
            Error::InconsistentSpec(_)
            | Error::Parse { .. }
            | Error::Schema { .. }
            | Error::Json(_)
            | Error::Io(_)
            | Error::InvalidRibbon(_) => Failure::Usage(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn emit(out: &mut impl Write, value: &Value) -> Result<(), Failure> {
    writeln!(out, "{value}")?;
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("GCH_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Failure::Usage(format!(
            "GCH_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    if n == 0 {
        return Err(Failure::Usage("GCH_THREADS must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    match cli.command {
        Command::Enumerate {
            genus,
            min_valence,
            tadpoles,
            weighted,
            max_edges,
            ribbon,
        } => {
            let spec = EnumSpec {
                genus,
                min_valence: min_valence as usize,
                allow_tadpoles: tadpoles,
                weighted,
                max_edges,
                min_edges: 0,
                ribbon,
            };
            for form in enumerate_graphs(&spec)? {
                let mut line = json!({
                    "certificate": form.certificate,
                    "edges": form.graph.edge_count(),
                    "graph": GraphDocument::from_graph(&form.graph, form.ribbon.as_ref()),
                });
                if let Some(r) = &form.ribbon {
                    let (g, b) = surface_invariants(&form.graph, r)?;
                    line["surface"] = json!({ "genus": g, "boundaries": b });
                }
                emit(&mut out, &line)?;
            }
        }
        Command::Complex { spec, export } => {
            for s in spec.specs() {
                let c = build_complex(&s)?;
                let mut line = json!({
                    "kind": s.kind,
                    "parity": s.parity,
                    "genus": s.genus,
                    "max_edges": s.max_edges,
                    "grades": c.grades,
                    "generators": c.counts(),
                    "nonzeros": c.boundaries.iter().map(|b| b.nnz()).collect::<Vec<_>>(),
                    "d_squared_zero": c.d_squared_is_zero()?,
                });
                if let Some(dir) = &export {
                    let sub = dir.join(format!("{}_{}_g{}", s.kind, s.parity, s.genus));
                    let files = export_complex(&c, &sub)?;
                    line["files"] = json!(files
                        .iter()
                        .map(|p| p.display().to_string())
                        .collect::<Vec<_>>());
                }
                emit(&mut out, &line)?;
            }
        }
        Command::Homology { spec, n } => {
            for mut s in spec.specs() {
                s.n = n.unwrap_or(0);
                let r = homology(&build_complex(&s)?)?;
                let mut line = json!({
                    "kind": s.kind,
                    "parity": s.parity,
                    "genus": s.genus,
                    "max_edges": s.max_edges,
                    "grades": r.grades,
                    "euler_generators": r.euler_generators(),
                    "euler_homology": r.euler_homology(),
                });
                if let Some(n) = n {
                    line["N"] = json!(n);
                    line["degrees"] = json!(degree_report(&r, n));
                }
                emit(&mut out, &line)?;
            }
        }
        Command::Moduli { genus, spine } => {
            let line = if spine {
                let s = build_spine(genus)?;
                json!({
                    "genus": genus,
                    "spine": true,
                    "max_dimension": s.max_dimension,
                    "f_vector": f_vector(Cells::Catalog(&s), false),
                    "closed": s.is_closed(),
                    "cubes": s.cubes,
                })
            } else {
                let p = build_cell_poset(genus)?;
                json!({
                    "genus": genus,
                    "spine": false,
                    "max_dimension": p.max_dimension,
                    "f_vector": f_vector(Cells::Poset(&p), false),
                    "f_vector_symmetry_free": f_vector(Cells::Poset(&p), true),
                    "nodes": p.nodes,
                    "covers": p.covers,
                })
            };
            emit(&mut out, &line)?;
        }
        Command::Surface { input } => {
            let (graph, ribbon) = read_graph_file(&input)?;
            let structures = match ribbon {
                Some(r) => vec![r],
                None => enumerate_ribbon_structures(&graph)?,
            };
            for r in structures {
                let (g, b) = surface_invariants(&graph, &r)?;
                emit(
                    &mut out,
                    &json!({ "genus": g, "boundaries": b, "ribbon": r.rotations() }),
                )?;
            }
        }
        Command::Verify { suite } => {
            let checks = run_suite(suite);
            for c in &checks {
                emit(
                    &mut out,
                    &serde_json::to_value(c).map_err(|e| Failure::Internal(e.to_string()))?,
                )?;
            }
            out.flush()?;
            if checks.iter().any(|c| !c.passed) {
                return Err(Failure::Checks);
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use structure_entropy::experiment::{run_experiment, to_csv, ExperimentName, ExperimentSpec};
use structure_entropy::generators::{self, natural_partition, security_model, SecurityModelParams};
use structure_entropy::io::{read_edge_list, read_partition, write_edge_list, write_partition, LabeledGraph};
use structure_entropy::partition_search::{construction_partition, resistance, Family, Mode};
use structure_entropy::spectral::{cheeger_check_partition, laplacian_spectrum};
use structure_entropy::{verify, Error, Partition, Result};

const THREADS_ENV: &str = "SENTROPY_THREADS";

#[derive(Parser)]
#[command(name = "sentropy", version, about = "Structure entropy, resistance and security index of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropy report for an edge-list file.
    Analyze {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = AnalyzeMode::Greedy)]
        mode: AnalyzeMode,
        /// Family whose explicit partition the construction mode uses.
        #[arg(long, value_enum)]
        family: Option<FamilyArg>,
        /// Partition file (`v module` lines); implies the construction mode.
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated graph as an edge list.
    Generate {
        #[arg(value_enum)]
        family: GenFamily,
        /// Depth for trees, side for grids, leaves for stars, vertex count otherwise.
        #[arg(long)]
        size: usize,
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long, default_value_t = 1.5)]
        a: f64,
        /// Extra-edge probability for `connected`.
        #[arg(long, default_value_t = 0.1)]
        extra: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the family's explicit partition.
        #[arg(long)]
        partition_out: Option<PathBuf>,
        /// Security model only: write the generation trace as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Normalized-Laplacian spectrum, eigenvalue census and Cheeger check.
    Spectrum {
        graph: PathBuf,
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Census threshold; defaults to `2 max_phi` of the partition, else 0.5.
        #[arg(long)]
        threshold: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reproduction run for one family, as CSV.
    Experiment {
        #[arg(value_parser = ExperimentName::ALL.map(|e| e.as_str()))]
        name: String,
        /// Comma-separated sizes (depths for `tree`, sides for `grid`).
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1.5)]
        a: f64,
        #[arg(long)]
        degree: Option<usize>,
        /// CSV path; a `.json` sidecar with the spec and bound formula is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AnalyzeMode {
    Exact,
    Greedy,
    Construction,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Tree,
    Grid,
    Complete,
    Other,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    Tree,
    Grid,
    Complete,
    Cycle,
    Path,
    Star,
    Regular,
    Connected,
    Security,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let workers = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&w| w > 0);
    if let Some(w) = workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    match run(cli.command, workers) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("sentropy: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Disconnected { .. } => 3,
        Error::Capacity { .. } => 4,
        _ => 1,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => Ok(std::fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value");
    s.push('\n');
    s
}

fn run(command: Command, workers: Option<usize>) -> Result<ExitCode> {
    match command {
        Command::Analyze {
            graph,
            mode,
            family,
            partition,
            out,
        } => {
            let lg = read_edge_list(&graph)?;
            let mode = match (mode, partition) {
                (_, Some(path)) => Mode::Construction(Family::Natural(read_partition(path, &lg)?)),
                (AnalyzeMode::Exact, None) => Mode::Exact,
                (AnalyzeMode::Greedy, None) => Mode::Greedy,
                (AnalyzeMode::Construction, None) => Mode::Construction(family_for(&lg, family)?),
            };
            let report = resistance(&lg.graph, &mode)?;
            let mut value: Value = serde_json::to_value(&report).expect("report serializes");
            value["partition"] = json!(labeled_modules(&report.witness, &lg));
            value["resistance_is_lower_bound"] = json!(report.method.is_bound());
            emit(&pretty(&value), out.as_deref())?;
        }
        Command::Generate {
            family,
            size,
            degree,
            a,
            extra,
            seed,
            out,
            partition_out,
            trace,
        } => {
            let (g, p) = match family {
                GenFamily::Tree => (
                    generators::complete_binary_tree(size)?,
                    Some(Family::CompleteBinaryTree { depth: size }),
                ),
                GenFamily::Grid => (generators::grid(size)?, Some(Family::Grid { side: size })),
                GenFamily::Complete => (generators::complete_graph(size)?, Some(Family::Complete)),
                GenFamily::Cycle => (generators::cycle(size)?, None),
                GenFamily::Path => (generators::path(size)?, None),
                GenFamily::Star => (generators::star(size)?, None),
                GenFamily::Regular => (generators::random_regular(size, degree.unwrap_or(3), seed)?, None),
                GenFamily::Connected => (generators::random_connected(size, extra, false, seed)?, None),
                GenFamily::Security => {
                    let params = SecurityModelParams::new(size, a, degree.unwrap_or(4), seed);
                    let (g, t) = security_model(&params)?;
                    if let Some(path) = &trace {
                        std::fs::write(path, serde_json::to_string(&t).expect("trace serializes"))?;
                    }
                    (g, Some(Family::Natural(natural_partition(&t))))
                }
            };
            if trace.is_some() && !matches!(family, GenFamily::Security) {
                return Err(Error::Input("--trace applies to the security family only".into()));
            }
            if let Some(path) = partition_out {
                let p = match family {
                    GenFamily::Regular => generators::spanning_tree_partition(&g)?.partition,
                    _ => construction_partition(&g, p.as_ref().unwrap_or(&Family::Other))?.0,
                };
                std::fs::write(path, write_partition(&p, None))?;
            }
            emit(&write_edge_list(&g, None), out.as_deref())?;
        }
        Command::Spectrum {
            graph,
            partition,
            threshold,
            out,
        } => {
            let lg = read_edge_list(&graph)?;
            let spectrum = laplacian_spectrum(&lg.graph)?;
            let check = match &partition {
                Some(path) => {
                    let p = read_partition(path, &lg)?;
                    (p.len() >= 2).then(|| cheeger_check_partition(&lg.graph, &p)).transpose()?
                }
                None => None,
            };
            let threshold = threshold.unwrap_or_else(|| check.as_ref().map_or(0.5, |c| 2.0 * c.max_phi));
            let value = json!({
                "n": lg.graph.n(),
                "solver": spectrum.solver,
                "eigenvalues": spectrum.eigenvalues,
                "trace": spectrum.sum(),
                "census": { "threshold": threshold, "count": spectrum.count_at_most(threshold) },
                "cheeger_check": check,
            });
            emit(&pretty(&value), out.as_deref())?;
        }
        Command::Experiment {
            name,
            sizes,
            trials,
            seed,
            a,
            degree,
            out,
        } => {
            let mut spec = ExperimentSpec::new(name.parse()?, sizes, trials, seed);
            spec.a = a;
            spec.d = degree;
            let rows = run_experiment(&spec, workers)?;
            eprintln!("bound: {}", spec.name.bound_formula());
            emit(&to_csv(&rows), out.as_deref())?;
            if let Some(path) = out {
                let meta = json!({
                    "spec": spec,
                    "size_meaning": spec.name.size_meaning(),
                    "bound_formula": spec.name.bound_formula(),
                    "rows": rows.len(),
                });
                std::fs::write(path.with_extension("json"), pretty(&meta))?;
            }
        }
        Command::Verify { suite, seed } => {
            let results = verify::run(&suite, seed)?;
            for r in &results {
                println!("{}", r.summary_line());
                for m in &r.messages {
                    println!("  {m}");
                }
            }
            if results.iter().any(|r| !r.passed()) {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn family_for(lg: &LabeledGraph, family: Option<FamilyArg>) -> Result<Family> {
    let n = lg.graph.n();
    Ok(match family {
        None | Some(FamilyArg::Other) => Family::Other,
        Some(FamilyArg::Complete) => Family::Complete,
        Some(FamilyArg::Tree) => {
            let depth = (n + 1).trailing_zeros() as usize;
            if (n + 1).count_ones() != 1 {
                return Err(Error::Input(format!("{n} vertices is not a complete binary tree")));
            }
            Family::CompleteBinaryTree { depth }
        }
        Some(FamilyArg::Grid) => {
            let side = (n as f64).sqrt().round() as usize;
            if side * side != n {
                return Err(Error::Input(format!("{n} vertices is not a square grid")));
            }
            Family::Grid { side }
        }
    })
}

fn labeled_modules(p: &Partition, lg: &LabeledGraph) -> Vec<Vec<u64>> {
    p.modules()
        .into_iter()
        .map(|m| m.into_iter().map(|v| lg.labels[v]).collect())
        .collect()
}

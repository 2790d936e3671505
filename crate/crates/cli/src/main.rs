//! `wao`: evolutionary maximum independent set search on DIMACS graphs.
//!
//! DIMACS benchmark files describe clique problems, so every subcommand
//! works on the complement of the file's graph unless `--no-complement` is
//! given. Node ids in all output are 1-based.
//!
//! Exit codes: 0 on success, 1 when `verify` rejects a set, 2 on usage,
//! input or solver errors.

mod bench;
mod config;
mod report;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use wao_core::oracle::exact_mis_with_budget;
use wao_core::{
    best_of_runs_with, complement, read_dimacs, verify_independent_set, write_dimacs, Graph,
    SetViolation,
};

use config::GaArgs;
use report::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "wao",
    version,
    about = "Independent sets via widest acyclic orientations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct GraphArgs {
    /// DIMACS ASCII graph file
    #[arg(long)]
    graph: PathBuf,
    /// Work on the graph as given instead of its complement
    #[arg(long)]
    no_complement: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the genetic algorithm and print a report
    Solve {
        #[command(flatten)]
        input: GraphArgs,
        #[command(flatten)]
        ga: GaArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run every instance of a manifest under each listed L
    Bench {
        /// TOML manifest; instance paths are relative to it
        manifest: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        sequential: bool,
    },
    /// Per-generation best fitness of one run, as CSV
    History {
        /// Graph to solve; omit when reading a saved report
        #[arg(long, required_unless_present = "report", conflicts_with = "report")]
        graph: Option<PathBuf>,
        #[arg(long)]
        no_complement: bool,
        /// Solve report written by `wao solve`
        #[arg(long)]
        report: Option<PathBuf>,
        /// 1-based run index [default: the best run]
        #[arg(long)]
        run: Option<usize>,
        #[command(flatten)]
        ga: GaArgs,
    },
    /// Check that a set of 1-based node ids is independent
    Verify {
        #[command(flatten)]
        input: GraphArgs,
        /// Whitespace or comma separated ids, or a solve report (JSON)
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Exact independence number (small graphs only)
    Oracle {
        #[command(flatten)]
        input: GraphArgs,
        /// Search node budget for branch and bound
        #[arg(long, default_value_t = wao_core::oracle::DEFAULT_BRANCH_BUDGET)]
        budget: u64,
    },
    /// Write the complement of a graph as DIMACS
    Complement {
        #[arg(long)]
        graph: PathBuf,
    },
}

/// Reads a DIMACS file, complementing it when asked. Parser warnings go to
/// stderr.
pub fn load_graph(path: &Path, complemented: bool) -> Result<Graph> {
    let file =
        std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let parsed = read_dimacs(io::BufReader::new(file))
        .with_context(|| format!("cannot parse {}", path.display()))?;
    for w in parsed.warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(if complemented {
        complement(&parsed.graph)
    } else {
        parsed.graph
    })
}

fn instance_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn solve(input: &GraphArgs, ga: &GaArgs) -> Result<SolveReport> {
    let g = load_graph(&input.graph, !input.no_complement)?;
    if g.node_count() == 0 {
        bail!("{} has no nodes", input.graph.display());
    }
    let cfg = ga.resolve(g.node_count())?;
    let batch = best_of_runs_with(&g, &cfg, !ga.sequential)?;
    let report = SolveReport::new(
        instance_name(&input.graph),
        g.node_count(),
        g.edge_count(),
        !input.no_complement,
        cfg,
        &batch,
    );
    let zero_based: Vec<usize> = report.best_set.iter().map(|v| v - 1).collect();
    verify_independent_set(&g, &zero_based).context("internal error: reported set")?;
    Ok(report)
}

fn read_certificate(path: &Path) -> Result<Vec<usize>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let report: SolveReport = serde_json::from_str(&text)
            .with_context(|| format!("parsing report {}", path.display()))?;
        return Ok(report.best_set);
    }
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .with_context(|| format!("bad node id {t:?}"))
        })
        .collect()
}

fn execute(cli: Cli) -> Result<ExitCode> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Solve { input, ga, format } => {
            let report = solve(&input, &ga)?;
            match format {
                Format::Json => {
                    serde_json::to_writer_pretty(&mut out, &report)?;
                    writeln!(out)?;
                }
                Format::Csv => report.write_csv(&mut out)?,
            }
        }
        Command::Bench {
            manifest,
            format,
            sequential,
        } => {
            let parsed = bench::read_manifest(&manifest)?;
            let base = manifest.parent().unwrap_or(Path::new("."));
            let rows = bench::run_manifest(&parsed, base, !sequential);
            bench::write_rows(&rows, format, &mut out)?;
            if rows.iter().any(|r| r.error.is_some()) {
                return Ok(ExitCode::from(2));
            }
        }
        Command::History {
            graph,
            no_complement,
            report,
            run,
            ga,
        } => {
            let report = match (report, graph) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<SolveReport>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(graph)) => solve(
                    &GraphArgs {
                        graph,
                        no_complement,
                    },
                    &ga,
                )?,
                (None, None) => unreachable!("clap requires --graph or --report"),
            };
            let idx = run.unwrap_or(report.best_run);
            let Some(chosen) = idx.checked_sub(1).and_then(|i| report.runs.get(i)) else {
                bail!("run {idx} outside 1..={}", report.runs.len());
            };
            report::write_history(&chosen.history, &mut out)?;
        }
        Command::Verify { input, certificate } => {
            let g = load_graph(&input.graph, !input.no_complement)?;
            let ids = read_certificate(&certificate)?;
            let zero_based: Vec<usize> = ids.iter().map(|v| v - 1).collect();
            match verify_independent_set(&g, &zero_based) {
                Ok(()) => writeln!(out, "independent set of size {}", ids.len())?,
                Err(SetViolation::OutOfRange(v)) => {
                    bail!("node {} outside 1..={}", v + 1, g.node_count())
                }
                Err(e @ SetViolation::Adjacent(..)) => {
                    writeln!(out, "not independent: {e}")?;
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Oracle { input, budget } => {
            let g = load_graph(&input.graph, !input.no_complement)?;
            let result = exact_mis_with_budget(&g, budget)?;
            let json = serde_json::json!({
                "instance": instance_name(&input.graph),
                "n": g.node_count(),
                "m": g.edge_count(),
                "complemented": !input.no_complement,
                "alpha": result.alpha,
                "witness": result.witness.iter().map(|v| v + 1).collect::<Vec<_>>(),
                "method": result.method,
            });
            serde_json::to_writer_pretty(&mut out, &json)?;
            writeln!(out)?;
        }
        Command::Complement { graph } => {
            let g = load_graph(&graph, true)?;
            let note = format!("complement of {}", graph.display());
            out.write_all(write_dimacs(&g, &[&note]).as_bytes())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

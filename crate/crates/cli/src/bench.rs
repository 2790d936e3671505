//! Batch runs from a TOML manifest:
//!
//! ```toml
//! runs = 20
//! L = [15, 30]
//! seed = 1
//! early_stop = true   # stop a batch once the known alpha is reached
//!
//! [[instance]]
//! name = "c-fat200-1"
//! path = "../instances/c-fat200-1.clq"   # relative to the manifest
//! alpha = 12
//! ```

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use wao_core::{best_of_runs_with, GaConfig};

use crate::report::join;
use crate::{load_graph, Format};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(rename = "L", default = "default_ls")]
    pub normalizations: Vec<f64>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub early_stop: bool,
    #[serde(default, rename = "instance")]
    pub instances: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Entry {
    pub name: String,
    pub path: PathBuf,
    pub alpha: Option<usize>,
    #[serde(default = "default_complement")]
    pub complement: bool,
}

fn default_runs() -> usize {
    20
}

fn default_ls() -> Vec<f64> {
    vec![15.0, 30.0]
}

fn default_seed() -> u64 {
    1
}

fn default_complement() -> bool {
    true
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub instance: String,
    #[serde(rename = "L")]
    pub normalization: f64,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub complemented: bool,
    pub runs_done: usize,
    pub best_size: Option<usize>,
    pub known_alpha: Option<usize>,
    /// Best size at least the known alpha; empty when alpha is unknown.
    #[serde(rename = "match")]
    pub matched: Option<bool>,
    pub best_set: String,
    pub wall_clock_secs: f64,
    pub error: Option<String>,
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Runs every (instance, L) pair; unreadable instances become error rows.
pub fn run_manifest(manifest: &Manifest, base: &Path, parallel: bool) -> Vec<Row> {
    let mut rows = Vec::new();
    for entry in &manifest.instances {
        let path = base.join(&entry.path);
        let loaded = load_graph(&path, entry.complement);
        for &l in &manifest.normalizations {
            let start = Instant::now();
            let mut row = Row {
                instance: entry.name.clone(),
                normalization: l,
                n: None,
                m: None,
                complemented: entry.complement,
                runs_done: 0,
                best_size: None,
                known_alpha: entry.alpha,
                matched: None,
                best_set: String::new(),
                wall_clock_secs: 0.0,
                error: None,
            };
            match &loaded {
                Err(e) => {
                    eprintln!("{}: {e:#}", entry.name);
                    row.error = Some(format!("{e:#}"));
                }
                Ok(g) => {
                    let cfg = GaConfig {
                        runs: manifest.runs,
                        seed: manifest.seed,
                        target: entry.alpha.filter(|_| manifest.early_stop),
                        ..GaConfig::defaults_for(g.node_count(), l)
                    };
                    row.n = Some(g.node_count());
                    row.m = Some(g.edge_count());
                    match best_of_runs_with(g, &cfg, parallel) {
                        Ok(batch) => {
                            let best = batch.best();
                            let set: Vec<usize> = best.best_set.iter().map(|v| v + 1).collect();
                            row.runs_done = batch.runs.len();
                            row.best_size = Some(best.best_size);
                            row.matched = entry.alpha.map(|a| best.best_size >= a);
                            row.best_set = join(&set);
                        }
                        Err(e) => row.error = Some(e.to_string()),
                    }
                }
            }
            row.wall_clock_secs = start.elapsed().as_secs_f64();
            rows.push(row);
        }
    }
    rows
}

pub fn write_rows<W: Write>(rows: &[Row], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if rows.is_empty() {
                w.write_record([
                    "instance",
                    "L",
                    "n",
                    "m",
                    "complemented",
                    "runs_done",
                    "best_size",
                    "known_alpha",
                    "match",
                    "best_set",
                    "wall_clock_secs",
                    "error",
                ])?;
            }
            for row in rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

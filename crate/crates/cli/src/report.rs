//! Serialized results. Node ids are 1-based everywhere in this module.

use std::io::Write;

use anyhow::Result;
use serde::{Deserialize, Serialize};
use wao_core::{GaConfig, MultiRunResult, RunResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub seed: u64,
    pub best_size: usize,
    pub best_fitness: usize,
    pub best_set: Vec<usize>,
    pub best_sequence: Vec<usize>,
    pub generation_found: usize,
    pub generations_run: usize,
    pub evaluations: usize,
    /// Best fitness so far after each generation.
    pub history: Vec<usize>,
    /// Informational only.
    pub wall_clock_secs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub instance: String,
    pub n: usize,
    /// Edges of the solved graph.
    pub m: usize,
    /// Whether the solved graph is the complement of the file's graph.
    pub complemented: bool,
    pub config: GaConfig,
    pub runs: Vec<RunReport>,
    /// 1-based index into `runs`.
    pub best_run: usize,
    pub best_size: usize,
    pub best_set: Vec<usize>,
}

fn one_based(ids: &[usize]) -> Vec<usize> {
    ids.iter().map(|&v| v + 1).collect()
}

impl RunReport {
    fn new(run: &RunResult, secs: f64) -> Self {
        RunReport {
            seed: run.seed,
            best_size: run.best_size,
            best_fitness: run.best_fitness,
            best_set: one_based(&run.best_set),
            best_sequence: one_based(&run.best_sequence),
            generation_found: run.generation_found,
            generations_run: run.generations_run(),
            evaluations: run.evaluations,
            history: run.history.clone(),
            wall_clock_secs: secs,
        }
    }
}

impl SolveReport {
    pub fn new(
        instance: String,
        n: usize,
        m: usize,
        complemented: bool,
        config: GaConfig,
        batch: &MultiRunResult,
    ) -> Self {
        let runs: Vec<RunReport> = batch
            .runs
            .iter()
            .zip(&batch.elapsed)
            .map(|(r, t)| RunReport::new(r, t.as_secs_f64()))
            .collect();
        let best = &runs[batch.best_run];
        SolveReport {
            instance,
            n,
            m,
            complemented,
            config,
            best_run: batch.best_run + 1,
            best_size: best.best_size,
            best_set: best.best_set.clone(),
            runs,
        }
    }

    /// One CSV row per run.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "instance",
            "complemented",
            "run",
            "seed",
            "best_size",
            "best_fitness",
            "generation_found",
            "generations_run",
            "evaluations",
            "wall_clock_secs",
            "best_set",
        ])?;
        for (idx, run) in self.runs.iter().enumerate() {
            w.write_record([
                self.instance.clone(),
                self.complemented.to_string(),
                (idx + 1).to_string(),
                run.seed.to_string(),
                run.best_size.to_string(),
                run.best_fitness.to_string(),
                run.generation_found.to_string(),
                run.generations_run.to_string(),
                run.evaluations.to_string(),
                format!("{:.3}", run.wall_clock_secs),
                join(&run.best_set),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn join(ids: &[usize]) -> String {
    ids.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// `generation,best_fitness` rows for one run.
pub fn write_history<W: Write>(history: &[usize], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["generation", "best_fitness"])?;
    for (g, f) in history.iter().enumerate() {
        w.write_record([(g + 1).to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

//! GA settings from defaults, an optional config file and flags, in that
//! order of precedence (flags win).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use wao_core::{FlowAlgorithm, GaConfig};

pub const DEFAULT_L: f64 = 15.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Matching,
    PushRelabel,
}

impl From<Algorithm> for FlowAlgorithm {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Matching => FlowAlgorithm::Matching,
            Algorithm::PushRelabel => FlowAlgorithm::PushRelabel,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GaArgs {
    /// Generations per run, the initial population included [default: 10n]
    #[arg(long)]
    pub generations: Option<usize>,
    /// Population size [default: ceil(1.5n)]
    #[arg(long)]
    pub pop_size: Option<usize>,
    /// Fraction of each population kept as elites [default: 0.05]
    #[arg(long)]
    pub elite_frac: Option<f64>,
    /// Crossover probability [default: 0.2]
    #[arg(long)]
    pub pc: Option<f64>,
    /// Selection normalization factor [default: 15]
    #[arg(long = "L", value_name = "L")]
    pub normalization: Option<f64>,
    /// Independent runs [default: 20]
    #[arg(long)]
    pub runs: Option<usize>,
    /// Seed of the first run; run r uses seed + r - 1 [default: 1]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Stop once an independent set of this size is found
    #[arg(long)]
    pub target: Option<usize>,
    /// Max-flow routine for fitness evaluation [default: matching]
    #[arg(long, value_enum)]
    pub algorithm: Option<Algorithm>,
    /// TOML or JSON file with GA settings; a solve report is accepted too
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Evaluate fitness on one thread
    #[arg(long)]
    pub sequential: bool,
}

/// Every field optional; missing ones fall back to the defaults for `n`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    generations: Option<usize>,
    population_size: Option<usize>,
    elite_fraction: Option<f64>,
    crossover_probability: Option<f64>,
    normalization: Option<f64>,
    seed: Option<u64>,
    runs: Option<usize>,
    target: Option<usize>,
    algorithm: Option<FlowAlgorithm>,
}

#[derive(Deserialize)]
struct EchoedReport {
    config: ConfigFile,
}

fn read_config(path: &Path) -> Result<ConfigFile> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_json = path.extension().is_some_and(|e| e == "json");
    let parsed = if is_json {
        serde_json::from_str::<EchoedReport>(&text)
            .map(|r| r.config)
            .or_else(|_| serde_json::from_str::<ConfigFile>(&text))
            .map_err(anyhow::Error::from)
    } else {
        toml::from_str::<ConfigFile>(&text).map_err(anyhow::Error::from)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

impl GaArgs {
    pub fn resolve(&self, n: usize) -> Result<GaConfig> {
        let file = match &self.config {
            Some(path) => read_config(path)?,
            None => ConfigFile::default(),
        };
        let l = self
            .normalization
            .or(file.normalization)
            .unwrap_or(DEFAULT_L);
        let mut cfg = GaConfig::defaults_for(n, l);
        let pick = |flag: Option<usize>, file: Option<usize>, default: usize| {
            flag.or(file).unwrap_or(default)
        };
        cfg.generations = pick(self.generations, file.generations, cfg.generations);
        cfg.population_size = pick(self.pop_size, file.population_size, cfg.population_size);
        cfg.runs = pick(self.runs, file.runs, cfg.runs);
        cfg.elite_fraction = self
            .elite_frac
            .or(file.elite_fraction)
            .unwrap_or(cfg.elite_fraction);
        cfg.crossover_probability = self
            .pc
            .or(file.crossover_probability)
            .unwrap_or(cfg.crossover_probability);
        cfg.seed = self.seed.or(file.seed).unwrap_or(cfg.seed);
        cfg.target = self.target.or(file.target);
        cfg.algorithm = self
            .algorithm
            .map(FlowAlgorithm::from)
            .or(file.algorithm)
            .unwrap_or(cfg.algorithm);
        if let Err(e) = cfg.validate() {
            bail!("{e}");
        }
        Ok(cfg)
    }
}

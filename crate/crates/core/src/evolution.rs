//! The generational loop.
//!
//! A population of `s` permutations is kept sorted by fitness, ties going to
//! the individual inserted first. Each new generation starts with the
//! `floor(f * s)` fittest individuals copied verbatim, then is filled by
//! crossover (probability `p_c`, two children) or make-source mutation (one
//! child). Parents are drawn with replacement, with probability
//! proportional to the linear rank weight `L - (L - 1)(k - 1)/(s - 1)`.
//!
//! All random decisions come from one ChaCha8 stream seeded per run and are
//! drawn on the calling thread in this order, slot by slot:
//!
//! 1. the branch draw, a uniform `f64` compared against `p_c`;
//! 2. crossover: first parent, second parent, then `z` in `1..n`;
//!    mutation: the parent, then `z` in `1..=n`.
//!
//! A crossover draw with a single free slot left (or on a one-node graph)
//! is carried out as a mutation, still consuming the branch draw. Fitness
//! evaluation happens afterwards and never touches the stream, so results do
//! not depend on whether it runs in parallel.

use std::time::{Duration, Instant};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::{Evaluator, FitnessResult, FlowAlgorithm};
use crate::graph::Graph;
use crate::orientation::{crossover, mutate, random_representation, LinearRepresentation};

/// Parameters of the evolutionary search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    /// Number of generations, the initial one included.
    pub generations: usize,
    pub population_size: usize,
    /// Fraction of the population carried over unchanged.
    pub elite_fraction: f64,
    pub crossover_probability: f64,
    /// Ratio between the selection weights of the fittest and the least fit
    /// individual.
    pub normalization: f64,
    /// Seed of the first run; run `r` (from 0) uses `seed + r`.
    pub seed: u64,
    pub runs: usize,
    /// Stop as soon as an independent set of this size has been found.
    #[serde(default)]
    pub target: Option<usize>,
    /// Max-flow routine used for fitness; both give identical results.
    #[serde(default)]
    pub algorithm: FlowAlgorithm,
}

impl GaConfig {
    /// Published settings for an `n`-node graph: `g = 10n`, `s = ceil(1.5n)`
    /// (at least 2), `f = 0.05`, `p_c = 0.2`, 20 runs.
    pub fn defaults_for(n: usize, normalization: f64) -> Self {
        GaConfig {
            generations: 10 * n,
            population_size: (3 * n).div_ceil(2).max(2),
            elite_fraction: 0.05,
            crossover_probability: 0.2,
            normalization,
            seed: 1,
            runs: 20,
            target: None,
            algorithm: FlowAlgorithm::default(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.generations == 0 {
            return Err(ConfigError::Invalid("generations must be at least 1"));
        }
        if self.population_size == 0 {
            return Err(ConfigError::Invalid("population size must be at least 1"));
        }
        if !(0.0..1.0).contains(&self.elite_fraction) {
            return Err(ConfigError::Invalid("elite fraction must lie in [0, 1)"));
        }
        if !(0.0..=1.0).contains(&self.crossover_probability) {
            return Err(ConfigError::Invalid(
                "crossover probability must lie in [0, 1]",
            ));
        }
        if !(self.normalization > 1.0 && self.normalization.is_finite()) {
            return Err(ConfigError::Invalid("normalization factor L must exceed 1"));
        }
        if self.runs == 0 {
            return Err(ConfigError::Invalid("runs must be at least 1"));
        }
        Ok(())
    }

    /// `floor(f * s)`, raised to 1 when `f > 0`.
    pub fn elite_count(&self) -> usize {
        if self.elite_fraction <= 0.0 {
            return 0;
        }
        let raw = (self.elite_fraction * self.population_size as f64 + 1e-9).floor() as usize;
        raw.clamp(1, self.population_size)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Invalid(&'static str),
    #[error("graph has no nodes")]
    EmptyGraph,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("cannot select from an empty population")]
    EmptyPopulation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub representation: LinearRepresentation,
    pub fitness: usize,
    /// Order of insertion into the population it belongs to.
    pub insertion_index: usize,
}

/// Individuals sorted by fitness (descending), then insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Population {
    members: Vec<Individual>,
    generation: usize,
}

impl Population {
    pub fn new(mut members: Vec<Individual>, generation: usize) -> Self {
        members.sort_by(|a, b| {
            b.fitness
                .cmp(&a.fitness)
                .then(a.insertion_index.cmp(&b.insertion_index))
        });
        Population {
            members,
            generation,
        }
    }

    /// Members in rank order; index 0 is rank 1.
    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn best(&self) -> Option<&Individual> {
        self.members.first()
    }
}

/// Linearly normalized selection weight of rank `k` (1-based) in a
/// population of `s`. Populations with fewer than two members select
/// uniformly, so every rank weighs 1 there.
pub fn rank_weight(k: usize, s: usize, normalization: f64) -> f64 {
    if s < 2 {
        return 1.0;
    }
    debug_assert!((1..=s).contains(&k), "rank {k} outside 1..={s}");
    normalization - (normalization - 1.0) / (s - 1) as f64 * (k - 1) as f64
}

/// Rank-proportional sampler for a fixed population size.
#[derive(Debug, Clone)]
pub struct RankSelector {
    weights: WeightedIndex<f64>,
}

impl RankSelector {
    pub fn new(size: usize, normalization: f64) -> Result<Self, SelectionError> {
        if size == 0 {
            return Err(SelectionError::EmptyPopulation);
        }
        let weights = WeightedIndex::new((1..=size).map(|k| rank_weight(k, size, normalization)))
            .expect("rank weights are positive and finite");
        Ok(RankSelector { weights })
    }

    /// 0-based rank index.
    pub fn pick<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.weights.sample(rng)
    }
}

/// Draws one individual with probability proportional to its rank weight.
pub fn select<'p, R: Rng + ?Sized>(
    pop: &'p Population,
    normalization: f64,
    rng: &mut R,
) -> Result<&'p Individual, SelectionError> {
    let selector = RankSelector::new(pop.len(), normalization)?;
    Ok(&pop.members[selector.pick(rng)])
}

/// Produces the next population from `pop`.
///
/// `evaluate` receives the non-elite children in insertion order and must
/// return one result per child, in the same order. The returned vector holds
/// those results.
pub fn next_generation<R, F>(
    pop: &Population,
    cfg: &GaConfig,
    selector: &RankSelector,
    rng: &mut R,
    mut evaluate: F,
) -> (Population, Vec<FitnessResult>)
where
    R: Rng + ?Sized,
    F: FnMut(&[LinearRepresentation]) -> Vec<FitnessResult>,
{
    let s = cfg.population_size;
    let elites = cfg.elite_count().min(pop.len());
    let n = pop.members[0].representation.len();

    let mut children = Vec::with_capacity(s - elites);
    while elites + children.len() < s {
        let remaining = s - elites - children.len();
        let wants_crossover = rng.random::<f64>() < cfg.crossover_probability;
        if wants_crossover && remaining >= 2 && n >= 2 {
            let first = &pop.members[selector.pick(rng)].representation;
            let second = &pop.members[selector.pick(rng)].representation;
            let z = rng.random_range(1..n);
            let (a, b) = crossover(first, second, z).expect("crossover point in range");
            children.push(a);
            children.push(b);
        } else {
            let parent = &pop.members[selector.pick(rng)].representation;
            let z = rng.random_range(1..=n);
            children.push(mutate(parent, z).expect("mutation point in range"));
        }
    }

    let results = evaluate(&children);
    assert_eq!(results.len(), children.len(), "one evaluation per child");

    let mut members = Vec::with_capacity(s);
    for (idx, elite) in pop.members[..elites].iter().enumerate() {
        members.push(Individual {
            insertion_index: idx,
            ..elite.clone()
        });
    }
    for (idx, (rep, result)) in children.into_iter().zip(&results).enumerate() {
        members.push(Individual {
            representation: rep,
            fitness: result.fitness,
            insertion_index: elites + idx,
        });
    }
    (Population::new(members, pop.generation + 1), results)
}

/// Outcome of one run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub seed: u64,
    /// Largest extracted independent set seen, sorted and 0-based.
    pub best_set: Vec<usize>,
    pub best_size: usize,
    /// Highest fitness of any evaluated individual.
    pub best_fitness: usize,
    /// Permutation (0-based) whose cut produced `best_set`.
    pub best_sequence: Vec<usize>,
    /// Generation (1-based) in which `best_set` was found.
    pub generation_found: usize,
    /// Best fitness seen so far, after each generation.
    pub history: Vec<usize>,
    pub evaluations: usize,
}

impl RunResult {
    pub fn generations_run(&self) -> usize {
        self.history.len()
    }
}

/// Batch fitness evaluation, optionally spread over the rayon pool.
#[derive(Debug, Clone, Copy)]
pub struct BatchEvaluator<'g> {
    graph: &'g Graph,
    parallel: bool,
    algorithm: FlowAlgorithm,
}

impl<'g> BatchEvaluator<'g> {
    pub fn new(graph: &'g Graph, parallel: bool) -> Self {
        Self::with_algorithm(graph, parallel, FlowAlgorithm::default())
    }

    pub fn with_algorithm(graph: &'g Graph, parallel: bool, algorithm: FlowAlgorithm) -> Self {
        BatchEvaluator {
            graph,
            parallel,
            algorithm,
        }
    }

    pub fn evaluate(&self, reps: &[LinearRepresentation]) -> Vec<FitnessResult> {
        if self.parallel {
            reps.par_iter()
                .map_init(
                    || Evaluator::new(self.algorithm),
                    |ev, rep| ev.evaluate(self.graph, rep),
                )
                .collect()
        } else {
            let mut ev = Evaluator::new(self.algorithm);
            reps.iter()
                .map(|rep| ev.evaluate(self.graph, rep))
                .collect()
        }
    }
}

struct Incumbent {
    set: Vec<usize>,
    sequence: Vec<usize>,
    generation: usize,
    fitness: usize,
}

impl Incumbent {
    fn observe(
        &mut self,
        generation: usize,
        reps: &[LinearRepresentation],
        results: &[FitnessResult],
    ) {
        for (rep, result) in reps.iter().zip(results) {
            self.fitness = self.fitness.max(result.fitness);
            if result.independent_set.len() > self.set.len() {
                self.set.clone_from(&result.independent_set);
                self.sequence = rep.sequence().to_vec();
                self.generation = generation;
            }
        }
    }
}

/// One run with fitness evaluation spread over the rayon pool.
pub fn run(g: &Graph, cfg: &GaConfig) -> Result<RunResult, ConfigError> {
    run_with(g, cfg, true)
}

/// One run seeded with `cfg.seed`.
pub fn run_with(g: &Graph, cfg: &GaConfig, parallel: bool) -> Result<RunResult, ConfigError> {
    cfg.validate()?;
    let n = g.node_count();
    if n == 0 {
        return Err(ConfigError::EmptyGraph);
    }
    let evaluator = BatchEvaluator::with_algorithm(g, parallel, cfg.algorithm);
    let selector = RankSelector::new(cfg.population_size, cfg.normalization)
        .expect("validated population size");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let initial: Vec<LinearRepresentation> = (0..cfg.population_size)
        .map(|_| random_representation(n, &mut rng))
        .collect();
    let results = evaluator.evaluate(&initial);
    let mut evaluations = results.len();
    let mut incumbent = Incumbent {
        set: Vec::new(),
        sequence: Vec::new(),
        generation: 1,
        fitness: 0,
    };
    incumbent.observe(1, &initial, &results);
    let members = initial
        .into_iter()
        .zip(&results)
        .enumerate()
        .map(|(idx, (rep, r))| Individual {
            representation: rep,
            fitness: r.fitness,
            insertion_index: idx,
        })
        .collect();
    let mut pop = Population::new(members, 1);
    let mut history = vec![incumbent.fitness];

    let reached = |inc: &Incumbent| cfg.target.is_some_and(|t| inc.set.len() >= t);
    while pop.generation() < cfg.generations && !reached(&incumbent) {
        let mut children = Vec::new();
        let (next, results) = next_generation(&pop, cfg, &selector, &mut rng, |reps| {
            children = reps.to_vec();
            evaluator.evaluate(reps)
        });
        evaluations += results.len();
        incumbent.observe(next.generation(), &children, &results);
        history.push(incumbent.fitness);
        pop = next;
    }

    Ok(RunResult {
        seed: cfg.seed,
        best_size: incumbent.set.len(),
        best_set: incumbent.set,
        best_fitness: incumbent.fitness,
        best_sequence: incumbent.sequence,
        generation_found: incumbent.generation,
        history,
        evaluations,
    })
}

/// Results of `cfg.runs` independent runs.
#[derive(Debug, Clone)]
pub struct MultiRunResult {
    pub runs: Vec<RunResult>,
    /// Wall-clock time of each run; informational only.
    pub elapsed: Vec<Duration>,
    /// Index into `runs` of the run with the largest set (first on ties).
    pub best_run: usize,
}

impl MultiRunResult {
    pub fn best(&self) -> &RunResult {
        &self.runs[self.best_run]
    }
}

/// Runs with seeds `seed, seed + 1, ...` and keeps every result.
///
/// With a target size, runs are executed in order and the batch stops after
/// the first run that reaches it.
pub fn best_of_runs(g: &Graph, cfg: &GaConfig) -> Result<MultiRunResult, ConfigError> {
    best_of_runs_with(g, cfg, true)
}

pub fn best_of_runs_with(
    g: &Graph,
    cfg: &GaConfig,
    parallel: bool,
) -> Result<MultiRunResult, ConfigError> {
    cfg.validate()?;
    let single = |r: usize| {
        let cfg = GaConfig {
            seed: cfg.seed.wrapping_add(r as u64),
            ..cfg.clone()
        };
        let start = Instant::now();
        run_with(g, &cfg, parallel).map(|res| (res, start.elapsed()))
    };

    let outcomes: Vec<(RunResult, Duration)> = match cfg.target {
        Some(target) => {
            let mut out = Vec::new();
            for r in 0..cfg.runs {
                let outcome = single(r)?;
                let done = outcome.0.best_size >= target;
                out.push(outcome);
                if done {
                    break;
                }
            }
            out
        }
        None if parallel => (0..cfg.runs)
            .into_par_iter()
            .map(single)
            .collect::<Result<_, _>>()?,
        None => (0..cfg.runs).map(single).collect::<Result<_, _>>()?,
    };

    let (runs, elapsed): (Vec<_>, Vec<_>) = outcomes.into_iter().unzip();
    let best_run = runs
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.best_size.cmp(&b.best_size).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("at least one run");
    Ok(MultiRunResult {
        runs,
        elapsed,
        best_run,
    })
}

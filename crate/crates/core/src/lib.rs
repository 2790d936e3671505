//! Maximum independent sets through widest acyclic orientations.
//!
//! An acyclic orientation of a graph is scored by the number of chains in
//! its minimum chain decomposition. The maximum of that score over all
//! acyclic orientations is the independence number of the graph, so a
//! genetic algorithm over orientations doubles as an independent set
//! heuristic. Scores come from a max-flow computation on a split network,
//! and the min cut of the same network names an independent set that
//! witnesses the score.
//!
//! Modules:
//!
//! * [`graph`]: the undirected graph model and DIMACS ASCII I/O.
//! * [`orientation`]: permutation encoding of orientations, crossover and
//!   make-source mutation.
//! * [`flow`]: the split flow network, max flow by bipartite matching or
//!   push-relabel, and independent set extraction.
//! * [`evolution`]: rank selection, elitism and the generational loop.
//! * [`oracle`]: exact references for small instances.

pub mod evolution;
pub mod flow;
pub mod graph;
pub mod oracle;
pub mod orientation;

pub use evolution::{
    best_of_runs, best_of_runs_with, rank_weight, run, run_with, select, BatchEvaluator,
    ConfigError, GaConfig, Individual, MultiRunResult, Population, RankSelector, RunResult,
};
pub use flow::{
    extract_independent_set, fitness, max_flow_value, verify_independent_set, ChainMatcher,
    Evaluator, FitnessResult, FlowAlgorithm, FlowNetwork, MaxFlow, NetNode, NetworkError,
    PushRelabel, SetViolation,
};
pub use graph::{
    complement, parse_dimacs, read_dimacs, write_dimacs, DimacsError, DimacsGraph, Graph,
    GraphError, Violation,
};
pub use oracle::{
    exact_mis, exhaustive_widest_orientation, min_path_partition_bruteforce, OracleError,
    OracleResult,
};
pub use orientation::{
    crossover, induce_orientation, mutate, random_representation, LinearRepresentation,
    Orientation, RepresentationError,
};

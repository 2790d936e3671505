//! Acceptance checks, one report line per criterion.
//!
//! Runs without the libtest harness so the report lines always reach the
//! terminal. The process exits non-zero when any criterion fails.

mod common;

use std::collections::{HashMap, HashSet, VecDeque};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wao_core::oracle::for_each_permutation;
use wao_core::{
    best_of_runs, crossover, exact_mis, fitness, induce_orientation, min_path_partition_bruteforce,
    mutate, random_representation, rank_weight, run_with, verify_independent_set, Evaluator,
    FlowAlgorithm, GaConfig, Graph, LinearRepresentation, RankSelector,
};

use common::*;

// Sample sizes and tolerances. Everything not listed here is exact.
const CORPUS_MAX_N: usize = 7;
const CORPUS_PER_DENSITY: usize = 10;
const CORPUS_MIN_SIZE: usize = 200;
const PARTITION_CASES: usize = 100;
const PARTITION_MAX_N: usize = 9;
const MATCHING_CASES: usize = 200;
const MATCHING_MAX_N: usize = 50;
const MUTATION_CASES: usize = 10_000;
const CROSSOVER_CASES: usize = 1_000;
const OPERATOR_MAX_N: usize = 30;
const CONNECTIVITY_MAX_N: usize = 4;
const SELECTION_SIZE: usize = 10;
const SELECTION_L: f64 = 15.0;
const SELECTION_DRAWS: usize = 100_000;
const SELECTION_SIGMAS: f64 = 3.0;
const BENCHMARK_RUNS: usize = 20;
const BENCHMARK_LS: [f64; 2] = [15.0, 30.0];
const BENCHMARKS: [(&str, usize); 8] = [
    ("johnson8-2-4", 4),
    ("johnson8-4-4", 14),
    ("hamming6-2", 32),
    ("hamming6-4", 4),
    ("MANN_a9", 16),
    ("c-fat200-1", 12),
    ("c-fat200-2", 24),
    ("c-fat200-5", 58),
];
const DETERMINISM_INSTANCES: [&str; 5] = [
    "johnson8-2-4",
    "johnson8-4-4",
    "hamming6-2",
    "hamming6-4",
    "MANN_a9",
];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

/// A best set reported by a solve, kept for the certificate check.
struct Certificate {
    label: String,
    graph: Graph,
    set: Vec<usize>,
}

fn evaluators() -> [Evaluator; 2] {
    [
        Evaluator::new(FlowAlgorithm::Matching),
        Evaluator::new(FlowAlgorithm::PushRelabel),
    ]
}

fn widest_orientation_matches_alpha() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let corpus = small_corpus(CORPUS_MAX_N, CORPUS_PER_DENSITY, &mut rng);
    let mut failures = Vec::new();
    let mut orientations = 0usize;
    let mut evaluator = Evaluator::default();
    for (name, g) in &corpus {
        let alpha = exact_mis(g).expect("small graph").alpha;
        let mut widest = 0;
        let mut above = 0;
        for_each_permutation(g.node_count(), |perm| {
            let rep = LinearRepresentation::new(perm.to_vec()).expect("permutation");
            let f = evaluator.fitness_value(g, &rep);
            widest = widest.max(f);
            above += usize::from(f > alpha);
            orientations += 1;
        });
        if widest != alpha || above > 0 {
            failures.push(format!(
                "{name}: widest {widest}, alpha {alpha}, {above} above"
            ));
        }
    }
    let enough = corpus.len() >= CORPUS_MIN_SIZE;
    Outcome::check(
        enough && failures.is_empty(),
        format!(
            "{} graphs, {orientations} orientations, {} mismatches{}",
            corpus.len(),
            failures.len(),
            first(&failures)
        ),
    )
}

fn flow_matches_path_partition() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut failures = Vec::new();
    for case in 0..PARTITION_CASES {
        let n = rng.random_range(1..=PARTITION_MAX_N);
        let g = random_graph(n, rng.random_range(0.0..1.0), &mut rng);
        let rep = random_representation(n, &mut rng);
        let o = induce_orientation(&g, &rep).expect("matching length");
        let paths = min_path_partition_bruteforce(&g, &o).expect("small acyclic case");
        let reference = fitness(&g, &o).expect("valid orientation").fitness;
        let fast: Vec<usize> = evaluators()
            .iter_mut()
            .map(|e| e.fitness_value(&g, &rep))
            .collect();
        if reference != paths || fast.iter().any(|&f| f != paths) {
            failures.push(format!(
                "case {case}: paths {paths}, network {reference}, evaluators {fast:?}"
            ));
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "{PARTITION_CASES} cases, {} mismatches{}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn flow_matches_matching_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut failures = Vec::new();
    for case in 0..MATCHING_CASES {
        let n = rng.random_range(1..=MATCHING_MAX_N);
        let g = random_graph(n, rng.random_range(0.0..1.0), &mut rng);
        let rep = random_representation(n, &mut rng);
        let expected = kuhn_matching(n, &arcs_from_sequence(&g, rep.sequence()));
        let o = induce_orientation(&g, &rep).expect("matching length");
        let mut flows = vec![fitness(&g, &o).expect("valid orientation").flow_value];
        flows.extend(
            evaluators()
                .iter_mut()
                .map(|e| e.evaluate(&g, &rep).flow_value),
        );
        if flows.iter().any(|&f| f != expected) {
            failures.push(format!("case {case}: oracle {expected}, flows {flows:?}"));
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "{MATCHING_CASES} cases, {} mismatches{}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn operators_are_faithful() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut violations = Vec::new();

    for case in 0..MUTATION_CASES {
        let n = rng.random_range(1..=OPERATOR_MAX_N);
        let g = random_graph(n, rng.random_range(0.0..1.0), &mut rng);
        let parent = random_representation(n, &mut rng);
        let z = rng.random_range(1..=n);
        let child = mutate(&parent, z).expect("z in range");
        if LinearRepresentation::new(child.sequence().to_vec()).is_err() {
            violations.push(format!("mutation {case}: not a permutation"));
            continue;
        }
        let arcs = arcs_from_sequence(&g, child.sequence());
        if has_cycle(n, &arcs) {
            violations.push(format!("mutation {case}: cyclic orientation"));
        }
        let flipped = make_source(
            &arcs_from_sequence(&g, parent.sequence()),
            parent.sequence()[z - 1],
        );
        if arcs != flipped {
            violations.push(format!("mutation {case}: differs from make-source"));
        }
    }

    for case in 0..CROSSOVER_CASES {
        let n = rng.random_range(2..=OPERATOR_MAX_N);
        let g = random_graph(n, rng.random_range(0.0..1.0), &mut rng);
        let first_parent = random_representation(n, &mut rng);
        let second_parent = random_representation(n, &mut rng);
        let z = rng.random_range(1..n);
        let (a, b) = crossover(&first_parent, &second_parent, z).expect("z in range");
        for (label, child, prefix_parent, order_parent) in [
            ("first", &a, &first_parent, &second_parent),
            ("second", &b, &second_parent, &first_parent),
        ] {
            if LinearRepresentation::new(child.sequence().to_vec()).is_err() {
                violations.push(format!("crossover {case} {label}: not a permutation"));
                continue;
            }
            let arcs = arcs_from_sequence(&g, child.sequence());
            if has_cycle(n, &arcs) {
                violations.push(format!("crossover {case} {label}: cyclic orientation"));
            }
            let prefix: HashSet<usize> = prefix_parent.sequence()[..z].iter().copied().collect();
            let prefix_arcs = arcs_from_sequence(&g, prefix_parent.sequence());
            let order_arcs = arcs_from_sequence(&g, order_parent.sequence());
            for (k, &(u, v)) in g.edges().iter().enumerate() {
                let touches_prefix = prefix.contains(&u) || prefix.contains(&v);
                let expected = if touches_prefix {
                    prefix_arcs[k]
                } else {
                    order_arcs[k]
                };
                if arcs[k] != expected {
                    let side = if touches_prefix {
                        "prefix-incident"
                    } else {
                        "suffix-internal"
                    };
                    violations.push(format!(
                        "crossover {case} {label}: {side} edge {}-{} not inherited",
                        u + 1,
                        v + 1
                    ));
                }
            }
        }
    }

    Outcome::check(
        violations.is_empty(),
        format!(
            "{MUTATION_CASES} mutations, {CROSSOVER_CASES} crossovers, {} violations{}",
            violations.len(),
            first(&violations)
        ),
    )
}

/// Whether every node of the move graph reaches node 0 and is reached
/// from it.
fn strongly_connected(moves: &[Vec<usize>]) -> bool {
    let mut reverse = vec![Vec::new(); moves.len()];
    for (from, targets) in moves.iter().enumerate() {
        for &to in targets {
            reverse[to].push(from);
        }
    }
    let reaches_all = |next: &[Vec<usize>]| {
        let mut seen = vec![false; next.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &next[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    reaches_all(moves) && reaches_all(&reverse)
}

fn mutation_is_connected() -> Outcome {
    let mut graphs = 0;
    let mut failures = Vec::new();
    for n in 1..=CONNECTIVITY_MAX_N {
        for g in all_graphs(n) {
            graphs += 1;
            let mut ids: HashMap<Vec<(usize, usize)>, usize> = HashMap::new();
            let mut moves: Vec<Vec<usize>> = Vec::new();
            let mut id_of = |arcs: Vec<(usize, usize)>, moves: &mut Vec<Vec<usize>>| {
                let next = ids.len();
                *ids.entry(arcs).or_insert_with(|| {
                    moves.push(Vec::new());
                    next
                })
            };
            for_each_permutation(n, |perm| {
                let rep = LinearRepresentation::new(perm.to_vec()).expect("permutation");
                let from = id_of(
                    induce_orientation(&g, &rep)
                        .expect("length")
                        .arcs()
                        .to_vec(),
                    &mut moves,
                );
                for z in 1..=n {
                    let child = mutate(&rep, z).expect("z in range");
                    let arcs = induce_orientation(&g, &child)
                        .expect("length")
                        .arcs()
                        .to_vec();
                    let to = id_of(arcs, &mut moves);
                    moves[from].push(to);
                }
            });
            if !strongly_connected(&moves) {
                failures.push(format!("n={n} edges {:?}", g.edges()));
            }
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "{graphs} graphs, {} not strongly connected{}",
            failures.len(),
            first(&failures)
        ),
    )
}

fn selection_follows_rank_weights() -> Outcome {
    let selector = RankSelector::new(SELECTION_SIZE, SELECTION_L).expect("non-empty");
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut counts = [0usize; SELECTION_SIZE];
    for _ in 0..SELECTION_DRAWS {
        counts[selector.pick(&mut rng)] += 1;
    }
    let total: f64 = (1..=SELECTION_SIZE)
        .map(|k| rank_weight(k, SELECTION_SIZE, SELECTION_L))
        .sum();
    let draws = SELECTION_DRAWS as f64;
    let mut worst: f64 = 0.0;
    for (idx, &count) in counts.iter().enumerate() {
        let p = rank_weight(idx + 1, SELECTION_SIZE, SELECTION_L) / total;
        let sigma = (draws * p * (1.0 - p)).sqrt();
        worst = worst.max((count as f64 - draws * p).abs() / sigma);
    }
    Outcome::check(
        worst <= SELECTION_SIGMAS,
        format!("{SELECTION_DRAWS} draws, largest deviation {worst:.2} sigma (limit {SELECTION_SIGMAS})"),
    )
}

fn benchmarks_reproduce(certificates: &mut Vec<Certificate>) -> Outcome {
    let mut misses = Vec::new();
    for (name, target) in BENCHMARKS {
        let g = load_complemented(name);
        for l in BENCHMARK_LS {
            let cfg = GaConfig {
                runs: BENCHMARK_RUNS,
                target: Some(target),
                ..GaConfig::defaults_for(g.node_count(), l)
            };
            let start = Instant::now();
            let batch = best_of_runs(&g, &cfg).expect("valid config");
            let best = batch.best();
            println!(
                "  {name} L={l}: best {} (target {target}) after {} runs, {:.1}s",
                best.best_size,
                batch.runs.len(),
                start.elapsed().as_secs_f64()
            );
            if best.best_size != target {
                misses.push(format!("{name} L={l} got {}", best.best_size));
            }
            for run in &batch.runs {
                certificates.push(Certificate {
                    label: format!("{name} L={l} seed {}", run.seed),
                    graph: g.clone(),
                    set: run.best_set.clone(),
                });
            }
        }
    }
    Outcome::check(
        misses.is_empty(),
        format!(
            "{} instance/L pairs, {} misses{}",
            BENCHMARKS.len() * BENCHMARK_LS.len(),
            misses.len(),
            if misses.is_empty() {
                String::new()
            } else {
                format!(": {}", misses.join(", "))
            }
        ),
    )
}

fn runs_are_deterministic(certificates: &mut Vec<Certificate>) -> Outcome {
    let mut failures = Vec::new();
    for name in DETERMINISM_INSTANCES {
        let g = load_complemented(name);
        let cfg = GaConfig {
            runs: 1,
            seed: 7,
            ..GaConfig::defaults_for(g.node_count(), 15.0)
        };
        let runs: Vec<_> = [true, true, false, false]
            .into_iter()
            .map(|parallel| run_with(&g, &cfg, parallel).expect("valid config"))
            .collect();
        let key = |r: &wao_core::RunResult| (r.best_size, r.best_set.clone(), r.history.clone());
        if runs.iter().any(|r| key(r) != key(&runs[0])) {
            failures.push(name.to_string());
        }
        for (idx, run) in runs.into_iter().enumerate() {
            certificates.push(Certificate {
                label: format!("{name} determinism #{idx}"),
                graph: g.clone(),
                set: run.best_set,
            });
        }
    }
    Outcome::check(
        failures.is_empty(),
        format!(
            "{} instances, parallel on and off twice each, {} differ{}",
            DETERMINISM_INSTANCES.len(),
            failures.len(),
            first(&failures)
        ),
    )
}

fn certificates_hold(certificates: &[Certificate]) -> Outcome {
    let bad: Vec<String> = certificates
        .iter()
        .filter_map(|c| {
            verify_independent_set(&c.graph, &c.set)
                .err()
                .map(|e| format!("{}: {e}", c.label))
        })
        .collect();
    Outcome::check(
        bad.is_empty() && !certificates.is_empty(),
        format!(
            "{} best sets checked, {} violations{}",
            certificates.len(),
            bad.len(),
            first(&bad)
        ),
    )
}

fn first(items: &[String]) -> String {
    items
        .first()
        .map(|s| format!(" (first: {s})"))
        .unwrap_or_default()
}

fn report(id: usize, name: &str, start: Instant, outcome: Outcome) -> bool {
    println!(
        "criterion {id} {name}: {} [{:.1}s] {}",
        if outcome.pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        outcome.detail
    );
    outcome.pass
}

fn main() {
    let mut certificates = Vec::new();
    let mut passed = Vec::new();

    let t = Instant::now();
    passed.push(report(
        1,
        "widest orientation equals alpha",
        t,
        widest_orientation_matches_alpha(),
    ));
    let t = Instant::now();
    passed.push(report(
        2,
        "flow equals path partition",
        t,
        flow_matches_path_partition(),
    ));
    let t = Instant::now();
    passed.push(report(
        3,
        "flow equals matching oracle",
        t,
        flow_matches_matching_oracle(),
    ));
    let t = Instant::now();
    passed.push(report(
        4,
        "operator closure and fidelity",
        t,
        operators_are_faithful(),
    ));
    let t = Instant::now();
    passed.push(report(
        5,
        "mutation connectivity",
        t,
        mutation_is_connected(),
    ));
    let t = Instant::now();
    passed.push(report(
        6,
        "selection distribution",
        t,
        selection_follows_rank_weights(),
    ));
    let t = Instant::now();
    let benchmarks = benchmarks_reproduce(&mut certificates);
    passed.push(report(7, "benchmark reproduction", t, benchmarks));
    let t = Instant::now();
    let determinism = runs_are_deterministic(&mut certificates);
    let t8 = Instant::now();
    passed.push(report(
        8,
        "certificate soundness",
        t8,
        certificates_hold(&certificates),
    ));
    passed.push(report(9, "determinism", t, determinism));

    let failed = passed.iter().filter(|&&p| !p).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        passed.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

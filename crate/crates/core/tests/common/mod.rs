//! Graph corpora and reference checks shared by the integration tests.
//!
//! Everything here is written against plain data (edge lists, arc lists,
//! node sequences) so it stays independent of the code under test.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use wao_core::{complement, parse_dimacs, Graph};

pub fn random_graph<R: Rng + ?Sized>(n: usize, density: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("generated edges are valid")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)));
    Graph::from_edges(a + b, edges).expect("valid bipartite graph")
}

/// Every labeled graph on `n` nodes, by edge bitmask.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &e)| e);
            Graph::from_edges(n, edges).expect("valid subgraph")
        })
        .collect()
}

/// Named small graphs: paths, cycles, complete and complete bipartite
/// graphs with at most `max_n` nodes, followed by `per_density` random
/// graphs for every `n` in `2..=max_n` at densities 0.2, 0.5 and 0.8.
pub fn small_corpus<R: Rng + ?Sized>(
    max_n: usize,
    per_density: usize,
    rng: &mut R,
) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        out.push((format!("P{n}"), Graph::path(n)));
        out.push((format!("K{n}"), Graph::complete(n)));
        if n >= 3 {
            out.push((format!("C{n}"), Graph::cycle(n)));
        }
    }
    for a in 1..max_n {
        for b in a..=max_n - a {
            out.push((format!("K{a},{b}"), complete_bipartite(a, b)));
        }
    }
    for n in 2..=max_n {
        for density in [0.2, 0.5, 0.8] {
            for i in 0..per_density {
                out.push((
                    format!("G({n},{density})#{i}"),
                    random_graph(n, density, rng),
                ));
            }
        }
    }
    out
}

/// Arcs induced by a node sequence, one per edge in edge-list order.
pub fn arcs_from_sequence(g: &Graph, sequence: &[usize]) -> Vec<(usize, usize)> {
    let mut pos = vec![0; sequence.len()];
    for (idx, &v) in sequence.iter().enumerate() {
        pos[v] = idx;
    }
    g.edges()
        .iter()
        .map(|&(u, v)| if pos[u] < pos[v] { (u, v) } else { (v, u) })
        .collect()
}

/// Reorients every arc touching `node` so that it leaves `node`.
pub fn make_source(arcs: &[(usize, usize)], node: usize) -> Vec<(usize, usize)> {
    arcs.iter()
        .map(|&(t, h)| if h == node { (h, t) } else { (t, h) })
        .collect()
}

/// Depth-first cycle check on an arc list.
pub fn has_cycle(n: usize, arcs: &[(usize, usize)]) -> bool {
    let mut out = vec![Vec::new(); n];
    for &(t, h) in arcs {
        out[t].push(h);
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    fn visit(v: usize, out: &[Vec<usize>], state: &mut [u8]) -> bool {
        state[v] = 1;
        for &w in &out[v] {
            if state[w] == 1 || (state[w] == 0 && visit(w, out, state)) {
                return true;
            }
        }
        state[v] = 2;
        false
    }
    (0..n).any(|v| state[v] == 0 && visit(v, &out, &mut state))
}

/// Maximum matching between tails and heads of `arcs` by repeated
/// single-path augmentation (Kuhn's algorithm).
pub fn kuhn_matching(n: usize, arcs: &[(usize, usize)]) -> usize {
    let mut out = vec![Vec::new(); n];
    for &(t, h) in arcs {
        out[t].push(h);
    }
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        u: usize,
        out: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &v in &out[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, out, owner, seen)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..n)
        .filter(|&u| augment(u, &out, &mut owner, &mut vec![false; n]))
        .count()
}

/// Largest clique by subset enumeration; `n <= 20`.
pub fn max_clique_bruteforce(g: &Graph) -> usize {
    let n = g.node_count();
    assert!(n <= 20, "clique enumeration is limited to 20 nodes");
    let adj: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(0, |m, &v| m | 1 << v))
        .collect();
    (0u32..1 << n)
        .filter(|&set| (0..n).all(|u| set >> u & 1 == 0 || (set & !(1 << u)) & !adj[u] == 0))
        .map(|set| set.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn instance_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../instances")
        .join(format!("{name}.clq"))
}

/// A benchmark file as shipped (clique form).
pub fn load_instance(name: &str) -> Graph {
    let path = instance_path(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("cannot read {}: {e}", path.display()));
    parse_dimacs(&text)
        .unwrap_or_else(|e| panic!("{name}: {e}"))
        .graph
}

/// The graph whose independent sets are the cliques of the benchmark file.
pub fn load_complemented(name: &str) -> Graph {
    complement(&load_instance(name))
}

//! Exact references for small instances.
//!
//! Nothing here is heuristic: each function either returns the exact value
//! or refuses with an error when the instance exceeds its size guard.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flow::Evaluator;
use crate::graph::Graph;
use crate::orientation::{LinearRepresentation, Orientation};

/// Largest graph solved by plain enumeration of independent sets.
pub const ENUMERATION_LIMIT: usize = 20;
/// Largest graph accepted by the branch-and-bound solver.
pub const BRANCH_AND_BOUND_LIMIT: usize = 200;
/// Default cap on branch-and-bound search nodes.
pub const DEFAULT_BRANCH_BUDGET: u64 = 200_000_000;
/// Largest graph for the sweep over all `n!` permutations.
pub const ORIENTATION_SWEEP_LIMIT: usize = 7;
/// Largest graph for the exhaustive path-partition search.
pub const PATH_PARTITION_LIMIT: usize = 9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{n} nodes exceeds the oracle limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("branch-and-bound gave up after {0} search nodes")]
    BudgetExceeded(u64),
    #[error("orientation does not match the graph")]
    OrientationMismatch,
    #[error("orientation contains a directed cycle")]
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Enumeration,
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub alpha: usize,
    /// Sorted, 0-based.
    pub witness: Vec<usize>,
    pub method: OracleMethod,
}

/// Exact independence number with a witness.
pub fn exact_mis(g: &Graph) -> Result<OracleResult, OracleError> {
    exact_mis_with_budget(g, DEFAULT_BRANCH_BUDGET)
}

pub fn exact_mis_with_budget(g: &Graph, budget: u64) -> Result<OracleResult, OracleError> {
    let n = g.node_count();
    if n <= ENUMERATION_LIMIT {
        let witness = enumerate_mis(g);
        return Ok(OracleResult {
            alpha: witness.len(),
            witness,
            method: OracleMethod::Enumeration,
        });
    }
    if n > BRANCH_AND_BOUND_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: BRANCH_AND_BOUND_LIMIT,
        });
    }
    let witness = BranchAndBound::new(g, budget).solve()?;
    Ok(OracleResult {
        alpha: witness.len(),
        witness,
        method: OracleMethod::BranchAndBound,
    })
}

/// Visits every independent set by include/exclude recursion.
fn enumerate_mis(g: &Graph) -> Vec<usize> {
    fn visit(
        g: &Graph,
        v: usize,
        blocked: &mut [u32],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if v == g.node_count() {
            if current.len() > best.len() {
                best.clone_from(current);
            }
            return;
        }
        if blocked[v] == 0 {
            current.push(v);
            for &w in g.neighbors(v) {
                blocked[w] += 1;
            }
            visit(g, v + 1, blocked, current, best);
            for &w in g.neighbors(v) {
                blocked[w] -= 1;
            }
            current.pop();
        }
        visit(g, v + 1, blocked, current, best);
    }

    let mut blocked = vec![0; g.node_count()];
    let mut best = Vec::new();
    visit(g, 0, &mut blocked, &mut Vec::new(), &mut best);
    best
}

type Bits = Vec<u64>;

fn bit_count(set: &[u64]) -> usize {
    set.iter().map(|w| w.count_ones() as usize).sum()
}

fn bits_iter(set: &[u64]) -> impl Iterator<Item = usize> + '_ {
    set.iter().enumerate().flat_map(|(i, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            (w != 0).then(|| {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                i * 64 + b
            })
        })
    })
}

/// Include/exclude search on a maximum-degree vertex, bounded by
/// `|current| + |candidates|`. Vertices of degree 0 or 1 among the
/// candidates are taken without branching.
struct BranchAndBound {
    neighbors: Vec<Bits>,
    best: Vec<usize>,
    budget: u64,
    visited: u64,
}

impl BranchAndBound {
    fn new(g: &Graph, budget: u64) -> Self {
        let words = g.node_count().div_ceil(64);
        let neighbors = (0..g.node_count())
            .map(|v| {
                let mut bits = vec![0u64; words];
                for &w in g.neighbors(v) {
                    bits[w / 64] |= 1 << (w % 64);
                }
                bits
            })
            .collect();
        BranchAndBound {
            neighbors,
            best: Vec::new(),
            budget,
            visited: 0,
        }
    }

    fn solve(mut self) -> Result<Vec<usize>, OracleError> {
        let n = self.neighbors.len();
        let mut candidates = vec![0u64; n.div_ceil(64)];
        for v in 0..n {
            candidates[v / 64] |= 1 << (v % 64);
        }
        self.search(candidates, &mut Vec::new())?;
        let mut best = self.best;
        best.sort_unstable();
        Ok(best)
    }

    fn degree_within(&self, v: usize, candidates: &[u64]) -> usize {
        self.neighbors[v]
            .iter()
            .zip(candidates)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn take(&self, v: usize, candidates: &mut [u64], current: &mut Vec<usize>) {
        current.push(v);
        candidates[v / 64] &= !(1 << (v % 64));
        for (c, nb) in candidates.iter_mut().zip(&self.neighbors[v]) {
            *c &= !nb;
        }
    }

    fn search(
        &mut self,
        mut candidates: Bits,
        current: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(OracleError::BudgetExceeded(self.budget));
        }
        let depth = current.len();

        // forced choices
        loop {
            let forced = bits_iter(&candidates).find(|&v| self.degree_within(v, &candidates) <= 1);
            match forced {
                Some(v) => self.take(v, &mut candidates, current),
                None => break,
            }
        }

        let remaining = bit_count(&candidates);
        if remaining == 0 {
            if current.len() > self.best.len() {
                self.best.clone_from(current);
            }
            current.truncate(depth);
            return Ok(());
        }
        if current.len() + remaining <= self.best.len() {
            current.truncate(depth);
            return Ok(());
        }

        let pivot = bits_iter(&candidates)
            .max_by_key(|&v| (self.degree_within(v, &candidates), std::cmp::Reverse(v)))
            .expect("candidates nonempty");

        let mut with = candidates.clone();
        let mark = current.len();
        self.take(pivot, &mut with, current);
        self.search(with, current)?;
        current.truncate(mark);

        candidates[pivot / 64] &= !(1 << (pivot % 64));
        self.search(candidates, current)?;
        current.truncate(depth);
        Ok(())
    }
}

/// Maximum fitness over the orientations induced by all `n!` permutations.
pub fn exhaustive_widest_orientation(g: &Graph) -> Result<usize, OracleError> {
    let n = g.node_count();
    if n > ORIENTATION_SWEEP_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: ORIENTATION_SWEEP_LIMIT,
        });
    }
    let mut evaluator = Evaluator::default();
    let mut best = 0;
    for_each_permutation(n, |perm| {
        let rep = LinearRepresentation::new(perm.to_vec()).expect("permutation");
        best = best.max(evaluator.fitness_value(g, &rep));
    });
    Ok(best)
}

/// Heap's algorithm; calls `visit` once per permutation of `0..n`.
pub fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            let j = if i % 2 == 0 { 0 } else { counters[i] };
            perm.swap(j, i);
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

/// Fewest blocks in a partition of the nodes into directed paths under `o`,
/// by exhaustive search over subsets.
pub fn min_path_partition_bruteforce(g: &Graph, o: &Orientation) -> Result<usize, OracleError> {
    let n = g.node_count();
    if n > PATH_PARTITION_LIMIT {
        return Err(OracleError::TooLarge {
            n,
            limit: PATH_PARTITION_LIMIT,
        });
    }
    if o.arcs().len() != g.edge_count()
        || o.arcs()
            .iter()
            .any(|&(t, h)| t >= n || h >= n || !g.has_edge(t, h))
    {
        return Err(OracleError::OrientationMismatch);
    }
    let order = topological_order(n, o.arcs()).ok_or(OracleError::Cyclic)?;
    let mut arc = vec![vec![false; n]; n];
    for &(t, h) in o.arcs() {
        arc[t][h] = true;
    }

    // a block is a directed path iff its nodes, listed in topological order,
    // are joined by consecutive arcs
    let full = 1usize << n;
    let is_path: Vec<bool> = (0..full)
        .map(|mask| {
            let members: Vec<usize> = order
                .iter()
                .copied()
                .filter(|&v| mask >> v & 1 == 1)
                .collect();
            mask != 0 && members.windows(2).all(|w| arc[w[0]][w[1]])
        })
        .collect();

    let mut fewest = vec![usize::MAX; full];
    fewest[0] = 0;
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // every block containing the lowest node: low | (sub of rest)
        let mut sub = rest;
        loop {
            let block = sub | low;
            if is_path[block] {
                let left = fewest[mask ^ block];
                if left != usize::MAX {
                    fewest[mask] = fewest[mask].min(left + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(fewest[full - 1])
}

fn topological_order(n: usize, arcs: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut indegree = vec![0; n];
    let mut out = vec![Vec::new(); n];
    for &(t, h) in arcs {
        indegree[h] += 1;
        out[t].push(h);
    }
    let mut ready: Vec<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop() {
        order.push(v);
        for &w in &out[v] {
            indegree[w] -= 1;
            if indegree[w] == 0 {
                ready.push(w);
            }
        }
    }
    (order.len() == n).then_some(order)
}

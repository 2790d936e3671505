//! Hopcroft-Karp between out-copies and in-copies.
//!
//! A unit of flow through `s -> i' -> j'' -> t` is exactly a matched pair
//! `(i, j)` with the edge directed `i -> j`, so the max-flow value equals a
//! maximum matching of the bipartite graph whose left side is the out-copies
//! and whose right side is the in-copies. The successors of `i` are read off
//! the adjacency lists, keeping the neighbors that come later in the
//! permutation.
//!
//! Dense graphs switch to bitset rows of successors, cut out of the graph's
//! cached adjacency matrix, so that building the rows and each phase of the
//! search cost `O(n^2 / 64)` word operations instead of `O(m)`.

use super::{net_index, NetNode};
use crate::graph::Graph;
use crate::orientation::LinearRepresentation;

const NIL: usize = usize::MAX;
const UNSEEN: u32 = u32::MAX;

#[derive(Debug, Default, Clone)]
pub struct ChainMatcher {
    /// In-copy matched to each out-copy.
    mate_out: Vec<usize>,
    /// Out-copy matched to each in-copy.
    mate_in: Vec<usize>,
    layer: Vec<u32>,
    cursor: Vec<usize>,
    queue: Vec<usize>,
    stack: Vec<usize>,
    /// Set when the last matching was computed on successor bitsets.
    dense: bool,
    words: usize,
    /// Row `i` holds the successors of `i`.
    succ: Vec<u64>,
    /// In-copies still untouched in the current search.
    open: Vec<u64>,
    /// In-copy taken by each stack frame of the dense search.
    chosen: Vec<usize>,
    /// Untried successors of each stack frame, `words` per frame.
    frames: Vec<u64>,
}

/// Bitsets pay off once an average row has more edges than words, as long
/// as the cached matrix stays small.
fn prefers_bitsets(n: usize, m: usize) -> bool {
    n <= DENSE_NODE_LIMIT && n.div_ceil(64) * n <= 2 * m
}

/// Largest graph for which the adjacency bit matrix is used (2 MiB).
const DENSE_NODE_LIMIT: usize = 4096;

fn bits(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                w * 64 + b
            })
        })
    })
}

impl ChainMatcher {
    /// Size of a maximum matching, i.e. the max-flow value `F`.
    pub fn max_matching(&mut self, g: &Graph, rep: &LinearRepresentation) -> usize {
        let n = g.node_count();
        assert_eq!(rep.len(), n, "representation/graph size mismatch");
        let pos = rep.positions();
        self.mate_out.clear();
        self.mate_out.resize(n, NIL);
        self.mate_in.clear();
        self.mate_in.resize(n, NIL);
        self.layer.resize(n, UNSEEN);
        self.cursor.resize(n, 0);
        self.dense = prefers_bitsets(n, g.edge_count());
        if self.dense {
            return self.dense_matching(g, rep);
        }

        // greedy start: walk the permutation backwards and link each node to
        // its earliest free successor
        let mut size = 0;
        for &i in rep.sequence().iter().rev() {
            let best = g
                .neighbors(i)
                .iter()
                .copied()
                .filter(|&j| pos[j] > pos[i] && self.mate_in[j] == NIL)
                .min_by_key(|&j| pos[j]);
            if let Some(j) = best {
                self.mate_out[i] = j;
                self.mate_in[j] = i;
                size += 1;
            }
        }

        while self.build_layers(g, pos) {
            for i in 0..n {
                self.cursor[i] = 0;
            }
            for i in 0..n {
                if self.mate_out[i] == NIL && self.augment(g, pos, i) {
                    size += 1;
                }
            }
        }
        size
    }

    /// Breadth-first layering from the free out-copies. Returns whether a
    /// free in-copy is reachable.
    fn build_layers(&mut self, g: &Graph, pos: &[usize]) -> bool {
        let n = g.node_count();
        self.queue.clear();
        for i in 0..n {
            if self.mate_out[i] == NIL {
                self.layer[i] = 0;
                self.queue.push(i);
            } else {
                self.layer[i] = UNSEEN;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < self.queue.len() {
            let i = self.queue[head];
            head += 1;
            for &j in g.neighbors(i) {
                if pos[j] <= pos[i] {
                    continue;
                }
                match self.mate_in[j] {
                    NIL => found = true,
                    k if self.layer[k] == UNSEEN => {
                        self.layer[k] = self.layer[i] + 1;
                        self.queue.push(k);
                    }
                    _ => {}
                }
            }
        }
        found
    }

    /// Iterative search for an augmenting path along the layering, starting
    /// at the free out-copy `root`.
    fn augment(&mut self, g: &Graph, pos: &[usize], root: usize) -> bool {
        self.stack.clear();
        self.stack.push(root);
        while let Some(&i) = self.stack.last() {
            let adj = g.neighbors(i);
            let mut advanced = false;
            while self.cursor[i] < adj.len() {
                let j = adj[self.cursor[i]];
                if pos[j] <= pos[i] {
                    self.cursor[i] += 1;
                    continue;
                }
                let k = self.mate_in[j];
                if k == NIL {
                    // flip the path: every out-copy on the stack takes the
                    // in-copy its cursor points at
                    for &u in &self.stack {
                        let v = g.neighbors(u)[self.cursor[u]];
                        self.mate_out[u] = v;
                        self.mate_in[v] = u;
                    }
                    return true;
                }
                if self.layer[k] == self.layer[i] + 1 {
                    self.stack.push(k);
                    advanced = true;
                    break;
                }
                self.cursor[i] += 1;
            }
            if !advanced {
                self.layer[i] = UNSEEN;
                self.stack.pop();
                if let Some(&parent) = self.stack.last() {
                    self.cursor[parent] += 1;
                }
            }
        }
        false
    }

    fn dense_matching(&mut self, g: &Graph, rep: &LinearRepresentation) -> usize {
        let n = g.node_count();
        let words = n.div_ceil(64);
        self.words = words;
        self.succ.clear();
        self.succ.resize(n * words, 0);
        self.open.clear();
        self.open.resize(words, 0);
        // walking the permutation backwards, `open` holds the nodes placed
        // after the current one; it doubles as the free in-copies for the
        // greedy start
        let adjacency = g.adjacency_rows();
        let mut size = 0;
        let mut later = vec![0u64; words];
        for &i in rep.sequence().iter().rev() {
            let row = &mut self.succ[i * words..(i + 1) * words];
            for (w, word) in row.iter_mut().enumerate() {
                *word = adjacency[i * words + w] & later[w];
            }
            if let Some(j) = first_common(row, &self.open) {
                self.open[j / 64] &= !(1 << (j % 64));
                self.mate_out[i] = j;
                self.mate_in[j] = i;
                size += 1;
            }
            later[i / 64] |= 1 << (i % 64);
            self.open[i / 64] |= 1 << (i % 64);
        }

        while self.dense_layers(n) {
            self.fill_open(n);
            for i in 0..n {
                if self.mate_out[i] == NIL && self.dense_augment(i) {
                    size += 1;
                }
            }
        }
        size
    }

    fn fill_open(&mut self, n: usize) {
        self.open.fill(!0);
        if !n.is_multiple_of(64) {
            self.open[self.words - 1] = (1 << (n % 64)) - 1;
        }
    }

    fn dense_layers(&mut self, n: usize) -> bool {
        let words = self.words;
        self.fill_open(n);
        self.queue.clear();
        for i in 0..n {
            if self.mate_out[i] == NIL {
                self.layer[i] = 0;
                self.queue.push(i);
            } else {
                self.layer[i] = UNSEEN;
            }
        }
        let mut found = false;
        let mut head = 0;
        while head < self.queue.len() {
            let i = self.queue[head];
            head += 1;
            let row = &self.succ[i * words..(i + 1) * words];
            for (w, &succ) in row.iter().enumerate() {
                let mut hits = succ & self.open[w];
                self.open[w] &= !hits;
                while hits != 0 {
                    let j = w * 64 + hits.trailing_zeros() as usize;
                    hits &= hits - 1;
                    match self.mate_in[j] {
                        NIL => found = true,
                        k => {
                            self.layer[k] = self.layer[i] + 1;
                            self.queue.push(k);
                        }
                    }
                }
            }
        }
        found
    }

    /// Depth-first search along the layering. An in-copy is closed once a
    /// frame descends through it: either the descent fails and its mate is
    /// dead for the phase, or it ends up on the augmenting path. Candidates
    /// skipped for a layer mismatch stay open for other frames.
    fn dense_augment(&mut self, root: usize) -> bool {
        let words = self.words;
        self.stack.clear();
        self.chosen.clear();
        self.frames.clear();
        self.push_frame(root);
        while let Some(&i) = self.stack.last() {
            let depth = self.stack.len() - 1;
            let frame = &mut self.frames[depth * words..(depth + 1) * words];
            let mut next = None;
            while let Some(j) = first_common(frame, &self.open) {
                frame[j / 64] &= !(1 << (j % 64));
                let k = self.mate_in[j];
                if k == NIL || self.layer[k] == self.layer[i] + 1 {
                    next = Some((j, k));
                    break;
                }
            }
            let Some((j, k)) = next else {
                self.layer[i] = UNSEEN;
                self.stack.pop();
                self.chosen.pop();
                self.frames.truncate(depth * words);
                continue;
            };
            self.open[j / 64] &= !(1 << (j % 64));
            self.chosen.push(j);
            if k == NIL {
                for (&u, &v) in self.stack.iter().zip(&self.chosen) {
                    self.mate_out[u] = v;
                    self.mate_in[v] = u;
                }
                return true;
            }
            self.push_frame(k);
        }
        false
    }

    fn push_frame(&mut self, i: usize) {
        let words = self.words;
        self.stack.push(i);
        self.frames
            .extend_from_slice(&self.succ[i * words..(i + 1) * words]);
    }

    /// Residual reachability from `s` for the flow given by the current
    /// matching, indexed like the split network.
    pub fn residual_reachable(&mut self, g: &Graph, rep: &LinearRepresentation) -> Vec<bool> {
        let n = g.node_count();
        let pos = rep.positions();
        let mut seen = vec![false; 2 * n + 2];
        if self.dense {
            return self.dense_reachable(n, seen);
        }
        seen[net_index(n, NetNode::Source)] = true;
        self.queue.clear();
        for i in 0..n {
            if self.mate_out[i] == NIL {
                seen[net_index(n, NetNode::Out(i))] = true;
                self.queue.push(i);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let i = self.queue[head];
            head += 1;
            for &j in g.neighbors(i) {
                if pos[j] <= pos[i] || seen[net_index(n, NetNode::In(j))] {
                    continue;
                }
                seen[net_index(n, NetNode::In(j))] = true;
                // the only residual arc out of a matched in-copy leads back
                // to its partner; a free one would reach t
                let k = self.mate_in[j];
                debug_assert_ne!(k, NIL, "augmenting path left in a maximum matching");
                if k != NIL && !seen[net_index(n, NetNode::Out(k))] {
                    seen[net_index(n, NetNode::Out(k))] = true;
                    self.queue.push(k);
                }
            }
        }
        seen
    }

    fn dense_reachable(&mut self, n: usize, mut seen: Vec<bool>) -> Vec<bool> {
        let words = self.words;
        seen[net_index(n, NetNode::Source)] = true;
        self.fill_open(n);
        self.queue.clear();
        for i in 0..n {
            if self.mate_out[i] == NIL {
                seen[net_index(n, NetNode::Out(i))] = true;
                self.queue.push(i);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let i = self.queue[head];
            head += 1;
            let row = &self.succ[i * words..(i + 1) * words];
            for (w, &succ) in row.iter().enumerate() {
                let hits = succ & self.open[w];
                self.open[w] &= !hits;
                for j in bits(&[hits]) {
                    let j = w * 64 + j;
                    seen[net_index(n, NetNode::In(j))] = true;
                    let k = self.mate_in[j];
                    debug_assert_ne!(k, NIL, "augmenting path left in a maximum matching");
                    if k != NIL && !seen[net_index(n, NetNode::Out(k))] {
                        seen[net_index(n, NetNode::Out(k))] = true;
                        self.queue.push(k);
                    }
                }
            }
        }
        seen
    }
}

fn first_common(a: &[u64], b: &[u64]) -> Option<usize> {
    a.iter()
        .zip(b)
        .position(|(x, y)| x & y != 0)
        .map(|w| w * 64 + (a[w] & b[w]).trailing_zeros() as usize)
}

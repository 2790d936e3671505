//! Fitness of an orientation through max flow.
//!
//! For a graph with `n` nodes oriented acyclically, the split network has a
//! source `s`, a sink `t`, an out-copy `i'` and an in-copy `i''` of every
//! node `i`, unit arcs `s -> i'` and `i'' -> t`, and an uncapacitated arc
//! `i' -> j''` for every edge directed `i -> j`. If `F` is the max-flow value
//! then `n - F` is the number of chains in a minimum chain decomposition of
//! the orientation, which is the fitness. The residual graph of a maximum
//! flow yields a node cover of the graph and, by complement, an independent
//! set of at least `n - F` nodes.
//!
//! Two exact max-flow routes are provided: highest-label push-relabel on the
//! explicit network ([`PushRelabel`]), and Hopcroft-Karp matching between
//! out- and in-copies ([`ChainMatcher`]), which the network reduces to since
//! only the unit arcs can be saturated.

mod matching;
mod push_relabel;

pub use matching::ChainMatcher;
pub use push_relabel::PushRelabel;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::orientation::{LinearRepresentation, Orientation};

const SOURCE: usize = 0;
const SINK: usize = 1;

/// A node of the split network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum NetNode {
    Source,
    Sink,
    /// Out-copy `i'` of graph node `i`.
    Out(usize),
    /// In-copy `i''` of graph node `i`.
    In(usize),
}

/// The split network `D(G, omega)` in residual (paired-arc) form.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    graph_nodes: usize,
    /// CSR offsets into `head`, one slot per network node plus one.
    first: Vec<u32>,
    head: Vec<u32>,
    rev: Vec<u32>,
    capacity: Vec<u32>,
    middle_arcs: usize,
}

impl FlowNetwork {
    /// Network for `g` oriented by `o`.
    pub fn new(g: &Graph, o: &Orientation) -> Result<Self, NetworkError> {
        check_orientation(g, o)?;
        let mut net = FlowNetwork::default();
        net.rebuild(g.node_count(), o.arcs().iter().copied());
        Ok(net)
    }

    /// Network for the orientation induced by `rep`, without materializing
    /// the orientation.
    pub fn from_representation(g: &Graph, rep: &LinearRepresentation) -> Self {
        let mut net = FlowNetwork::default();
        net.rebuild_from_representation(g, rep);
        net
    }

    pub(crate) fn rebuild_from_representation(&mut self, g: &Graph, rep: &LinearRepresentation) {
        assert_eq!(
            rep.len(),
            g.node_count(),
            "representation/graph size mismatch"
        );
        self.rebuild(
            g.node_count(),
            g.edges()
                .iter()
                .map(|&(u, v)| if rep.precedes(u, v) { (u, v) } else { (v, u) }),
        );
    }

    fn rebuild<I>(&mut self, n: usize, arcs: I)
    where
        I: Iterator<Item = (usize, usize)> + Clone,
    {
        let nodes = 2 * n + 2;
        let infinite = n as u32 + 1;
        self.graph_nodes = n;
        self.middle_arcs = 0;

        // degree counting pass
        self.first.clear();
        self.first.resize(nodes + 1, 0);
        let deg = &mut self.first;
        deg[SOURCE + 1] = n as u32;
        deg[SINK + 1] = n as u32;
        for i in 0..n {
            deg[2 + i + 1] += 1;
            deg[2 + n + i + 1] += 1;
        }
        for (tail, head) in arcs.clone() {
            deg[2 + tail + 1] += 1;
            deg[2 + n + head + 1] += 1;
            self.middle_arcs += 1;
        }
        for v in 0..nodes {
            deg[v + 1] += deg[v];
        }
        let total = self.first[nodes] as usize;
        self.head.clear();
        self.head.resize(total, 0);
        self.rev.clear();
        self.rev.resize(total, 0);
        self.capacity.clear();
        self.capacity.resize(total, 0);

        let mut fill: Vec<u32> = self.first[..nodes].to_vec();
        let mut add = |net: &mut FlowNetwork, from: usize, to: usize, cap: u32| {
            let a = fill[from];
            let b = fill[to];
            fill[from] += 1;
            fill[to] += 1;
            net.head[a as usize] = to as u32;
            net.rev[a as usize] = b;
            net.capacity[a as usize] = cap;
            net.head[b as usize] = from as u32;
            net.rev[b as usize] = a;
        };
        for i in 0..n {
            add(self, SOURCE, 2 + i, 1);
        }
        for (tail, head) in arcs {
            add(self, 2 + tail, 2 + n + head, infinite);
        }
        for i in 0..n {
            add(self, 2 + n + i, SINK, 1);
        }
    }

    /// Number of nodes of the underlying graph.
    pub fn graph_nodes(&self) -> usize {
        self.graph_nodes
    }

    /// `2n + 2`.
    pub fn node_count(&self) -> usize {
        2 * self.graph_nodes + 2
    }

    /// `2n + m`.
    pub fn arc_count(&self) -> usize {
        2 * self.graph_nodes + self.middle_arcs
    }

    /// Capacity used for the middle arcs; exceeds any feasible flow value.
    pub fn infinite_capacity(&self) -> u32 {
        self.graph_nodes as u32 + 1
    }

    pub fn index(&self, node: NetNode) -> usize {
        net_index(self.graph_nodes, node)
    }

    pub fn node(&self, index: usize) -> NetNode {
        net_node(self.graph_nodes, index)
    }

    /// Forward arcs `(tail, head, capacity)` of the network.
    pub fn arcs(&self) -> impl Iterator<Item = (NetNode, NetNode, u32)> + '_ {
        (0..self.node_count()).flat_map(move |v| {
            let range = self.first[v] as usize..self.first[v + 1] as usize;
            range.filter(move |&a| self.capacity[a] > 0).map(move |a| {
                (
                    self.node(v),
                    self.node(self.head[a] as usize),
                    self.capacity[a],
                )
            })
        })
    }

    pub(crate) fn arc_range(&self, v: usize) -> std::ops::Range<usize> {
        self.first[v] as usize..self.first[v + 1] as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkError {
    #[error("orientation has {found} arcs, graph has {expected} edges")]
    ArcCountMismatch { expected: usize, found: usize },
    #[error("arc ({0}, {1}) is not an edge of the graph")]
    ArcNotInGraph(usize, usize),
}

fn check_orientation(g: &Graph, o: &Orientation) -> Result<(), NetworkError> {
    if o.arcs().len() != g.edge_count() {
        return Err(NetworkError::ArcCountMismatch {
            expected: g.edge_count(),
            found: o.arcs().len(),
        });
    }
    for (&(t, h), &edge) in o.arcs().iter().zip(g.edges()) {
        if (t.min(h), t.max(h)) != edge {
            return Err(NetworkError::ArcNotInGraph(t, h));
        }
    }
    Ok(())
}

/// Value of a maximum flow and the source side of the minimal minimum cut.
#[derive(Debug, Clone)]
pub struct MaxFlow {
    pub value: usize,
    /// Indexed by network node; true when reachable from `s` in the
    /// residual graph of the final flow.
    pub reachable: Vec<bool>,
}

impl MaxFlow {
    pub fn contains(&self, net: &FlowNetwork, node: NetNode) -> bool {
        self.reachable[net.index(node)]
    }
}

/// Max-flow value of `net` with the source side of its minimal min cut,
/// computed by push-relabel.
pub fn max_flow_value(net: &FlowNetwork) -> MaxFlow {
    PushRelabel::default().max_flow(net)
}

/// Index of `node` in a split network built over `n` graph nodes.
pub(crate) fn net_index(n: usize, node: NetNode) -> usize {
    match node {
        NetNode::Source => SOURCE,
        NetNode::Sink => SINK,
        NetNode::Out(i) => 2 + i,
        NetNode::In(i) => 2 + n + i,
    }
}

fn net_node(n: usize, index: usize) -> NetNode {
    match index {
        SOURCE => NetNode::Source,
        SINK => NetNode::Sink,
        i if i < 2 + n => NetNode::Out(i - 2),
        i => NetNode::In(i - 2 - n),
    }
}

/// Outcome of evaluating one orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessResult {
    /// Max-flow value `F`.
    pub flow_value: usize,
    /// `n - F`, the size of a minimum chain decomposition.
    pub fitness: usize,
    /// Network nodes reachable from `s` in the final residual graph.
    pub reachable: Vec<NetNode>,
    /// Sorted, 0-based.
    pub independent_set: Vec<usize>,
    /// Sorted, 0-based; the complement of `independent_set`.
    pub cover: Vec<usize>,
}

impl FitnessResult {
    fn from_cut(n: usize, flow_value: usize, reachable: &[bool]) -> Self {
        let (independent_set, cover) = split_by_cut(n, reachable);
        FitnessResult {
            flow_value,
            fitness: n - flow_value,
            reachable: reachable
                .iter()
                .enumerate()
                .filter(|(_, &r)| r)
                .map(|(idx, _)| net_node(n, idx))
                .collect(),
            independent_set,
            cover,
        }
    }
}

/// Splits the nodes of `g` into independent set and cover from the residual
/// reachability of a maximum flow: `i` is covered when `i'` is cut off from
/// `s` or `i''` is still reachable from it.
pub fn extract_independent_set(
    g: &Graph,
    net: &FlowNetwork,
    reachable: &[bool],
) -> (Vec<usize>, Vec<usize>) {
    debug_assert_eq!(net.graph_nodes(), g.node_count());
    split_by_cut(g.node_count(), reachable)
}

fn split_by_cut(n: usize, reachable: &[bool]) -> (Vec<usize>, Vec<usize>) {
    let mut independent = Vec::new();
    let mut cover = Vec::new();
    for i in 0..n {
        let out_cut = !reachable[net_index(n, NetNode::Out(i))];
        let in_cut = reachable[net_index(n, NetNode::In(i))];
        if out_cut || in_cut {
            cover.push(i);
        } else {
            independent.push(i);
        }
    }
    (independent, cover)
}

/// Fitness of `g` oriented by `o`, with the witnessing independent set.
pub fn fitness(g: &Graph, o: &Orientation) -> Result<FitnessResult, NetworkError> {
    let net = FlowNetwork::new(g, o)?;
    let flow = max_flow_value(&net);
    Ok(FitnessResult::from_cut(
        g.node_count(),
        flow.value,
        &flow.reachable,
    ))
}

/// Max-flow algorithm used by an [`Evaluator`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlowAlgorithm {
    /// Hopcroft-Karp on the bipartite graph between out- and in-copies,
    /// read directly off the graph and the permutation.
    #[default]
    Matching,
    /// Push-relabel on an explicitly built network.
    PushRelabel,
}

/// Reusable buffers for evaluating many representations of one graph.
///
/// Both algorithms give the same flow value and, since the set of nodes
/// reachable from `s` is the same for every maximum flow, the same cut.
#[derive(Debug, Default, Clone)]
pub struct Evaluator {
    algorithm: FlowAlgorithm,
    network: FlowNetwork,
    push_relabel: PushRelabel,
    matcher: ChainMatcher,
}

impl Evaluator {
    pub fn new(algorithm: FlowAlgorithm) -> Self {
        Evaluator {
            algorithm,
            ..Default::default()
        }
    }

    pub fn algorithm(&self) -> FlowAlgorithm {
        self.algorithm
    }

    pub fn evaluate(&mut self, g: &Graph, rep: &LinearRepresentation) -> FitnessResult {
        let n = g.node_count();
        match self.algorithm {
            FlowAlgorithm::Matching => {
                let value = self.matcher.max_matching(g, rep);
                let reachable = self.matcher.residual_reachable(g, rep);
                FitnessResult::from_cut(n, value, &reachable)
            }
            FlowAlgorithm::PushRelabel => {
                self.network.rebuild_from_representation(g, rep);
                let flow = self.push_relabel.max_flow(&self.network);
                FitnessResult::from_cut(n, flow.value, &flow.reachable)
            }
        }
    }

    /// Fitness only, skipping the cut.
    pub fn fitness_value(&mut self, g: &Graph, rep: &LinearRepresentation) -> usize {
        let flow = match self.algorithm {
            FlowAlgorithm::Matching => self.matcher.max_matching(g, rep),
            FlowAlgorithm::PushRelabel => {
                self.network.rebuild_from_representation(g, rep);
                self.push_relabel.preflow(&self.network)
            }
        };
        g.node_count() - flow
    }
}

/// Reason a node set fails to be independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SetViolation {
    /// 0-based endpoints of an edge inside the set.
    #[error("nodes {} and {} are adjacent", .0 + 1, .1 + 1)]
    Adjacent(usize, usize),
    #[error("node {} is not in the graph", .0 + 1)]
    OutOfRange(usize),
}

/// Checks that no edge of `g` joins two members of `set` (0-based ids).
pub fn verify_independent_set(g: &Graph, set: &[usize]) -> Result<(), SetViolation> {
    let mut member = vec![false; g.node_count()];
    for &v in set {
        if v >= g.node_count() {
            return Err(SetViolation::OutOfRange(v));
        }
        member[v] = true;
    }
    match g.edges().iter().find(|&&(u, v)| member[u] && member[v]) {
        Some(&(u, v)) => Err(SetViolation::Adjacent(u, v)),
        None => Ok(()),
    }
}

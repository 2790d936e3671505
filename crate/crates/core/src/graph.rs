//! Undirected simple graphs and the DIMACS ASCII format.
//!
//! Nodes are numbered `0..n` inside the crate. DIMACS files and every
//! user-facing report use `1..=n`; the conversion happens only at the
//! parser, the writer and the CLI boundary.

use std::fmt;
use std::io::BufRead;
use std::sync::OnceLock;

use thiserror::Error;

/// An undirected graph without self-loops or parallel edges.
#[derive(Clone, Debug)]
pub struct Graph {
    node_count: usize,
    /// Sorted, each pair stored once as `(low, high)`.
    edges: Vec<(usize, usize)>,
    /// Sorted neighbor lists.
    adjacency: Vec<Vec<usize>>,
    /// Adjacency bit matrix, built on first use.
    rows: OnceLock<Vec<u64>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count && self.edges == other.edges
    }
}

impl Eq for Graph {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on node {}", .0 + 1)]
    SelfLoop(usize),
    #[error("edge {{{}, {}}} has an endpoint outside 1..={n}", .u + 1, .v + 1)]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
}

impl Graph {
    /// Graph with `node_count` nodes and no edges.
    pub fn empty(node_count: usize) -> Self {
        Graph {
            node_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); node_count],
            rows: OnceLock::new(),
        }
    }

    /// Builds a graph from 0-based endpoint pairs. Repeated pairs, in either
    /// order, collapse to a single edge.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(GraphError::EndpointOutOfRange {
                    u,
                    v,
                    n: node_count,
                });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            pairs.push((u.min(v), u.max(v)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        Ok(Self::from_sorted_pairs(node_count, pairs))
    }

    fn from_sorted_pairs(node_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            node_count,
            edges,
            adjacency,
            rows: OnceLock::new(),
        }
    }

    /// Assembles a graph from raw parts without checking anything.
    ///
    /// Meant for tooling that needs to inspect malformed data; run
    /// [`Graph::validate`] before handing the result to the solver.
    pub fn from_raw_parts(
        node_count: usize,
        edges: Vec<(usize, usize)>,
        adjacency: Vec<Vec<usize>>,
    ) -> Self {
        Graph {
            node_count,
            edges,
            adjacency,
            rows: OnceLock::new(),
        }
    }

    /// Complete graph on `n` nodes.
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Self::from_sorted_pairs(n, edges)
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_sorted_pairs(n, edges)
    }

    /// Cycle on `n >= 3` nodes.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a simple cycle needs at least three nodes");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid cycle")
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Words per row of [`Graph::adjacency_rows`].
    pub fn row_words(&self) -> usize {
        self.node_count.div_ceil(64)
    }

    /// Adjacency matrix as bitset rows of [`Graph::row_words`] words each;
    /// bit `v` of row `u` is set iff `{u, v}` is an edge. Built once and
    /// cached, `n^2 / 8` bytes.
    pub fn adjacency_rows(&self) -> &[u64] {
        self.rows.get_or_init(|| {
            let words = self.row_words();
            let mut rows = vec![0u64; self.node_count * words];
            for (u, list) in self.adjacency.iter().enumerate() {
                for &v in list {
                    if v < self.node_count {
                        rows[u * words + v / 64] |= 1 << (v % 64);
                    }
                }
            }
            rows
        })
    }

    /// Number of unordered node pairs, `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.node_count * self.node_count.saturating_sub(1) / 2
    }

    /// Checks every structural invariant and reports all violations found.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let n = self.node_count;
        let mut violations = Vec::new();

        if self.adjacency.len() != n {
            violations.push(Violation::AdjacencyLength {
                expected: n,
                found: self.adjacency.len(),
            });
        }
        let mut in_range = Vec::with_capacity(self.edges.len());
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                violations.push(Violation::EndpointOutOfRange { u, v });
            } else if u == v {
                violations.push(Violation::SelfLoop(u));
            } else {
                in_range.push((u.min(v), u.max(v)));
            }
        }
        let mut normalized = in_range.clone();
        normalized.sort_unstable();
        for w in normalized.windows(2) {
            if w[0] == w[1] {
                violations.push(Violation::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        normalized.dedup();

        for (u, list) in self.adjacency.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                violations.push(Violation::UnsortedAdjacency(u));
            }
            for &v in list {
                if v >= n || u >= n {
                    violations.push(Violation::EndpointOutOfRange { u, v });
                    continue;
                }
                if !self.adjacency[v].contains(&u) {
                    violations.push(Violation::AsymmetricAdjacency { u, v });
                }
                if normalized.binary_search(&(u.min(v), u.max(v))).is_err() {
                    violations.push(Violation::AdjacencyWithoutEdge { u, v });
                }
            }
        }
        for &(u, v) in &normalized {
            if u < self.adjacency.len()
                && v < self.adjacency.len()
                && !(self.adjacency[u].contains(&v) && self.adjacency[v].contains(&u))
            {
                violations.push(Violation::EdgeMissingFromAdjacency { u, v });
            }
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }
}

/// One broken invariant found by [`Graph::validate`]. Node ids are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop(usize),
    DuplicateEdge(usize, usize),
    EndpointOutOfRange { u: usize, v: usize },
    AsymmetricAdjacency { u: usize, v: usize },
    AdjacencyWithoutEdge { u: usize, v: usize },
    EdgeMissingFromAdjacency { u: usize, v: usize },
    UnsortedAdjacency(usize),
    AdjacencyLength { expected: usize, found: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::SelfLoop(u) => write!(f, "self-loop on node {u}"),
            Violation::DuplicateEdge(u, v) => write!(f, "duplicate edge {{{u}, {v}}}"),
            Violation::EndpointOutOfRange { u, v } => {
                write!(f, "endpoint out of range in {{{u}, {v}}}")
            }
            Violation::AsymmetricAdjacency { u, v } => {
                write!(
                    f,
                    "asymmetric adjacency: {v} listed for {u} but not {u} for {v}"
                )
            }
            Violation::AdjacencyWithoutEdge { u, v } => {
                write!(f, "adjacency {u} -> {v} has no matching edge")
            }
            Violation::EdgeMissingFromAdjacency { u, v } => {
                write!(f, "edge {{{u}, {v}}} missing from adjacency")
            }
            Violation::UnsortedAdjacency(u) => write!(f, "adjacency of node {u} is not sorted"),
            Violation::AdjacencyLength { expected, found } => {
                write!(f, "adjacency has {found} lists, expected {expected}")
            }
        }
    }
}

/// Graph on the same nodes whose edges are exactly the non-edges of `g`.
pub fn complement(g: &Graph) -> Graph {
    let n = g.node_count();
    let mut edges = Vec::with_capacity(g.pair_count() - g.edge_count());
    for u in 0..n {
        let mut adj = g.neighbors(u).iter().copied().peekable();
        for v in u + 1..n {
            while adj.next_if(|&w| w < v).is_some() {}
            if adj.peek() == Some(&v) {
                continue;
            }
            edges.push((u, v));
        }
    }
    Graph::from_sorted_pairs(n, edges)
}

/// Parse failure in a DIMACS file. `line` is 1-based.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct DimacsError {
    pub line: usize,
    pub kind: DimacsErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsErrorKind {
    #[error("missing problem line")]
    MissingProblemLine,
    #[error("duplicate problem line")]
    DuplicateProblemLine,
    #[error("edge line before the problem line")]
    EdgeBeforeProblemLine,
    #[error("malformed problem line, expected `p edge <n> <m>`")]
    MalformedProblemLine,
    #[error("malformed edge line, expected `e <i> <j>`")]
    MalformedEdgeLine,
    #[error("not a number: {0:?}")]
    NotANumber(String),
    #[error("endpoint {endpoint} outside 1..={n}")]
    EndpointOutOfRange { endpoint: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("unknown line type {0:?}")]
    UnknownLine(String),
    #[error("read error: {0}")]
    Io(String),
}

/// A parsed DIMACS file together with the warnings the parser tolerated.
#[derive(Debug, Clone)]
pub struct DimacsGraph {
    pub graph: Graph,
    /// Edge count declared on the `p` line.
    pub declared_edges: usize,
    /// `e` lines that repeated an edge already seen (in either direction).
    pub duplicate_edge_lines: usize,
}

impl DimacsGraph {
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.duplicate_edge_lines > 0 {
            out.push(format!(
                "{} duplicate edge line(s) collapsed",
                self.duplicate_edge_lines
            ));
        }
        if self.declared_edges != self.graph.edge_count() {
            out.push(format!(
                "problem line declares {} edges, parsed {}",
                self.declared_edges,
                self.graph.edge_count()
            ));
        }
        out
    }
}

/// Parses DIMACS ASCII text (`c`, `p edge|col n m`, `e i j`).
pub fn parse_dimacs(text: &str) -> Result<DimacsGraph, DimacsError> {
    read_dimacs(text.as_bytes())
}

/// Streaming variant of [`parse_dimacs`].
pub fn read_dimacs<R: BufRead>(reader: R) -> Result<DimacsGraph, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let err = |kind| DimacsError {
            line: line_no,
            kind,
        };
        let line = line.map_err(|e| err(DimacsErrorKind::Io(e.to_string())))?;
        let mut tokens = line.split_ascii_whitespace();
        let Some(tag) = tokens.next() else { continue };
        match tag {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err(DimacsErrorKind::DuplicateProblemLine));
                }
                let format = tokens.next();
                if !matches!(format, Some("edge") | Some("col")) {
                    return Err(err(DimacsErrorKind::MalformedProblemLine));
                }
                let (Some(n), Some(m), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                    return Err(err(DimacsErrorKind::MalformedProblemLine));
                };
                let n = parse_number(n).map_err(err)?;
                let m = parse_number(m).map_err(err)?;
                header = Some((n, m));
                pairs.reserve(m);
            }
            "e" => {
                let Some((n, _)) = header else {
                    return Err(err(DimacsErrorKind::EdgeBeforeProblemLine));
                };
                let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                    return Err(err(DimacsErrorKind::MalformedEdgeLine));
                };
                let a = parse_number(a).map_err(err)?;
                let b = parse_number(b).map_err(err)?;
                for endpoint in [a, b] {
                    if endpoint == 0 || endpoint > n {
                        return Err(err(DimacsErrorKind::EndpointOutOfRange { endpoint, n }));
                    }
                }
                if a == b {
                    return Err(err(DimacsErrorKind::SelfLoop(a)));
                }
                pairs.push(((a - 1).min(b - 1), (a - 1).max(b - 1)));
            }
            other => return Err(err(DimacsErrorKind::UnknownLine(other.to_string()))),
        }
    }

    let Some((n, declared_edges)) = header else {
        return Err(DimacsError {
            line: last_line,
            kind: DimacsErrorKind::MissingProblemLine,
        });
    };
    let lines = pairs.len();
    pairs.sort_unstable();
    pairs.dedup();
    let duplicate_edge_lines = lines - pairs.len();
    Ok(DimacsGraph {
        graph: Graph::from_sorted_pairs(n, pairs),
        declared_edges,
        duplicate_edge_lines,
    })
}

fn parse_number(token: &str) -> Result<usize, DimacsErrorKind> {
    token
        .parse()
        .map_err(|_| DimacsErrorKind::NotANumber(token.to_string()))
}

/// Writes `g` as DIMACS ASCII with sorted 1-based `e` lines.
pub fn write_dimacs(g: &Graph, comments: &[&str]) -> String {
    use std::fmt::Write;

    let mut out = String::with_capacity(16 * (g.edge_count() + 2));
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    let _ = writeln!(out, "p edge {} {}", g.node_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", u + 1, v + 1);
    }
    out
}

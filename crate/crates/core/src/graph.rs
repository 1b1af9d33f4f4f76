//! Undirected weighted graphs and the edge-list text format.
//!
//! Edges are stored once with `u < v`; adjacency lists are materialized at
//! construction and sorted by neighbor ID so every iteration over a node's
//! incident edges is deterministic.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node identifier. Nodes of an `n`-node graph are `0..n`.
pub type NodeId = usize;

/// Edge weight or path length, one machine word.
pub type Dist = u64;

/// Unreachable / "no such node" distance.
pub const INF: Dist = Dist::MAX;

/// Exponent `c` of the polynomial weight cap `w <= max(n, WEIGHT_CAP_FLOOR)^c`.
pub const WEIGHT_CAP_EXPONENT: u32 = 3;
/// Floor for the weight-cap base so that tiny graphs can still carry weights
/// in the usual test ranges.
pub const WEIGHT_CAP_FLOOR: u64 = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: negative weight")]
    NegativeWeight { line: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("line {line}: self-loop on node {node}")]
    SelfLoop { line: usize, node: u64 },
    #[error("weight {weight} exceeds the polynomial cap {cap}")]
    WeightTooLarge { weight: u64, cap: u64 },
    #[error("disconnected graph")]
    Disconnected,
    #[error("empty graph")]
    Empty,
    #[error("edge endpoint {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("could not generate connected graph within retry budget")]
    RetryBudgetExhausted,
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// A canonical undirected edge, `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub w: Dist,
}

/// One entry of a node's adjacency list.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Neighbor {
    pub node: NodeId,
    pub weight: Dist,
}

/// Connected, simple, undirected graph with nonnegative integer weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Neighbor>>,
}

pub fn weight_cap(n: usize) -> u64 {
    (n as u64).max(WEIGHT_CAP_FLOOR).saturating_pow(WEIGHT_CAP_EXPONENT)
}

impl WeightedGraph {
    /// Builds and validates a graph on nodes `0..n`.
    ///
    /// Edge endpoints may be given in either order.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (NodeId, NodeId, Dist)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let cap = weight_cap(n);
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for (line, (a, b, w)) in edges.into_iter().enumerate() {
            let line = line + 1;
            if a >= n {
                return Err(GraphError::NodeOutOfRange(a));
            }
            if b >= n {
                return Err(GraphError::NodeOutOfRange(b));
            }
            if a == b {
                return Err(GraphError::SelfLoop { line, node: a as u64 });
            }
            if w > cap {
                return Err(GraphError::WeightTooLarge { weight: w, cap });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge { line, u: u as u64, v: v as u64 });
            }
            list.push(Edge { u, v, w });
        }
        Self::from_checked(n, list)
    }

    fn from_checked(n: usize, mut edges: Vec<Edge>) -> Result<Self, GraphError> {
        edges.sort_unstable();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(Neighbor { node: e.v, weight: e.w });
            adj[e.v].push(Neighbor { node: e.u, weight: e.w });
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|nb| nb.node);
        }
        let g = WeightedGraph { n, edges, adj };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edges sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Incident edges of `u`, sorted by neighbor ID.
    pub fn neighbors(&self, u: NodeId) -> &[Neighbor] {
        &self.adj[u]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u].len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.n
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<Dist> {
        self.adj[u]
            .binary_search_by_key(&v, |nb| nb.node)
            .ok()
            .map(|i| self.adj[u][i].weight)
    }

    pub fn max_weight(&self) -> Dist {
        self.edges.iter().map(|e| e.w).max().unwrap_or(0)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for nb in &self.adj[u] {
                if !seen[nb.node] {
                    seen[nb.node] = true;
                    count += 1;
                    queue.push_back(nb.node);
                }
            }
        }
        count == self.n
    }

    /// Relabels nodes in breadth-first discovery order from node 0, visiting
    /// neighbors in ascending ID order.
    ///
    /// Canonical graphs are exactly the fixed points of
    /// `load_edge_list(to_edge_list(g))`.
    pub fn canonicalize(&self) -> WeightedGraph {
        let mut label = vec![usize::MAX; self.n];
        let mut queue = VecDeque::from([0]);
        label[0] = 0;
        let mut next = 1;
        while let Some(u) = queue.pop_front() {
            for nb in &self.adj[u] {
                if label[nb.node] == usize::MAX {
                    label[nb.node] = next;
                    next += 1;
                    queue.push_back(nb.node);
                }
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|e| {
                let (a, b) = (label[e.u], label[e.v]);
                Edge { u: a.min(b), v: a.max(b), w: e.w }
            })
            .collect();
        Self::from_checked(self.n, edges).expect("relabeling preserves validity")
    }

    /// Serializes to the edge-list format, one `u v w` line per canonical
    /// edge in `(u, v)` order.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edges.len() * 12);
        for e in &self.edges {
            let _ = writeln!(out, "{} {} {}", e.u, e.v, e.w);
        }
        out
    }
}

/// Parses the edge-list format.
///
/// One edge per line as `u v w` (decimal, whitespace-separated); blank lines
/// and lines starting with `#` are skipped. Node IDs are compacted to
/// `0..n` in order of first appearance.
pub fn load_edge_list(text: &str) -> Result<WeightedGraph, GraphError> {
    let mut ids: HashMap<u64, NodeId> = HashMap::new();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut max_w = 0u64;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected 3 fields `u v w`, found {}", fields.len()),
            });
        }
        let a = parse_node(fields[0], line)?;
        let b = parse_node(fields[1], line)?;
        let w = parse_weight(fields[2], line)?;
        if a == b {
            return Err(GraphError::SelfLoop { line, node: a });
        }
        let key = (a.min(b), a.max(b));
        if !seen.insert(key) {
            return Err(GraphError::DuplicateEdge { line, u: key.0, v: key.1 });
        }
        let next = ids.len();
        let ia = *ids.entry(a).or_insert(next);
        let next = ids.len();
        let ib = *ids.entry(b).or_insert(next);
        max_w = max_w.max(w);
        edges.push(Edge { u: ia.min(ib), v: ia.max(ib), w });
    }

    let n = ids.len();
    if n == 0 {
        return Err(GraphError::Empty);
    }
    let cap = weight_cap(n);
    if max_w > cap {
        return Err(GraphError::WeightTooLarge { weight: max_w, cap });
    }
    WeightedGraph::from_checked(n, edges)
}

fn parse_node(field: &str, line: usize) -> Result<u64, GraphError> {
    field.parse::<u64>().map_err(|e| GraphError::Parse {
        line,
        message: format!("bad node id `{field}`: {e}"),
    })
}

fn parse_weight(field: &str, line: usize) -> Result<u64, GraphError> {
    if let Some(rest) = field.strip_prefix('-') {
        if rest.parse::<u64>().is_ok() {
            return Err(GraphError::NegativeWeight { line });
        }
    }
    field.parse::<u64>().map_err(|e| GraphError::Parse {
        line,
        message: format!("bad weight `{field}`: {e}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_path() {
        let g = load_edge_list("0 1 1\n1 2 1").unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 1 }, Edge { u: 1, v: 2, w: 1 }]);
    }

    #[test]
    fn loads_triangle() {
        let g = load_edge_list("0 1 1\n1 2 1\n0 2 10").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.weight(0, 2), Some(10));
        assert_eq!(g.weight(2, 0), Some(10));
    }

    #[test]
    fn rejects_disconnected() {
        assert_eq!(load_edge_list("0 1 1\n2 3 1"), Err(GraphError::Disconnected));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(load_edge_list("0 1 -4"), Err(GraphError::NegativeWeight { line: 1 }));
        assert_eq!(
            load_edge_list("0 1 1\n1 0 2"),
            Err(GraphError::DuplicateEdge { line: 2, u: 0, v: 1 })
        );
        assert!(matches!(load_edge_list("# c\n0 1"), Err(GraphError::Parse { line: 2, .. })));
        assert!(matches!(load_edge_list("0 x 1"), Err(GraphError::Parse { line: 1, .. })));
        assert_eq!(load_edge_list("# only a comment\n"), Err(GraphError::Empty));
        assert!(matches!(load_edge_list("3 3 1"), Err(GraphError::SelfLoop { .. })));
        assert!(matches!(load_edge_list("0 1 99999999"), Err(GraphError::WeightTooLarge { .. })));
    }

    #[test]
    fn compacts_ids_by_first_appearance() {
        let g = load_edge_list("# header\n10 7 2\n7 42 3\n").unwrap();
        // 10 -> 0, 7 -> 1, 42 -> 2
        assert_eq!(g.edges(), &[Edge { u: 0, v: 1, w: 2 }, Edge { u: 1, v: 2, w: 3 }]);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let g = load_edge_list("0 2 1\n1 2 5\n1 3 2\n0 4 7").unwrap();
        let c = g.canonicalize();
        assert_eq!(load_edge_list(&c.to_edge_list()).unwrap(), c);
        assert_eq!(c.canonicalize(), c);
    }
}

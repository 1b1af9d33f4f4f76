//! BFS spanning tree used for phase-termination detection.

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, WeightedGraph};
use crate::oracle::bfs_depths;

/// Unweighted BFS tree; each node's parent is its smallest-ID neighbor one
/// level closer to the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationTree {
    pub root: NodeId,
    pub parent: Vec<Option<NodeId>>,
    pub children: Vec<Vec<NodeId>>,
    pub depth: Vec<usize>,
}

impl TerminationTree {
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }
}

pub fn termination_overlay(g: &WeightedGraph, root: NodeId) -> TerminationTree {
    let depth = bfs_depths(g, root);
    let n = g.node_count();
    let parent: Vec<Option<NodeId>> = (0..n)
        .map(|v| {
            (v != root).then(|| {
                g.neighbors(v)
                    .iter()
                    .map(|nb| nb.node)
                    .find(|&w| depth[w] + 1 == depth[v])
                    .expect("connected graph")
            })
        })
        .collect();
    let mut children = vec![Vec::new(); n];
    for (v, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            children[p].push(v);
        }
    }
    TerminationTree { root, parent, children, depth }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    #[test]
    fn path_tree() {
        let g = load_edge_list("0 1 1\n1 2 1").unwrap();
        let t = termination_overlay(&g, 0);
        assert_eq!(t.parent, vec![None, Some(0), Some(1)]);
        assert_eq!(t.height(), 2);
    }

    #[test]
    fn star_tree() {
        let g = load_edge_list("0 1 1\n0 2 1\n0 3 1\n0 4 1").unwrap();
        let t = termination_overlay(&g, 0);
        assert_eq!(t.children[0], vec![1, 2, 3, 4]);
        assert!((1..5).all(|v| t.parent[v] == Some(0)));
        assert_eq!(t.height(), 1);
    }

    #[test]
    fn ties_go_to_smallest_id() {
        // 3 is at depth 2 via either 1 or 2.
        let g = load_edge_list("0 1 1\n0 2 1\n1 3 1\n2 3 1").unwrap();
        let t = termination_overlay(&g, 0);
        assert_eq!(t.parent[3], Some(1));
    }
}

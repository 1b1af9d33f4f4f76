//! Exact reference computations used as ground truth.
//!
//! Everything here is centralized and unconcerned with message passing:
//! Dijkstra-based shortest paths, both diameters, the ε-far relation, and a
//! direct Thorup–Zwick construction that consumes the same level assignment
//! as the distributed protocol.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eps::Eps;
use crate::graph::{Dist, NodeId, WeightedGraph, INF};
use crate::hierarchy::LevelAssignment;
use crate::label::{BunchEntry, Pivot, TzLabel};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("empty level: A_{0} has no members")]
    EmptyLevel(usize),
    #[error("level assignment covers {levels} nodes but the metric has {metric}")]
    SizeMismatch { levels: usize, metric: usize },
}

/// Exact distances from one source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceTable {
    pub source: NodeId,
    pub dist: Vec<Dist>,
}

pub fn sssp_exact(g: &WeightedGraph, s: NodeId) -> DistanceTable {
    let mut dist = vec![INF; g.node_count()];
    let mut heap = BinaryHeap::new();
    dist[s] = 0;
    heap.push(Reverse((0, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for nb in g.neighbors(u) {
            let nd = d + nb.weight;
            if nd < dist[nb.node] {
                dist[nb.node] = nd;
                heap.push(Reverse((nd, nb.node)));
            }
        }
    }
    DistanceTable { source: s, dist }
}

/// Dense all-pairs distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Dist>,
}

impl DistanceMatrix {
    pub fn compute(g: &WeightedGraph) -> Self {
        let n = g.node_count();
        let rows: Vec<Vec<Dist>> = (0..n).into_par_iter().map(|s| sssp_exact(g, s).dist).collect();
        DistanceMatrix { n, data: rows.concat() }
    }

    pub fn from_rows(rows: Vec<Vec<Dist>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "distance matrix must be square");
        DistanceMatrix { n, data: rows.concat() }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: NodeId, v: NodeId) -> Dist {
        self.data[u * self.n + v]
    }

    pub fn row(&self, u: NodeId) -> &[Dist] {
        &self.data[u * self.n..(u + 1) * self.n]
    }
}

/// Max over pairs of the fewest hops on any minimum-weight path.
pub fn shortest_path_diameter(g: &WeightedGraph) -> usize {
    (0..g.node_count())
        .into_par_iter()
        .map(|s| {
            let n = g.node_count();
            let mut best: Vec<(Dist, usize)> = vec![(INF, usize::MAX); n];
            let mut heap = BinaryHeap::new();
            best[s] = (0, 0);
            heap.push(Reverse((0, 0usize, s)));
            while let Some(Reverse((d, h, u))) = heap.pop() {
                if (d, h) > best[u] {
                    continue;
                }
                for nb in g.neighbors(u) {
                    let cand = (d + nb.weight, h + 1);
                    if cand < best[nb.node] {
                        best[nb.node] = cand;
                        heap.push(Reverse((cand.0, cand.1, nb.node)));
                    }
                }
            }
            best.iter().map(|&(_, h)| h).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

/// Unweighted diameter.
pub fn hop_diameter(g: &WeightedGraph) -> usize {
    (0..g.node_count())
        .into_par_iter()
        .map(|s| bfs_depths(g, s).into_iter().max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

pub(crate) fn bfs_depths(g: &WeightedGraph, s: NodeId) -> Vec<usize> {
    let mut depth = vec![usize::MAX; g.node_count()];
    let mut queue = VecDeque::from([s]);
    depth[s] = 0;
    while let Some(u) = queue.pop_front() {
        for nb in g.neighbors(u) {
            if depth[nb.node] == usize::MAX {
                depth[nb.node] = depth[u] + 1;
                queue.push_back(nb.node);
            }
        }
    }
    depth
}

/// Centralized Thorup–Zwick labels for every node of the metric.
///
/// Pivots and bunches are computed under the `(distance, ID)` order. Nodes
/// outside the ground set `A_0` still get labels (their bunches range over
/// `A_0`), which is what a net-restricted hierarchy needs.
pub fn centralized_tz(metric: &DistanceMatrix, levels: &LevelAssignment) -> Result<Vec<TzLabel>, OracleError> {
    let n = metric.node_count();
    if levels.node_count() != n {
        return Err(OracleError::SizeMismatch { levels: levels.node_count(), metric: n });
    }
    if let Some(i) = levels.first_empty_level() {
        return Err(OracleError::EmptyLevel(i));
    }
    let k = levels.k();
    let ground: Vec<NodeId> = levels.members(0).collect();
    Ok((0..n)
        .into_par_iter()
        .map(|u| {
            let mut order = ground.clone();
            order.sort_unstable_by_key(|&w| (metric.get(u, w), w));
            let mut pivots = vec![Pivot { node: 0, dist: 0 }; k];
            let mut bunch = Vec::new();
            let mut bound = (INF, NodeId::MAX);
            for i in (0..k).rev() {
                let p = *order
                    .iter()
                    .find(|&&w| levels.contains(i, w))
                    .expect("non-empty level");
                pivots[i] = Pivot { node: p, dist: metric.get(u, p) };
                for &w in &order {
                    let key = (metric.get(u, w), w);
                    if key >= bound {
                        break;
                    }
                    if levels.level(w) == Some(i) {
                        bunch.push(BunchEntry { node: w, level: i, dist: key.0 });
                    }
                }
                bound = pivots[i].key();
            }
            bunch.sort_unstable_by_key(|e| e.node);
            TzLabel { owner: u, k, pivots, bunch }
        })
        .collect())
}

/// Number of nodes strictly closer to `u` than `d`.
fn strictly_closer(sorted_row: &[Dist], d: Dist) -> usize {
    sorted_row.partition_point(|&x| x < d)
}

/// `v` is ε-far from `u` when at least `eps * n` nodes are strictly closer to
/// `u` than `v` is.
pub fn is_epsilon_far(metric: &DistanceMatrix, u: NodeId, v: NodeId, eps: Eps) -> bool {
    let d = metric.get(u, v);
    let count = metric.row(u).iter().filter(|&&x| x < d).count();
    eps.count_reaches(count, metric.node_count())
}

/// All ordered ε-far pairs `(u, v)`, sorted.
pub fn epsilon_far_pairs(metric: &DistanceMatrix, eps: Eps) -> Vec<(NodeId, NodeId)> {
    let n = metric.node_count();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|u| {
            let mut sorted = metric.row(u).to_vec();
            sorted.sort_unstable();
            (0..n)
                .filter(move |&v| eps.count_reaches(strictly_closer(&sorted, metric.get(u, v)), n))
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `R(u, eps)`: the smallest attained distance `r` with `|B(u, r)| >= eps * n`.
pub fn r_epsilon(metric: &DistanceMatrix, u: NodeId, eps: Eps) -> Dist {
    let n = metric.node_count() as u128;
    let mut sorted = metric.row(u).to_vec();
    sorted.sort_unstable();
    // ceil(eps * n) >= 1 nodes are needed.
    let need = (eps.numer() as u128 * n).div_ceil(eps.denom() as u128) as usize;
    sorted[need.max(1) - 1]
}

/// Everything the tests and the harness need about one graph, computed once.
#[derive(Debug, Clone)]
pub struct GraphFacts {
    pub metric: DistanceMatrix,
    pub spd: usize,
    pub hop_diameter: usize,
}

impl GraphFacts {
    pub fn compute(g: &WeightedGraph) -> Self {
        GraphFacts {
            metric: DistanceMatrix::compute(g),
            spd: shortest_path_diameter(g),
            hop_diameter: hop_diameter(g),
        }
    }
}

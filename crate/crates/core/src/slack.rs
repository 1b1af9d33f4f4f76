//! Sketches with slack: density nets, 3-stretch slack sketches and CDG
//! sketches.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::eps::Eps;
use crate::graph::{Dist, NodeId, WeightedGraph};
use crate::hierarchy::{sample_over, LevelAssignment};
use crate::label::TzLabel;
use crate::oracle::{r_epsilon, DistanceMatrix};
use crate::protocol::{execute, phase_budget, BuildError, Mode, Plan, Stage};
use crate::rng::RngStream;
use crate::sim::RunMetrics;

/// Redraws allowed before a net that fails verification is reported.
pub const MAX_NET_DRAWS: u64 = 1_000;

/// A sampled node set meant to be an ε-density net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityNet {
    pub eps: Eps,
    /// Ascending.
    pub members: Vec<NodeId>,
}

impl DensityNet {
    pub fn contains(&self, u: NodeId) -> bool {
        self.members.binary_search(&u).is_ok()
    }

    pub fn flags(&self, n: usize) -> Vec<bool> {
        let mut f = vec![false; n];
        for &m in &self.members {
            f[m] = true;
        }
        f
    }

    /// Both net properties: size at most `(10/eps) ln n`, and every node
    /// has a member within `R(u, eps)`. Returns the first violation.
    pub fn verify(&self, metric: &DistanceMatrix) -> Result<(), String> {
        let n = metric.node_count();
        let bound = self.eps.net_size_bound(n);
        if self.members.len() as f64 > bound {
            return Err(format!("{} members exceed the size bound {bound:.2}", self.members.len()));
        }
        for u in 0..n {
            let r = r_epsilon(metric, u, self.eps);
            let near = self.members.iter().map(|&m| metric.get(u, m)).min();
            if near.is_none_or(|d| d > r) {
                return Err(format!("node {u} has no member within R(u, eps) = {r}"));
            }
        }
        Ok(())
    }
}

/// Per-node sampling probability `min(1, 5 ln n / (eps n))`.
pub fn net_probability(n: usize, eps: Eps) -> f64 {
    let n = n as f64;
    (5.0 * n.ln() / (eps.as_f64() * n)).min(1.0)
}

/// `(10/eps) ln n`: the net size bound, also the "population" whose
/// `-1/k`-th power is the CDG level continuation probability.
pub fn net_population(n: usize, eps: Eps) -> f64 {
    eps.net_size_bound(n)
}

/// Largest admissible CDG `k`: `max(1, ceil(log2((10/eps) ln n)))`.
pub fn cdg_max_k(n: usize, eps: Eps) -> usize {
    let m = net_population(n, eps);
    if m <= 1.0 {
        1
    } else {
        (m.log2().ceil() as usize).max(1)
    }
}

/// Samples a net with purely local coin flips (no rounds), redrawing from
/// the next substream until it passes [`DensityNet::verify`].
pub fn build_density_net(g: &WeightedGraph, eps: Eps, rng: RngStream) -> Result<DensityNet, BuildError> {
    build_density_net_in(&DistanceMatrix::compute(g), eps, rng)
}

/// [`build_density_net`] with precomputed distances.
pub fn build_density_net_in(metric: &DistanceMatrix, eps: Eps, rng: RngStream) -> Result<DensityNet, BuildError> {
    let n = metric.node_count();
    if n < 2 {
        return Err(BuildError::InvalidParams("density nets need n >= 2".into()));
    }
    let p = net_probability(n, eps);
    for attempt in 0..MAX_NET_DRAWS {
        let mut coins = rng.substream(attempt).generator();
        let members = (0..n).filter(|_| coins.gen::<f64>() < p).collect();
        let net = DensityNet { eps, members };
        if net.verify(metric).is_ok() {
            return Ok(net);
        }
    }
    Err(BuildError::NetRetryBudgetExhausted(MAX_NET_DRAWS))
}

/// Exact distances from one node to every net member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlackSketch3 {
    pub owner: NodeId,
    /// `(member, distance)`, ascending by member.
    pub table: Vec<(NodeId, Dist)>,
}

impl SlackSketch3 {
    pub fn words(&self) -> usize {
        2 * self.table.len()
    }
}

/// Multi-source Bellman–Ford from every net member at once.
pub fn build_slack3_sketches(
    g: &WeightedGraph,
    net: &DensityNet,
    mode: Mode,
) -> Result<(Vec<SlackSketch3>, RunMetrics), BuildError> {
    let n = g.node_count();
    if net.members.is_empty() || net.members.iter().any(|&m| m >= n) {
        return Err(BuildError::InvalidParams("net does not fit the graph".into()));
    }
    let flags = net.flags(n);
    let levels = LevelAssignment::new(1, flags.iter().map(|&f| f.then_some(0)).collect())?;
    let mut plan = Plan::new(vec![Stage::Bunch(0)]);
    plan.hierarchy = Some(levels);
    let m = net_population(n, net.eps);
    let (nodes, metrics) = execute(g, plan, mode, |s| vec![phase_budget(m, 1, n, s)])?;
    let sketches = nodes
        .iter()
        .map(|node| {
            let label = node.label().expect("phase ran");
            SlackSketch3 { owner: label.owner, table: label.bunch.iter().map(|e| (e.node, e.dist)).collect() }
        })
        .collect();
    Ok((sketches, metrics))
}

/// A node's nearest net member `u'` (under the `(distance, ID)` order) and
/// the Thorup–Zwick label `u'` holds for the net.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CdgSketch {
    pub owner: NodeId,
    pub nearest: NodeId,
    pub nearest_dist: Dist,
    pub net_label: TzLabel,
}

impl CdgSketch {
    /// The nearest member plus its distance, then the adopted label.
    pub fn words(&self) -> usize {
        2 + self.net_label.words()
    }
}

#[derive(Debug, Clone)]
pub struct CdgBuild {
    pub net: DensityNet,
    pub levels: LevelAssignment,
    pub sketches: Vec<CdgSketch>,
    pub metrics: RunMetrics,
}

/// Draws a net and a level hierarchy over it, then runs the three passes:
/// nearest member, Thorup–Zwick over the net, label adoption.
pub fn build_cdg_sketches(
    g: &WeightedGraph,
    eps: Eps,
    k: usize,
    rng: RngStream,
    mode: Mode,
) -> Result<CdgBuild, BuildError> {
    build_cdg_sketches_in(g, &DistanceMatrix::compute(g), eps, k, rng, mode)
}

/// [`build_cdg_sketches`] with precomputed distances (used only to verify
/// the net).
pub fn build_cdg_sketches_in(
    g: &WeightedGraph,
    metric: &DistanceMatrix,
    eps: Eps,
    k: usize,
    rng: RngStream,
    mode: Mode,
) -> Result<CdgBuild, BuildError> {
    let n = g.node_count();
    let max_k = cdg_max_k(n, eps);
    if k == 0 || k > max_k {
        return Err(BuildError::InvalidParams(format!("k = {k} outside 1..={max_k} for eps = {eps}, n = {n}")));
    }
    let net = build_density_net_in(metric, eps, rng.substream(0))?;
    let m = net_population(n, eps);
    let flags = net.flags(n);
    let levels = sample_over(&flags, k, m.powf(-1.0 / k as f64).min(1.0), rng.substream(1))?;
    build_cdg_on(g, net, levels, mode)
}

/// The three passes on a given net and hierarchy.
pub fn build_cdg_on(
    g: &WeightedGraph,
    net: DensityNet,
    levels: LevelAssignment,
    mode: Mode,
) -> Result<CdgBuild, BuildError> {
    let n = g.node_count();
    levels.validate()?;
    let k = levels.k();
    let m = net_population(n, net.eps);
    let mut stages = vec![Stage::Nearest];
    stages.extend((0..k).rev().map(Stage::Bunch));
    stages.push(Stage::Adopt);
    let mut plan = Plan::new(stages);
    plan.hierarchy = Some(levels.clone());
    plan.net = Some(net.flags(n));
    // A label over the net has at most k pivots and |net| bunch entries,
    // plus a header part.
    let max_parts = 1 + k as u64 + m.floor() as u64;
    let budgets = |s: u64| {
        let mut b = vec![s + 2];
        b.extend(std::iter::repeat_n(phase_budget(m, k, n, s), k));
        b.push(s + max_parts + 2);
        b
    };
    let (nodes, metrics) = execute(g, plan, mode, budgets)?;
    let sketches = nodes
        .iter()
        .enumerate()
        .map(|(u, node)| {
            let (nearest_dist, nearest) = node.nearest().expect("nearest pass ran");
            let net_label = node.adopted().cloned().expect("label adopted");
            debug_assert_eq!(net_label.owner, nearest);
            CdgSketch { owner: u, nearest, nearest_dist, net_label }
        })
        .collect();
    Ok(CdgBuild { net, levels, sketches, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;

    #[test]
    fn probability_caps_at_one() {
        assert_eq!(net_probability(16, Eps::new(1, 16).unwrap()), 1.0);
        assert_eq!(net_probability(3, Eps::one()), 1.0);
        assert!(net_probability(512, Eps::new(1, 8).unwrap()) < 1.0);
    }

    #[test]
    fn p3_net_is_everything() {
        let g = load_edge_list("0 1 1\n1 2 1").unwrap();
        let net = build_density_net(&g, Eps::one(), RngStream::new(3)).unwrap();
        assert_eq!(net.members, vec![0, 1, 2]);
    }

    #[test]
    fn p4_slack_tables() {
        let g = load_edge_list("0 1 1\n1 2 1\n2 3 1").unwrap();
        let net = DensityNet { eps: Eps::one(), members: vec![0, 3] };
        let (s, _) = build_slack3_sketches(&g, &net, Mode::FixedS { spd: 3 }).unwrap();
        assert_eq!(s[1].table, vec![(0, 1), (3, 2)]);
        let (d, _) = build_slack3_sketches(&g, &net, Mode::Detect).unwrap();
        assert_eq!(s, d);
    }

    #[test]
    fn cdg_with_full_net_and_k1_is_exact_tz() {
        let g = load_edge_list("0 1 2\n1 2 1\n2 3 5").unwrap();
        let net = DensityNet { eps: Eps::one(), members: vec![0, 1, 2, 3] };
        let levels = LevelAssignment::full(1, vec![0; 4]).unwrap();
        for mode in [Mode::FixedS { spd: 3 }, Mode::Detect] {
            let b = build_cdg_on(&g, net.clone(), levels.clone(), mode).unwrap();
            for (u, s) in b.sketches.iter().enumerate() {
                assert_eq!((s.nearest, s.nearest_dist), (u, 0));
                assert_eq!(s.net_label.bunch.len(), 4);
            }
        }
    }

    #[test]
    fn cdg_adopts_nearest_members_label() {
        let g = load_edge_list("0 1 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1").unwrap();
        let net = DensityNet { eps: Eps::one(), members: vec![1, 4] };
        let levels = LevelAssignment::new(1, (0..6).map(|u| (u == 1 || u == 4).then_some(0)).collect()).unwrap();
        let fixed = build_cdg_on(&g, net.clone(), levels.clone(), Mode::FixedS { spd: 5 }).unwrap();
        let detect = build_cdg_on(&g, net, levels, Mode::Detect).unwrap();
        assert_eq!(fixed.sketches, detect.sketches);
        let want = [(1, 1), (1, 0), (1, 1), (4, 1), (4, 0), (4, 1)];
        for (s, &(m, d)) in fixed.sketches.iter().zip(&want) {
            assert_eq!((s.nearest, s.nearest_dist), (m, d));
            assert_eq!(s.net_label.owner, m);
            assert_eq!(s.net_label.bunch.len(), 2);
        }
    }
}

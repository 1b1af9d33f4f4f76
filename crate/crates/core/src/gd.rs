//! Gracefully degrading sketches: one CDG sketch per slack level
//! `eps_i = 2^-i`, `i = 1..=ceil(log2 n)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eps::Eps;
use crate::graph::{NodeId, WeightedGraph};
use crate::hierarchy::max_levels;
use crate::oracle::DistanceMatrix;
use crate::protocol::{BuildError, Mode};
use crate::rng::RngStream;
use crate::sim::RunMetrics;
use crate::slack::{build_cdg_sketches_in, cdg_max_k, CdgBuild, CdgSketch, DensityNet};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdLevel {
    pub eps: Eps,
    pub k: usize,
    pub sketch: CdgSketch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GdSketch {
    pub owner: NodeId,
    pub levels: Vec<GdLevel>,
}

impl GdSketch {
    pub fn words(&self) -> usize {
        self.levels.iter().map(|l| l.sketch.words()).sum()
    }
}

/// Number of slack levels, `max(1, ceil(log2 n))`.
pub fn level_count(n: usize) -> usize {
    max_levels(n)
}

/// `k_i = max(1, min(i, ceil(log2((10/eps_i) ln n))))`.
pub fn level_k(n: usize, i: usize) -> usize {
    i.min(cdg_max_k(n, Eps::power_of_half(i as u32))).max(1)
}

/// Parameters of every level, `(eps_i, k_i)` for `i = 1..`.
pub fn level_params(n: usize) -> Vec<(Eps, usize)> {
    (1..=level_count(n)).map(|i| (Eps::power_of_half(i as u32), level_k(n, i))).collect()
}

#[derive(Debug, Clone)]
pub struct GdBuild {
    pub sketches: Vec<GdSketch>,
    pub nets: Vec<DensityNet>,
    /// Levels back to back, in order.
    pub metrics: RunMetrics,
}

/// Builds the levels one after another; level `i` draws from
/// `rng.substream(i)`.
pub fn build_gd_sketches(g: &WeightedGraph, rng: RngStream, mode: Mode) -> Result<GdBuild, BuildError> {
    let metric = DistanceMatrix::compute(g);
    let levels = level_params(g.node_count())
        .into_iter()
        .enumerate()
        .map(|(j, (eps, k))| build_cdg_sketches_in(g, &metric, eps, k, rng.substream(j as u64 + 1), mode))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(levels))
}

/// Same result as [`build_gd_sketches`], with the levels simulated
/// concurrently.
pub fn build_gd_sketches_parallel(g: &WeightedGraph, rng: RngStream, mode: Mode) -> Result<GdBuild, BuildError> {
    let metric = DistanceMatrix::compute(g);
    let levels = level_params(g.node_count())
        .into_par_iter()
        .enumerate()
        .map(|(j, (eps, k))| build_cdg_sketches_in(g, &metric, eps, k, rng.substream(j as u64 + 1), mode))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(levels))
}

fn assemble(levels: Vec<CdgBuild>) -> GdBuild {
    let n = levels[0].sketches.len();
    let mut sketches: Vec<GdSketch> = (0..n).map(|owner| GdSketch { owner, levels: Vec::new() }).collect();
    let mut metrics = RunMetrics::default();
    let mut nets = Vec::new();
    for (j, level) in levels.into_iter().enumerate() {
        let mut m = level.metrics;
        let names: Vec<String> = m.per_phase.iter().map(|p| format!("eps{}:{}", j + 1, p.name)).collect();
        m.name_phases(&names);
        metrics.append(m);
        for (s, c) in sketches.iter_mut().zip(level.sketches) {
            s.levels.push(GdLevel { eps: level.net.eps, k: level.levels.k(), sketch: c });
        }
        nets.push(level.net);
    }
    GdBuild { sketches, nets, metrics }
}

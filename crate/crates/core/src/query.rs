//! Distance estimates from pairs of sketches, and stretch reports.

use std::collections::BTreeMap;
use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eps::Eps;
use crate::gd::GdSketch;
use crate::graph::{Dist, NodeId};
use crate::label::TzLabel;
use crate::oracle::DistanceMatrix;
use crate::rng::RngStream;
use crate::slack::{CdgSketch, SlackSketch3};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QueryError {
    #[error("incompatible labels: {0}")]
    IncompatibleLabels(String),
    #[error("net mismatch between the sketches of {0} and {1}")]
    NetMismatch(NodeId, NodeId),
    #[error("incompatible levels: {0}")]
    IncompatibleLevels(String),
}

/// Thorup–Zwick estimate: the smallest `i` where `p_i(u) ∈ B_i(v)` or
/// `p_i(v) ∈ B_i(u)` yields `d(u, p) + d(p, v)` through the witnessing
/// pivot (the smaller one if both directions hold).
pub fn tz_estimate(lu: &TzLabel, lv: &TzLabel) -> Result<Dist, QueryError> {
    if lu.k != lv.k || lu.pivots.len() != lu.k || lv.pivots.len() != lv.k {
        return Err(QueryError::IncompatibleLabels(format!("k = {} vs k = {}", lu.k, lv.k)));
    }
    for i in 0..lu.k {
        let pu = lu.pivots[i];
        let pv = lv.pivots[i];
        let via_u = lv.entry_at(pu.node, i).map(|e| pu.dist + e.dist);
        let via_v = lu.entry_at(pv.node, i).map(|e| pv.dist + e.dist);
        match (via_u, via_v) {
            (Some(a), Some(b)) => return Ok(a.min(b)),
            (Some(a), None) | (None, Some(a)) => return Ok(a),
            (None, None) => {}
        }
    }
    Err(QueryError::IncompatibleLabels(format!(
        "no witnessing pivot between the labels of {} and {}",
        lu.owner, lv.owner
    )))
}

/// `min over shared net members w of d(u, w) + d(w, v)`.
pub fn slack3_estimate(su: &SlackSketch3, sv: &SlackSketch3) -> Result<Dist, QueryError> {
    if su.table.len() != sv.table.len() || su.table.iter().zip(&sv.table).any(|(a, b)| a.0 != b.0) {
        return Err(QueryError::NetMismatch(su.owner, sv.owner));
    }
    su.table
        .iter()
        .zip(&sv.table)
        .map(|(a, b)| a.1 + b.1)
        .min()
        .ok_or(QueryError::NetMismatch(su.owner, sv.owner))
}

/// `d(u, u') + d''(u', v') + d(v', v)`.
pub fn cdg_estimate(cu: &CdgSketch, cv: &CdgSketch) -> Result<Dist, QueryError> {
    let mid = if cu.nearest == cv.nearest { 0 } else { tz_estimate(&cu.net_label, &cv.net_label)? };
    Ok(cu.nearest_dist + mid + cv.nearest_dist)
}

/// Minimum of the per-level CDG estimates.
pub fn gd_estimate(gu: &GdSketch, gv: &GdSketch) -> Result<Dist, QueryError> {
    if gu.levels.len() != gv.levels.len()
        || gu.levels.iter().zip(&gv.levels).any(|(a, b)| a.eps != b.eps || a.k != b.k)
    {
        return Err(QueryError::IncompatibleLevels(format!("sketches of {} and {}", gu.owner, gv.owner)));
    }
    let mut best: Option<Dist> = None;
    for (a, b) in gu.levels.iter().zip(&gv.levels) {
        let e = cdg_estimate(&a.sketch, &b.sketch)?;
        best = Some(best.map_or(e, |x| x.min(e)));
    }
    best.ok_or_else(|| QueryError::IncompatibleLevels("no levels".into()))
}

/// Which unordered pairs a report covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "snake_case")]
pub enum PairPolicy {
    All,
    /// `count` uniform unordered pairs drawn with `seed` (with replacement).
    Sample { count: usize, seed: u64 },
}

impl PairPolicy {
    pub fn pairs(&self, n: usize) -> Vec<(NodeId, NodeId)> {
        match *self {
            PairPolicy::All => (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect(),
            PairPolicy::Sample { count, seed } => {
                if n < 2 {
                    return Vec::new();
                }
                let mut rng = RngStream::new(seed).generator();
                (0..count)
                    .map(|_| {
                        let u = rng.gen_range(0..n);
                        let mut v = rng.gen_range(0..n - 1);
                        if v >= u {
                            v += 1;
                        }
                        (u.min(v), u.max(v))
                    })
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairStretch {
    pub u: NodeId,
    pub v: NodeId,
    pub dist: Dist,
    pub estimate: Dist,
    pub ratio: f64,
}

/// Stretch restricted to pairs where one endpoint is ε-far from the other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackStats {
    /// Largest stretch the guarantee at this ε allows.
    pub ceiling: u64,
    pub max: f64,
    pub violations: usize,
    pub far_pairs: usize,
    /// Pairs that are not ε-far are unconstrained; their worst stretch is
    /// reported separately.
    pub near_pairs: usize,
    pub near_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub pairs: usize,
    pub max_stretch: f64,
    pub avg_stretch: f64,
    /// Pairs whose estimate is below the true distance (must be zero).
    pub underestimates: usize,
    /// Keyed by ε, written as a fraction.
    pub slack_view: BTreeMap<String, SlackStats>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub per_pair: Vec<PairStretch>,
}

/// `estimate / d`, with `0 / 0 = 1`.
pub fn ratio(estimate: Dist, dist: Dist) -> f64 {
    match (estimate, dist) {
        (0, 0) => 1.0,
        (_, 0) => f64::INFINITY,
        (e, d) => e as f64 / d as f64,
    }
}

/// Whether `estimate <= ceiling * dist`, evaluated exactly.
pub fn within(estimate: Dist, dist: Dist, ceiling: u64) -> bool {
    (estimate as u128) <= (ceiling as u128) * (dist as u128)
}

/// Runs `estimator` on the chosen pairs and compares with exact distances.
/// `slack` lists `(eps, ceiling)`: for each, pairs where either endpoint is
/// ε-far from the other must satisfy `estimate <= ceiling * d`.
pub fn stretch_report<F>(
    metric: &DistanceMatrix,
    estimator: F,
    policy: PairPolicy,
    slack: &[(Eps, u64)],
) -> Result<StretchReport, QueryError>
where
    F: Fn(NodeId, NodeId) -> Result<Dist, QueryError> + Sync,
{
    let pairs = policy.pairs(metric.node_count());
    let per_pair = pairs
        .par_iter()
        .map(|&(u, v)| {
            let dist = metric.get(u, v);
            let estimate = estimator(u, v)?;
            Ok(PairStretch { u, v, dist, estimate, ratio: ratio(estimate, dist) })
        })
        .collect::<Result<Vec<_>, QueryError>>()?;
    let max_stretch = per_pair.iter().map(|p| p.ratio).fold(1.0, f64::max);
    let avg_stretch = if per_pair.is_empty() {
        1.0
    } else {
        per_pair.iter().map(|p| p.ratio).sum::<f64>() / per_pair.len() as f64
    };
    let underestimates = per_pair.iter().filter(|p| p.estimate < p.dist).count();
    // Sorted rows answer "how many nodes are strictly closer" by bisection.
    let sorted: Vec<Vec<Dist>> = if slack.is_empty() {
        Vec::new()
    } else {
        (0..metric.node_count())
            .into_par_iter()
            .map(|u| {
                let mut row = metric.row(u).to_vec();
                row.sort_unstable();
                row
            })
            .collect()
    };
    let n = metric.node_count();
    let far = |eps: Eps, u: NodeId, d: Dist| eps.count_reaches(sorted[u].partition_point(|&x| x < d), n);
    let slack_view = slack
        .iter()
        .map(|&(eps, ceiling)| {
            let mut s = SlackStats { ceiling, max: 1.0, violations: 0, far_pairs: 0, near_pairs: 0, near_max: 1.0 };
            for p in &per_pair {
                if far(eps, p.u, p.dist) || far(eps, p.v, p.dist) {
                    s.far_pairs += 1;
                    s.max = s.max.max(p.ratio);
                    if !within(p.estimate, p.dist, ceiling) || p.estimate < p.dist {
                        s.violations += 1;
                    }
                } else {
                    s.near_pairs += 1;
                    s.near_max = s.near_max.max(p.ratio);
                }
            }
            (eps.to_string(), s)
        })
        .collect();
    Ok(StretchReport { pairs: per_pair.len(), max_stretch, avg_stretch, underestimates, slack_view, per_pair })
}

impl StretchReport {
    /// Pairs with `estimate > ceiling * d`.
    pub fn violations(&self, ceiling: u64) -> usize {
        self.per_pair.iter().filter(|p| !within(p.estimate, p.dist, ceiling)).count()
    }

    /// One CSV row per pair: `u,v,dist,estimate,ratio`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for p in &self.per_pair {
            w.serialize(p)?;
        }
        w.flush()?;
        Ok(())
    }
}

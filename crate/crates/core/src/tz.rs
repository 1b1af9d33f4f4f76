//! Distributed Thorup–Zwick sketches.

use crate::graph::WeightedGraph;
use crate::hierarchy::{sample_hierarchy, LevelAssignment};
use crate::label::TzLabel;
use crate::protocol::{execute, phase_budget, BuildError, Mode, Plan, Stage};
use crate::rng::RngStream;
use crate::sim::RunMetrics;

/// Labels plus everything needed to audit the run that built them.
#[derive(Debug, Clone)]
pub struct TzBuild {
    pub levels: LevelAssignment,
    pub labels: Vec<TzLabel>,
    pub metrics: RunMetrics,
}

/// Samples a hierarchy from `rng` and builds the labels on it.
pub fn build_tz_sketches(g: &WeightedGraph, k: usize, rng: RngStream, mode: Mode) -> Result<TzBuild, BuildError> {
    let levels = sample_hierarchy(g.node_count(), k, rng)?;
    build_tz_with_levels(g, levels, mode)
}

/// Phases `k-1` down to `0` on a given hierarchy.
pub fn build_tz_with_levels(g: &WeightedGraph, levels: LevelAssignment, mode: Mode) -> Result<TzBuild, BuildError> {
    levels.validate()?;
    let n = g.node_count();
    if levels.node_count() != n {
        return Err(BuildError::InvalidParams(format!(
            "hierarchy over {} nodes for a graph with {n}",
            levels.node_count()
        )));
    }
    let k = levels.k();
    let mut plan = Plan::new((0..k).rev().map(Stage::Bunch).collect());
    plan.hierarchy = Some(levels.clone());
    let (nodes, metrics) = execute(g, plan, mode, |s| vec![phase_budget(n as f64, k, n, s); k])?;
    let labels = nodes
        .iter()
        .map(|node| node.label().expect("every phase ran"))
        .collect();
    Ok(TzBuild { levels, labels, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;
    use crate::oracle::{centralized_tz, DistanceMatrix};

    #[test]
    fn k1_on_p3_is_exact() {
        let g = load_edge_list("0 1 1\n1 2 1").unwrap();
        let b = build_tz_sketches(&g, 1, RngStream::new(1), Mode::FixedS { spd: 2 }).unwrap();
        for l in &b.labels {
            assert_eq!(l.bunch.len(), 3);
            for e in &l.bunch {
                assert_eq!(e.dist, (e.node as u64).abs_diff(l.owner as u64));
            }
        }
    }

    #[test]
    fn p4_matches_centralized_in_both_modes() {
        let g = load_edge_list("0 1 1\n1 2 1\n2 3 1").unwrap();
        let levels = LevelAssignment::full(2, vec![0, 0, 0, 1]).unwrap();
        let want = centralized_tz(&DistanceMatrix::compute(&g), &levels).unwrap();
        let fixed = build_tz_with_levels(&g, levels.clone(), Mode::FixedS { spd: 3 }).unwrap();
        let detect = build_tz_with_levels(&g, levels, Mode::Detect).unwrap();
        assert_eq!(fixed.labels, want);
        assert_eq!(detect.labels, want);
        assert_eq!(fixed.metrics.data_msgs, detect.metrics.data_msgs);
        assert_eq!(detect.metrics.echo_msgs(), detect.metrics.announce_msgs());
    }

    #[test]
    fn too_small_s_is_reported() {
        let g = load_edge_list(&(0..40).map(|i| format!("{i} {} 1\n", i + 1)).collect::<String>()).unwrap();
        let err = build_tz_sketches(&g, 1, RngStream::new(0), Mode::FixedS { spd: 0 }).unwrap_err();
        assert!(matches!(err, BuildError::PhaseBudgetExceeded { .. }), "{err}");
    }
}

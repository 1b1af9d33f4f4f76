//! Sampled level hierarchies `A_0 ⊇ A_1 ⊇ … ⊇ A_{k-1}`.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::NodeId;
use crate::rng::RngStream;

/// Redraws allowed before a hierarchy with an empty level is reported.
pub const MAX_RESAMPLES: u64 = 10_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HierarchyError {
    #[error("k = {k} out of range 1..={max} for n = {n}")]
    InvalidK { k: usize, n: usize, max: usize },
    #[error("empty level: A_{0} has no members")]
    EmptyLevel(usize),
    #[error("resample budget exhausted after {0} draws")]
    ResampleBudgetExhausted(u64),
    #[error("level {level} of node {node} is not below k = {k}")]
    LevelOutOfRange { node: NodeId, level: usize, k: usize },
}

/// Per-node level assignment.
///
/// `level(u) = max{i : u ∈ A_i}`; nodes outside the ground set `A_0` have no
/// level. For plain Thorup–Zwick every node is in `A_0`; for sketches built
/// over a density net only the net members are. `A_k` is empty by
/// definition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAssignment {
    k: usize,
    levels: Vec<Option<usize>>,
}

impl LevelAssignment {
    /// All nodes in `A_0`, with the given levels.
    pub fn full(k: usize, levels: Vec<usize>) -> Result<Self, HierarchyError> {
        Self::new(k, levels.into_iter().map(Some).collect())
    }

    pub fn new(k: usize, levels: Vec<Option<usize>>) -> Result<Self, HierarchyError> {
        if k == 0 {
            return Err(HierarchyError::InvalidK { k, n: levels.len(), max: usize::MAX });
        }
        for (node, l) in levels.iter().enumerate() {
            if let Some(level) = *l {
                if level >= k {
                    return Err(HierarchyError::LevelOutOfRange { node, level, k });
                }
            }
        }
        Ok(LevelAssignment { k, levels })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn node_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, u: NodeId) -> Option<usize> {
        self.levels[u]
    }

    /// `u ∈ A_i`.
    pub fn contains(&self, i: usize, u: NodeId) -> bool {
        matches!(self.levels[u], Some(l) if l >= i)
    }

    /// Members of `A_i`, ascending.
    pub fn members(&self, i: usize) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.levels.len()).filter(move |&u| self.contains(i, u))
    }

    /// First `i < k` with `A_i = ∅`, if any.
    pub fn first_empty_level(&self) -> Option<usize> {
        let top = self.levels.iter().flatten().copied().max();
        match top {
            None => Some(0),
            Some(t) if t + 1 < self.k => Some(t + 1),
            Some(_) => None,
        }
    }

    pub fn validate(&self) -> Result<(), HierarchyError> {
        match self.first_empty_level() {
            Some(i) => Err(HierarchyError::EmptyLevel(i)),
            None => Ok(()),
        }
    }
}

/// Largest admissible `k` for an `n`-node hierarchy: `max(1, ⌈log₂ n⌉)`.
pub fn max_levels(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// One draw: each ground node climbs independently with continuation
/// probability `p`, capped at `k - 1`. No emptiness check.
pub fn draw_levels<R: RngCore>(ground: &[bool], k: usize, p: f64, rng: &mut R) -> Vec<Option<usize>> {
    ground
        .iter()
        .map(|&member| {
            member.then(|| {
                let mut level = 0;
                while level + 1 < k && rng.gen::<f64>() < p {
                    level += 1;
                }
                level
            })
        })
        .collect()
}

/// Draws a hierarchy over the nodes flagged in `ground`, redrawing the whole
/// assignment from the next substream whenever some `A_i` comes out empty.
pub fn sample_over(ground: &[bool], k: usize, p: f64, rng: RngStream) -> Result<LevelAssignment, HierarchyError> {
    if k == 0 {
        return Err(HierarchyError::InvalidK { k, n: ground.len(), max: max_levels(ground.len()) });
    }
    for attempt in 0..MAX_RESAMPLES {
        let mut g = rng.substream(attempt).generator();
        let levels = LevelAssignment { k, levels: draw_levels(ground, k, p, &mut g) };
        if levels.first_empty_level().is_none() {
            return Ok(levels);
        }
    }
    Err(HierarchyError::ResampleBudgetExhausted(MAX_RESAMPLES))
}

/// Thorup–Zwick hierarchy on all `n` nodes with continuation probability
/// `n^{-1/k}`.
pub fn sample_hierarchy(n: usize, k: usize, rng: RngStream) -> Result<LevelAssignment, HierarchyError> {
    let max = max_levels(n);
    if k == 0 || k > max {
        return Err(HierarchyError::InvalidK { k, n, max });
    }
    let p = (n as f64).powf(-1.0 / k as f64);
    sample_over(&vec![true; n], k, p, rng)
}

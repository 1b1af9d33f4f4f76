//! Thorup–Zwick labels.

use serde::{Deserialize, Serialize};

use crate::graph::{Dist, NodeId};

/// `p_i(u)` together with `d(u, p_i(u))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pivot {
    pub node: NodeId,
    pub dist: Dist,
}

impl Pivot {
    /// Global tie-break key.
    pub fn key(&self) -> (Dist, NodeId) {
        (self.dist, self.node)
    }
}

/// A bunch member `w ∈ B_i(u)`; `level` is `i`, which is also `level(w)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BunchEntry {
    pub node: NodeId,
    pub level: usize,
    pub dist: Dist,
}

/// The label `L(u)`: pivots `p_0(u)..p_{k-1}(u)` and the bunch `B(u)`, all
/// with exact distances. Bunch entries are kept sorted by node ID.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TzLabel {
    pub owner: NodeId,
    pub k: usize,
    pub pivots: Vec<Pivot>,
    pub bunch: Vec<BunchEntry>,
}

impl TzLabel {
    pub fn entry(&self, node: NodeId) -> Option<&BunchEntry> {
        self.bunch
            .binary_search_by_key(&node, |e| e.node)
            .ok()
            .map(|i| &self.bunch[i])
    }

    /// Bunch entry for `node` recorded at exactly `level`.
    pub fn entry_at(&self, node: NodeId, level: usize) -> Option<&BunchEntry> {
        self.entry(node).filter(|e| e.level == level)
    }

    /// Size in words: an ID and a distance per pivot and per bunch entry.
    pub fn words(&self) -> usize {
        2 * (self.pivots.len() + self.bunch.len())
    }

    /// Structural checks that hold for every correctly built label.
    pub fn check(&self) -> Result<(), String> {
        if self.k == 0 || self.pivots.len() != self.k {
            return Err(format!("label of {}: {} pivots for k = {}", self.owner, self.pivots.len(), self.k));
        }
        if self.bunch.windows(2).any(|w| w[0].node >= w[1].node) {
            return Err(format!("label of {}: bunch not strictly sorted", self.owner));
        }
        if let Some(e) = self.bunch.iter().find(|e| e.level >= self.k) {
            return Err(format!("label of {}: entry {} at level {} >= k", self.owner, e.node, e.level));
        }
        for i in 0..self.k {
            let bound = self.pivots.get(i + 1).map(Pivot::key).unwrap_or((Dist::MAX, NodeId::MAX));
            let mut best = self.pivots.get(i + 1).copied();
            for e in self.bunch.iter().filter(|e| e.level == i) {
                if (e.dist, e.node) >= bound {
                    return Err(format!("label of {}: entry {} at level {i} not closer than p_{}", self.owner, e.node, i + 1));
                }
                if best.is_none_or(|b| (e.dist, e.node) < b.key()) {
                    best = Some(Pivot { node: e.node, dist: e.dist });
                }
            }
            if best != Some(self.pivots[i]) {
                return Err(format!("label of {}: p_{i} is not the nearest member of A_{i}", self.owner));
            }
        }
        let top = self.pivots[self.k - 1];
        if self.entry_at(top.node, self.k - 1).map(|e| e.dist) != Some(top.dist) {
            return Err(format!("label of {}: p_{{k-1}} missing from the bunch", self.owner));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TzLabel {
        TzLabel {
            owner: 0,
            k: 2,
            pivots: vec![Pivot { node: 0, dist: 0 }, Pivot { node: 3, dist: 3 }],
            bunch: vec![
                BunchEntry { node: 0, level: 0, dist: 0 },
                BunchEntry { node: 1, level: 0, dist: 1 },
                BunchEntry { node: 2, level: 0, dist: 2 },
                BunchEntry { node: 3, level: 1, dist: 3 },
            ],
        }
    }

    #[test]
    fn valid_label_passes() {
        let l = sample();
        assert_eq!(l.check(), Ok(()));
        assert_eq!(l.words(), 12);
        assert_eq!(l.entry_at(3, 1).unwrap().dist, 3);
        assert!(l.entry_at(3, 0).is_none());
    }

    #[test]
    fn corrupt_labels_fail() {
        let mut l = sample();
        l.bunch[2].dist = 5;
        assert!(l.check().is_err());
        let mut l = sample();
        l.pivots[0] = Pivot { node: 1, dist: 1 };
        assert!(l.check().is_err());
        let mut l = sample();
        l.bunch.pop();
        assert!(l.check().is_err());
    }
}

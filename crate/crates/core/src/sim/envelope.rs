use serde::{Deserialize, Serialize};

use crate::graph::{Dist, NodeId};

/// Words allowed in one per-edge, per-round message.
pub const ENVELOPE_WORDS: usize = 3;

/// One piece of a label being streamed to the nodes that adopt it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LabelPart {
    /// Announces the label owner and how many entry parts follow.
    Header { owner: NodeId, entries: u32 },
    Pivot { level: u8, node: NodeId, dist: Dist },
    Bunch { level: u8, node: NodeId, dist: Dist },
}

/// The single message an edge carries in one direction in one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Envelope {
    /// Distance announcement `<source, dist>`.
    Announce { source: NodeId, dist: Dist },
    /// Acknowledges a received announcement; carries a copy of it.
    Echo { source: NodeId, dist: Dist },
    /// Convergecast along the termination tree: subtree done with `phase`.
    Complete { phase: u32 },
    /// Broadcast along the termination tree: begin `phase` at round `at`.
    Start { phase: u32, at: u64 },
    /// Word-sized fragment of a label under transfer.
    Label(LabelPart),
}

impl Envelope {
    /// Payload size in words, including the tag (levels share the tag word).
    pub fn words(&self) -> usize {
        match self {
            Envelope::Announce { .. } | Envelope::Echo { .. } => 3,
            Envelope::Complete { .. } => 2,
            Envelope::Start { .. } => 3,
            Envelope::Label(_) => 3,
        }
    }

    /// Announcements and label transfers carry sketch data; everything else
    /// is termination-detection control traffic.
    pub fn is_data(&self) -> bool {
        matches!(self, Envelope::Announce { .. } | Envelope::Label(_))
    }
}

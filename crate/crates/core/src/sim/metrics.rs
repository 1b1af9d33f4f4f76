use serde::{Deserialize, Serialize};

use super::envelope::Envelope;

/// Message and round counts for one phase of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseMetrics {
    pub phase: usize,
    pub name: String,
    /// Absolute round at which the phase was first observed.
    pub first_round: u64,
    pub rounds: u64,
    pub data_msgs: u64,
    pub control_msgs: u64,
    pub announce_msgs: u64,
    pub label_msgs: u64,
    pub echo_msgs: u64,
    pub complete_msgs: u64,
    pub start_msgs: u64,
    /// Last round in which the phase sent an announcement, echo or label
    /// part; `None` if it sent none.
    pub last_traffic_round: Option<u64>,
    /// Round at which the termination root declared the phase over.
    pub detected_at: Option<u64>,
}

impl PhaseMetrics {
    fn count(&mut self, env: &Envelope, round: u64) {
        match env {
            Envelope::Announce { .. } => {
                self.announce_msgs += 1;
                self.data_msgs += 1;
            }
            Envelope::Label(_) => {
                self.label_msgs += 1;
                self.data_msgs += 1;
            }
            Envelope::Echo { .. } => {
                self.echo_msgs += 1;
                self.control_msgs += 1;
            }
            Envelope::Complete { .. } => {
                self.complete_msgs += 1;
                self.control_msgs += 1;
            }
            Envelope::Start { .. } => {
                self.start_msgs += 1;
                self.control_msgs += 1;
            }
        }
        if matches!(env, Envelope::Announce { .. } | Envelope::Echo { .. } | Envelope::Label(_)) {
            self.last_traffic_round = Some(round);
        }
    }
}

/// Totals of a run plus the per-phase breakdown they are summed from.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub rounds: u64,
    pub data_msgs: u64,
    pub control_msgs: u64,
    pub per_phase: Vec<PhaseMetrics>,
    pub max_nonempty_queues: usize,
}

impl RunMetrics {
    pub(crate) fn phase_mut(&mut self, phase: usize, round: u64) -> &mut PhaseMetrics {
        while self.per_phase.len() <= phase {
            let idx = self.per_phase.len();
            self.per_phase.push(PhaseMetrics { phase: idx, first_round: round, ..Default::default() });
        }
        &mut self.per_phase[phase]
    }

    pub(crate) fn record(&mut self, phase: usize, env: &Envelope, round: u64) {
        if env.is_data() {
            self.data_msgs += 1;
        } else {
            self.control_msgs += 1;
        }
        self.phase_mut(phase, round).count(env, round);
    }

    pub fn echo_msgs(&self) -> u64 {
        self.per_phase.iter().map(|p| p.echo_msgs).sum()
    }

    pub fn announce_msgs(&self) -> u64 {
        self.per_phase.iter().map(|p| p.announce_msgs).sum()
    }

    /// Names phases in order; extra names are ignored.
    pub fn name_phases<S: AsRef<str>>(&mut self, names: &[S]) {
        for (p, name) in self.per_phase.iter_mut().zip(names) {
            p.name = name.as_ref().to_string();
        }
    }

    /// Appends `other` as if it ran right after `self` finished.
    pub fn append(&mut self, other: RunMetrics) {
        let offset = self.rounds;
        let base = self.per_phase.len();
        for mut p in other.per_phase {
            p.phase += base;
            p.first_round += offset;
            p.last_traffic_round = p.last_traffic_round.map(|r| r + offset);
            p.detected_at = p.detected_at.map(|r| r + offset);
            self.per_phase.push(p);
        }
        self.rounds += other.rounds;
        self.data_msgs += other.data_msgs;
        self.control_msgs += other.control_msgs;
        self.max_nonempty_queues = self.max_nonempty_queues.max(other.max_nonempty_queues);
    }

    /// Totals equal the sums over phases.
    pub fn is_consistent(&self) -> bool {
        let sum = |f: fn(&PhaseMetrics) -> u64| self.per_phase.iter().map(f).sum::<u64>();
        sum(|p| p.rounds) == self.rounds
            && sum(|p| p.data_msgs) == self.data_msgs
            && sum(|p| p.control_msgs) == self.control_msgs
    }
}

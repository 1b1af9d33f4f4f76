//! Synchronous CONGEST-model executor.
//!
//! Every round, each node sees the envelopes its neighbors sent in the
//! previous round (one slot per incident edge) and fills at most one outgoing
//! envelope per incident edge. Nodes and edges are visited in ascending ID
//! order, so a run is a pure function of its inputs.

mod envelope;
mod metrics;

pub use envelope::{Envelope, LabelPart, ENVELOPE_WORDS};
pub use metrics::{PhaseMetrics, RunMetrics};

use thiserror::Error;

use crate::graph::{Neighbor, NodeId, WeightedGraph};

/// What a node knows when it starts: its ID, `n`, and its incident edges
/// (sorted by neighbor ID; slot `i` of the inbox/outbox is edge `i`).
#[derive(Debug, Clone, Copy)]
pub struct NodeContext<'a> {
    pub id: NodeId,
    pub n: usize,
    pub neighbors: &'a [Neighbor],
}

/// A node-local state machine driven by the executor.
pub trait NodeProcess {
    /// One synchronous round. `inbox[i]` holds what arrived over edge `i`;
    /// writing `outbox[i]` sends over edge `i`, delivered next round.
    fn on_round(&mut self, round: u64, inbox: &[Option<Envelope>], outbox: &mut [Option<Envelope>]);

    /// Whether this node has nothing left to do. The run ends once every node
    /// is done and no envelope is in flight.
    fn is_done(&self) -> bool;

    /// Ordinal of the phase the node is in, for metric attribution.
    fn phase(&self) -> usize {
        0
    }

    /// Number of nonempty outgoing queues the node currently holds.
    fn nonempty_queues(&self) -> usize {
        0
    }

    /// `Some(r)` promises that, absent incoming envelopes, every round before
    /// `r` is a no-op for this node. Lets the executor skip idle stretches.
    fn idle_until(&self) -> Option<u64> {
        None
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("round limit exceeded after {} rounds", .metrics.rounds)]
    RoundLimitExceeded { metrics: Box<RunMetrics> },
    #[error("round limit must be positive")]
    InvalidRoundLimit,
}

/// Runs one process per node until global quiescence.
///
/// Messages sent in round `t` are delivered at the start of round `t + 1`.
/// Each message is attributed to its sender's phase; each round to the
/// highest phase any node is in.
pub fn run<P, F>(g: &WeightedGraph, mut factory: F, round_limit: u64) -> Result<(Vec<P>, RunMetrics), SimError>
where
    P: NodeProcess,
    F: FnMut(NodeContext<'_>) -> P,
{
    if round_limit == 0 {
        return Err(SimError::InvalidRoundLimit);
    }
    let n = g.node_count();
    let mut procs: Vec<P> = (0..n)
        .map(|id| factory(NodeContext { id, n, neighbors: g.neighbors(id) }))
        .collect();

    // rev[u][i]: slot of u in the adjacency list of u's i-th neighbor.
    let rev: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            g.neighbors(u)
                .iter()
                .map(|nb| {
                    g.neighbors(nb.node)
                        .binary_search_by_key(&u, |x| x.node)
                        .expect("undirected adjacency")
                })
                .collect()
        })
        .collect();

    let mut inbox: Vec<Vec<Option<Envelope>>> = (0..n).map(|u| vec![None; g.degree(u)]).collect();
    let mut outbox = inbox.clone();
    let mut metrics = RunMetrics::default();
    let mut in_flight = 0usize;
    let mut round = 0u64;
    let mut phase = procs.iter().map(P::phase).max().unwrap_or(0);

    loop {
        if round >= round_limit {
            metrics.rounds = round;
            return Err(SimError::RoundLimitExceeded { metrics: Box::new(metrics) });
        }

        if in_flight == 0 {
            let wake = procs.iter().map(P::idle_until).try_fold(u64::MAX, |acc, w| w.map(|w| acc.min(w)));
            if let Some(wake) = wake {
                if wake > round {
                    let wake = wake.min(round_limit);
                    metrics.phase_mut(phase, round).rounds += wake - round;
                    round = wake;
                    continue;
                }
            }
        }

        for (u, p) in procs.iter_mut().enumerate() {
            p.on_round(round, &inbox[u], &mut outbox[u]);
        }
        for slots in &mut inbox {
            slots.fill(None);
        }

        phase = procs.iter().map(P::phase).max().unwrap_or(0);
        metrics.phase_mut(phase, round).rounds += 1;

        in_flight = 0;
        for u in 0..n {
            let sender_phase = procs[u].phase();
            for (i, slot) in outbox[u].iter_mut().enumerate() {
                if let Some(env) = slot.take() {
                    assert!(
                        env.words() <= ENVELOPE_WORDS,
                        "envelope of {} words exceeds the per-edge budget",
                        env.words()
                    );
                    metrics.record(sender_phase, &env, round);
                    let v = g.neighbors(u)[i].node;
                    inbox[v][rev[u][i]] = Some(env);
                    in_flight += 1;
                }
            }
        }
        let queues = procs.iter().map(P::nonempty_queues).max().unwrap_or(0);
        metrics.max_nonempty_queues = metrics.max_nonempty_queues.max(queues);

        round += 1;
        if in_flight == 0 && procs.iter().all(P::is_done) {
            break;
        }
    }
    metrics.rounds = round;
    debug_assert!(metrics.is_consistent());
    Ok((procs, metrics))
}

//! The node process behind every distributed construction.
//!
//! A run is a fixed sequence of stages executed by every node:
//!
//! * `Bunch(i)`: phase `i` of the Thorup–Zwick construction. Sources are the
//!   nodes of level exactly `i`; a node only relays a source while the
//!   offered distance beats its distance to `A_{i+1}`, keeps at most one
//!   pending message per source, and sends one per round, chosen by a
//!   round-robin cursor over source IDs. With `A_{i+1} = ∅` this is plain
//!   multi-source Bellman–Ford.
//! * `Nearest`: Bellman–Ford from a virtual super node made of all net
//!   members; every node learns its `(distance, ID)`-nearest member and the
//!   neighbor that leads to it.
//! * `Adopt`: every net member streams its own label, one part per round,
//!   down the shortest-path forest built by `Nearest`.
//!
//! Stages are synchronized either by a known round budget per stage
//! ([`Mode::FixedS`]) or by echo-based termination detection over a BFS
//! tree ([`Mode::Detect`]). In detect mode even rounds carry data and odd
//! rounds carry control traffic, so the data schedule is the same in both
//! modes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Dist, NodeId, WeightedGraph, INF};
use crate::hierarchy::{HierarchyError, LevelAssignment};
use crate::label::{BunchEntry, Pivot, TzLabel};
use crate::overlay::{termination_overlay, TerminationTree};
use crate::sim::{self, Envelope, LabelPart, NodeContext, NodeProcess, RunMetrics, SimError};

/// Failures of the sketch constructions.
#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error("phase {phase} did not settle within its round budget (is S too small?)")]
    PhaseBudgetExceeded { phase: String },
    #[error("density net: retry budget exhausted after {0} draws")]
    NetRetryBudgetExhausted(u64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// How nodes learn that a stage is over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Mode {
    /// Every node knows the shortest-path diameter `S` and waits out a fixed
    /// per-stage round budget derived from it.
    FixedS { spd: usize },
    /// Stage ends are detected with ECHO/COMPLETE/START messages.
    Detect,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::FixedS { .. } => "fixed_S",
            Mode::Detect => "detect",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stage {
    Bunch(usize),
    Nearest,
    Adopt,
}

impl Stage {
    pub(crate) fn name(&self) -> String {
        match self {
            Stage::Bunch(i) => format!("bunch-{i}"),
            Stage::Nearest => "nearest".to_string(),
            Stage::Adopt => "adopt".to_string(),
        }
    }
}

/// Shared, read-only description of a run. Each node only reads its own
/// entries of the per-node vectors.
#[derive(Debug)]
pub(crate) struct Plan {
    pub stages: Vec<Stage>,
    /// Fixed mode: start round of each stage, plus the end round last.
    pub offsets: Option<Vec<u64>>,
    pub hierarchy: Option<LevelAssignment>,
    pub net: Option<Vec<bool>>,
    pub tree: Option<TerminationTree>,
}

impl Plan {
    pub fn new(stages: Vec<Stage>) -> Self {
        Plan { stages, offsets: None, hierarchy: None, net: None, tree: None }
    }

    pub fn fixed(stages: Vec<Stage>, budgets: &[u64]) -> Self {
        assert_eq!(stages.len(), budgets.len());
        let mut offsets = vec![0];
        for b in budgets {
            offsets.push(offsets.last().unwrap() + b);
        }
        Plan { stages, offsets: Some(offsets), hierarchy: None, net: None, tree: None }
    }

    pub fn k(&self) -> usize {
        self.hierarchy.as_ref().map_or(1, LevelAssignment::k)
    }
}

/// Runs `plan` on `g`. `budgets` are the per-stage round budgets for a fixed
/// plan, evaluated at the true `S`; in detect mode they only size the safety
/// round limit (evaluated at `S = n`).
pub(crate) fn execute(
    g: &WeightedGraph,
    mut plan: Plan,
    mode: Mode,
    budgets: impl Fn(u64) -> Vec<u64>,
) -> Result<(Vec<SketchNode>, RunMetrics), BuildError> {
    let n = g.node_count() as u64;
    let round_limit = match mode {
        Mode::FixedS { spd } => {
            let b = budgets(spd as u64);
            let end = b.iter().sum::<u64>();
            plan.offsets = Plan::fixed(plan.stages.clone(), &b).offsets;
            end + 1
        }
        Mode::Detect => {
            plan.tree = Some(termination_overlay(g, 0));
            let stages = plan.stages.len() as u64;
            4 * budgets(n.max(1)).iter().sum::<u64>() + stages * (8 * n + 16)
        }
    };
    let plan = Arc::new(plan);
    let (mut nodes, mut metrics) = sim::run(g, |ctx| SketchNode::new(ctx, Arc::clone(&plan)), round_limit)?;
    for node in &mut nodes {
        node.finalize();
    }
    if let Some(stage) = nodes.iter().filter_map(|x| x.overrun).min() {
        return Err(BuildError::PhaseBudgetExceeded { phase: plan.stages[stage].name() });
    }
    let names: Vec<String> = plan.stages.iter().map(Stage::name).collect();
    metrics.phase_mut(names.len() - 1, metrics.rounds);
    metrics.name_phases(&names);
    if let Some(detected) = nodes.iter().find_map(SketchNode::detected) {
        for (p, at) in metrics.per_phase.iter_mut().zip(detected) {
            p.detected_at = *at;
        }
    }
    Ok((nodes, metrics))
}

/// Fixed-mode round budget for one Thorup–Zwick phase when levels are
/// sampled with continuation probability `size^{-1/k}`:
/// `4 * ceil(size^{1/k} * ln n) * S + n`.
pub(crate) fn phase_budget(size: f64, k: usize, n: usize, spd: u64) -> u64 {
    let ln_n = (n.max(2) as f64).ln();
    let per = (size.max(1.0).powf(1.0 / k as f64) * ln_n).ceil() as u64;
    4 * per * spd + n as u64
}

/// The received announcement a pending or sent message derives from.
#[derive(Debug, Clone, Copy)]
struct Origin {
    edge: usize,
    source: NodeId,
    dist: Dist,
}

#[derive(Debug)]
struct Outstanding {
    remaining: usize,
    reply: Option<Origin>,
}

/// State of a relaxation stage (`Bunch` or `Nearest`).
#[derive(Debug, Default)]
struct Relax {
    /// `Nearest` keeps a single slot; `Bunch` keeps one slot per source.
    single_slot: bool,
    best: BTreeMap<usize, (Dist, NodeId)>,
    via: BTreeMap<usize, usize>,
    pending: BTreeSet<usize>,
    origin: HashMap<usize, Origin>,
    cursor: usize,
    threshold: (Dist, NodeId),
    own_source: bool,
}

impl Relax {
    fn slot(&self, source: NodeId) -> usize {
        if self.single_slot {
            0
        } else {
            source
        }
    }

    /// Round-robin choice: scan IDs after the cursor, wrapping around, with
    /// the cursor position itself checked last.
    fn next_pending(&mut self) -> Option<usize> {
        let next = self
            .pending
            .range(self.cursor + 1..)
            .next()
            .or_else(|| self.pending.range(..=self.cursor).next())
            .copied()?;
        self.cursor = next;
        self.pending.remove(&next);
        Some(next)
    }
}

#[derive(Debug, Default)]
struct Adopt {
    queue: VecDeque<LabelPart>,
    received: Vec<LabelPart>,
    expected: Option<u32>,
}

impl Adopt {
    fn complete(&self, net_member: bool) -> bool {
        if !self.queue.is_empty() {
            return false;
        }
        net_member || matches!(self.expected, Some(e) if self.received.len() == e as usize + 1)
    }
}

#[derive(Debug)]
struct Control {
    parent: Option<usize>,
    children: Vec<usize>,
    is_root: bool,
    height: u64,
    queues: Vec<VecDeque<Envelope>>,
    outstanding: HashMap<(NodeId, Dist), Outstanding>,
    own_unechoed: bool,
    children_complete: Vec<usize>,
    complete_sent: bool,
    next_start: Option<(usize, u64)>,
    detected: Vec<Option<u64>>,
    finished: bool,
}

/// One node of a sketch-construction run.
#[derive(Debug)]
pub(crate) struct SketchNode {
    id: NodeId,
    weights: Vec<Dist>,
    plan: Arc<Plan>,
    stage: usize,
    stage_round: u64,
    started: bool,
    last_round: Option<u64>,
    relax: Relax,
    adopt: Adopt,
    ctl: Option<Control>,
    pub overrun: Option<usize>,
    bunch: Vec<BunchEntry>,
    pivots: Vec<Option<Pivot>>,
    nearest: Option<(Dist, NodeId)>,
    nearest_via: Option<usize>,
    adopted: Option<TzLabel>,
}

impl SketchNode {
    pub fn new(ctx: NodeContext<'_>, plan: Arc<Plan>) -> Self {
        let ctl = plan.tree.as_ref().map(|t| {
            let edge_to = |w: NodeId| {
                ctx.neighbors
                    .binary_search_by_key(&w, |nb| nb.node)
                    .expect("tree edges are graph edges")
            };
            Control {
                parent: t.parent[ctx.id].map(edge_to),
                children: t.children[ctx.id].iter().map(|&c| edge_to(c)).collect(),
                is_root: t.root == ctx.id,
                height: t.height() as u64,
                queues: vec![VecDeque::new(); ctx.neighbors.len()],
                outstanding: HashMap::new(),
                own_unechoed: false,
                children_complete: vec![0; plan.stages.len()],
                complete_sent: false,
                next_start: None,
                detected: vec![None; plan.stages.len()],
                finished: false,
            }
        });
        SketchNode {
            id: ctx.id,
            weights: ctx.neighbors.iter().map(|nb| nb.weight).collect(),
            pivots: vec![None; plan.k()],
            plan,
            stage: 0,
            stage_round: 0,
            started: false,
            last_round: None,
            relax: Relax::default(),
            adopt: Adopt::default(),
            ctl,
            overrun: None,
            bunch: Vec::new(),
            nearest: None,
            nearest_via: None,
            adopted: None,
        }
    }

    fn is_net_member(&self) -> bool {
        self.plan.net.as_ref().is_some_and(|net| net[self.id])
    }

    fn detect(&self) -> bool {
        self.ctl.is_some()
    }

    fn begin_stage(&mut self) {
        self.started = true;
        self.stage_round = 0;
        match self.plan.stages[self.stage] {
            Stage::Bunch(i) => {
                let k = self.plan.k();
                let threshold = if i + 1 < k {
                    self.pivots[i + 1].expect("upper phase finished").key()
                } else {
                    (INF, NodeId::MAX)
                };
                let own = self.plan.hierarchy.as_ref().expect("bunch stage needs levels").level(self.id) == Some(i);
                self.relax = Relax { threshold, own_source: own, ..Relax::default() };
                if own {
                    self.relax.best.insert(self.id, (0, self.id));
                }
            }
            Stage::Nearest => {
                let own = self.is_net_member();
                self.relax = Relax {
                    single_slot: true,
                    threshold: (INF, NodeId::MAX),
                    own_source: own,
                    ..Relax::default()
                };
                if own {
                    self.relax.best.insert(0, (0, self.id));
                }
            }
            Stage::Adopt => {
                self.adopt = Adopt::default();
                if self.is_net_member() {
                    let label = self.own_label();
                    let entries = (label.pivots.len() + label.bunch.len()) as u32;
                    self.adopt.queue.push_back(LabelPart::Header { owner: self.id, entries });
                    for (level, p) in label.pivots.iter().enumerate() {
                        self.adopt.queue.push_back(LabelPart::Pivot { level: level as u8, node: p.node, dist: p.dist });
                    }
                    for e in &label.bunch {
                        self.adopt.queue.push_back(LabelPart::Bunch { level: e.level as u8, node: e.node, dist: e.dist });
                    }
                    self.adopted = Some(label);
                }
            }
        }
    }

    fn finish_stage(&mut self) {
        match self.plan.stages[self.stage] {
            Stage::Bunch(i) => {
                let mut best = if i + 1 < self.plan.k() { self.pivots[i + 1] } else { None };
                for (&v, &(d, _)) in &self.relax.best {
                    if (d, v) >= self.relax.threshold {
                        continue;
                    }
                    self.bunch.push(BunchEntry { node: v, level: i, dist: d });
                    if best.is_none_or(|b| (d, v) < b.key()) {
                        best = Some(Pivot { node: v, dist: d });
                    }
                }
                self.bunch.sort_unstable_by_key(|e| e.node);
                self.pivots[i] = best;
            }
            Stage::Nearest => {
                self.nearest = self.relax.best.get(&0).copied();
                self.nearest_via = self.relax.via.get(&0).copied();
            }
            Stage::Adopt => {
                if !self.is_net_member() {
                    self.adopted = assemble(&self.adopt.received, self.plan.k());
                }
            }
        }
    }

    fn own_label(&self) -> TzLabel {
        TzLabel {
            owner: self.id,
            k: self.plan.k(),
            pivots: self
                .pivots
                .iter()
                .map(|p| p.expect("all phases finished"))
                .collect(),
            bunch: self.bunch.clone(),
        }
    }

    /// Finishes the stage in progress; call once after the run.
    pub fn finalize(&mut self) {
        if self.started {
            self.finish_stage();
            self.started = false;
        }
    }

    pub fn label(&self) -> Option<TzLabel> {
        self.pivots.iter().all(Option::is_some).then(|| self.own_label())
    }

    pub fn nearest(&self) -> Option<(Dist, NodeId)> {
        self.nearest
    }

    pub fn adopted(&self) -> Option<&TzLabel> {
        self.adopted.as_ref()
    }

    /// Rounds at which the termination root declared each stage over.
    pub fn detected(&self) -> Option<&[Option<u64>]> {
        self.ctl.as_ref().filter(|c| c.is_root).map(|c| c.detected.as_slice())
    }

    fn push_echo(&mut self, o: Origin) {
        if let Some(ctl) = &mut self.ctl {
            ctl.queues[o.edge].push_back(Envelope::Echo { source: o.source, dist: o.dist });
        }
    }

    fn receive_data(&mut self, edge: usize, env: Envelope) {
        match (self.plan.stages[self.stage], env) {
            (Stage::Bunch(_) | Stage::Nearest, Envelope::Announce { source, dist }) => {
                let here = Origin { edge, source, dist };
                let cand = (dist.saturating_add(self.weights[edge]), source);
                let slot = self.relax.slot(source);
                let improves = cand < self.relax.threshold
                    && self.relax.best.get(&slot).is_none_or(|&b| cand < b);
                if !improves {
                    self.push_echo(here);
                    return;
                }
                self.relax.best.insert(slot, cand);
                self.relax.via.insert(slot, edge);
                if !self.relax.pending.insert(slot) {
                    if let Some(old) = self.relax.origin.remove(&slot) {
                        self.push_echo(old);
                    }
                }
                if self.detect() {
                    self.relax.origin.insert(slot, here);
                }
            }
            (Stage::Adopt, Envelope::Label(part)) => {
                if self.is_net_member() || self.nearest_via != Some(edge) {
                    return;
                }
                if let LabelPart::Header { entries, .. } = part {
                    self.adopt.expected = Some(entries);
                }
                self.adopt.received.push(part);
                self.adopt.queue.push_back(part);
            }
            (stage, env) => panic!("node {}: {:?} arrived during {:?}", self.id, env, stage),
        }
    }

    fn has_pending_data(&self) -> bool {
        match self.plan.stages[self.stage] {
            Stage::Bunch(_) | Stage::Nearest => {
                !self.relax.pending.is_empty() || (self.relax.own_source && self.stage_round == 0)
            }
            Stage::Adopt => !self.adopt.queue.is_empty(),
        }
    }

    fn broadcast(&mut self, env: Envelope, outbox: &mut [Option<Envelope>]) {
        outbox.fill(Some(env));
    }

    /// One data slot of the current stage.
    fn send_data(&mut self, outbox: &mut [Option<Envelope>]) {
        let first = self.stage_round == 0;
        self.stage_round += 1;
        match self.plan.stages[self.stage] {
            Stage::Bunch(_) | Stage::Nearest => {
                if first && self.relax.own_source {
                    let env = Envelope::Announce { source: self.id, dist: 0 };
                    self.broadcast(env, outbox);
                    let deg = outbox.len();
                    if let Some(ctl) = &mut self.ctl {
                        ctl.own_unechoed = true;
                        ctl.outstanding.insert((self.id, 0), Outstanding { remaining: deg, reply: None });
                    }
                    return;
                }
                let Some(slot) = self.relax.next_pending() else { return };
                let (dist, source) = self.relax.best[&slot];
                self.broadcast(Envelope::Announce { source, dist }, outbox);
                let reply = self.relax.origin.remove(&slot);
                let deg = outbox.len();
                if let Some(ctl) = &mut self.ctl {
                    ctl.outstanding.insert((source, dist), Outstanding { remaining: deg, reply });
                }
            }
            Stage::Adopt => {
                if let Some(part) = self.adopt.queue.pop_front() {
                    self.broadcast(Envelope::Label(part), outbox);
                }
            }
        }
    }

    fn stage_complete(&self) -> bool {
        match self.plan.stages[self.stage] {
            Stage::Bunch(_) | Stage::Nearest => {
                !self.relax.own_source || !self.ctl.as_ref().is_some_and(|c| c.own_unechoed)
            }
            Stage::Adopt => self.adopt.complete(self.is_net_member()),
        }
    }

    fn on_round_fixed(&mut self, round: u64, inbox: &[Option<Envelope>], outbox: &mut [Option<Envelope>]) {
        let offsets = self.plan.offsets.clone().expect("fixed plan");
        let end = *offsets.last().unwrap();
        if round >= end {
            return;
        }
        if !self.started && round == 0 {
            self.begin_stage();
        }
        while self.stage + 1 < self.plan.stages.len() && round >= offsets[self.stage + 1] {
            self.finish_stage();
            self.stage += 1;
            self.begin_stage();
        }
        for (edge, env) in inbox.iter().enumerate() {
            if let Some(env) = *env {
                self.receive_data(edge, env);
            }
        }
        let stage_end = offsets[self.stage + 1];
        if round + 1 == stage_end {
            // Anything still queued now could not reach its destination
            // before the next stage begins.
            if self.has_pending_data() && self.overrun.is_none() {
                self.overrun = Some(self.stage);
            }
        } else {
            self.send_data(outbox);
        }
    }

    fn on_round_detect(&mut self, round: u64, inbox: &[Option<Envelope>], outbox: &mut [Option<Envelope>]) {
        if !self.started && round == 0 {
            self.begin_stage();
        }
        for (edge, env) in inbox.iter().enumerate() {
            match *env {
                Some(Envelope::Echo { source, dist }) => self.receive_echo(source, dist),
                Some(Envelope::Complete { phase }) => {
                    let ctl = self.ctl.as_mut().unwrap();
                    ctl.children_complete[phase as usize] += 1;
                }
                Some(Envelope::Start { phase, at }) => {
                    let ctl = self.ctl.as_mut().unwrap();
                    ctl.next_start = Some((phase as usize, at));
                    for &c in &ctl.children {
                        ctl.queues[c].push_front(Envelope::Start { phase, at });
                    }
                    let _ = edge;
                }
                _ => {}
            }
        }
        if let Some((stage, at)) = self.ctl.as_ref().unwrap().next_start {
            if at == round {
                self.finish_stage();
                self.stage = stage;
                let ctl = self.ctl.as_mut().unwrap();
                ctl.next_start = None;
                ctl.complete_sent = false;
                ctl.own_unechoed = false;
                self.begin_stage();
            }
        }
        for (edge, env) in inbox.iter().enumerate() {
            if let Some(env) = *env {
                if env.is_data() {
                    self.receive_data(edge, env);
                }
            }
        }
        if round.is_multiple_of(2) {
            if self.ctl.as_ref().unwrap().next_start.is_none() {
                self.send_data(outbox);
            }
        } else {
            let ctl = self.ctl.as_mut().unwrap();
            for (slot, queue) in outbox.iter_mut().zip(ctl.queues.iter_mut()) {
                *slot = queue.pop_front();
            }
        }
        self.check_complete(round);
    }

    fn receive_echo(&mut self, source: NodeId, dist: Dist) {
        let ctl = self.ctl.as_mut().unwrap();
        let entry = ctl
            .outstanding
            .get_mut(&(source, dist))
            .unwrap_or_else(|| panic!("node {}: unexpected echo for <{source}, {dist}>", self.id));
        entry.remaining -= 1;
        if entry.remaining > 0 {
            return;
        }
        let done = ctl.outstanding.remove(&(source, dist)).unwrap();
        match done.reply {
            Some(o) => ctl.queues[o.edge].push_back(Envelope::Echo { source: o.source, dist: o.dist }),
            None => ctl.own_unechoed = false,
        }
    }

    fn check_complete(&mut self, round: u64) {
        let complete = self.stage_complete();
        let stage = self.stage;
        let last = self.plan.stages.len() - 1;
        let ctl = self.ctl.as_mut().unwrap();
        if ctl.complete_sent
            || ctl.next_start.is_some()
            || !complete
            || ctl.children_complete[stage] < ctl.children.len()
        {
            return;
        }
        ctl.complete_sent = true;
        if !ctl.is_root {
            let parent = ctl.parent.expect("non-root has a parent");
            ctl.queues[parent].push_back(Envelope::Complete { phase: stage as u32 });
            return;
        }
        ctl.detected[stage] = Some(round);
        if stage == last {
            ctl.finished = true;
            return;
        }
        let mut at = round + 2 * ctl.height + 2;
        at += at % 2;
        ctl.next_start = Some((stage + 1, at));
        for &c in &ctl.children {
            ctl.queues[c].push_front(Envelope::Start { phase: (stage + 1) as u32, at });
        }
    }
}

impl NodeProcess for SketchNode {
    fn on_round(&mut self, round: u64, inbox: &[Option<Envelope>], outbox: &mut [Option<Envelope>]) {
        self.last_round = Some(round);
        if self.detect() {
            self.on_round_detect(round, inbox, outbox);
        } else {
            self.on_round_fixed(round, inbox, outbox);
        }
    }

    fn is_done(&self) -> bool {
        match (&self.ctl, &self.plan.offsets) {
            (Some(ctl), _) => {
                let quiet = ctl.queues.iter().all(VecDeque::is_empty)
                    && ctl.outstanding.is_empty()
                    && self.relax.pending.is_empty()
                    && self.adopt.queue.is_empty();
                let over = if ctl.is_root {
                    ctl.finished
                } else {
                    ctl.complete_sent && self.stage + 1 == self.plan.stages.len()
                };
                quiet && over
            }
            (None, Some(offsets)) => {
                let end = *offsets.last().unwrap();
                self.last_round.is_some_and(|r| r + 1 >= end)
            }
            (None, None) => true,
        }
    }

    fn phase(&self) -> usize {
        self.stage
    }

    fn nonempty_queues(&self) -> usize {
        self.relax.pending.len()
    }

    fn idle_until(&self) -> Option<u64> {
        let offsets = self.plan.offsets.as_ref()?;
        if self.is_done() {
            return Some(u64::MAX);
        }
        let r = self.last_round?;
        if self.has_pending_data() {
            return None;
        }
        let boundary = match offsets.get(self.stage + 1) {
            Some(&b) if self.stage + 1 < self.plan.stages.len() => b,
            _ => offsets.last().unwrap() - 1,
        };
        (boundary > r + 1).then_some(boundary)
    }
}

/// Rebuilds a label from its streamed parts; `None` if incomplete.
fn assemble(parts: &[LabelPart], k: usize) -> Option<TzLabel> {
    let (owner, entries) = match parts.first()? {
        LabelPart::Header { owner, entries } => (*owner, *entries as usize),
        _ => return None,
    };
    if parts.len() != entries + 1 {
        return None;
    }
    let mut pivots = vec![None; k];
    let mut bunch = Vec::new();
    for part in &parts[1..] {
        match *part {
            LabelPart::Pivot { level, node, dist } => *pivots.get_mut(level as usize)? = Some(Pivot { node, dist }),
            LabelPart::Bunch { level, node, dist } => bunch.push(BunchEntry { node, level: level as usize, dist }),
            LabelPart::Header { .. } => return None,
        }
    }
    bunch.sort_unstable_by_key(|e| e.node);
    Some(TzLabel { owner, k, pivots: pivots.into_iter().collect::<Option<_>>()?, bunch })
}

//! The simulated network and the per-update driver.

use std::collections::BTreeSet;

use serde::Serialize;

use super::cascade::{CascadeAudit, CascadeReport};
use super::chains::Leave;
use super::engine::{field_id, Ctx, Engine, Msg, Protocol, Tag, TraceLine, NIL};
use super::node::{Chain, Event, Node, OutRec};
use crate::error::{Error, Result};
use crate::graph::{InsertRule, OrientedGraph, VertexId};
use crate::metrics::Metrics;
use crate::oracles::check_maximal_matching;
use crate::seq::{UpdateOp, UpdateSequence};

/// Entries per unit of `Δ + 2` a node may store.
pub const MEM_FACTOR: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DistConfig {
    pub delta: u32,
    pub alpha: u32,
    /// Maintain a maximal matching on top of the orientation.
    pub matching: bool,
    /// Rounds allowed per update stage.
    pub round_limit: u64,
    /// Check chains, orientation, matching and wakeups after every update.
    pub audit: bool,
    pub insert_rule: InsertRule,
}

impl DistConfig {
    /// `Δ = 7α`, the smallest multiple that leaves `Δ - 5α ≥ 2α`.
    pub fn new(alpha: u32) -> Self {
        DistConfig::with_delta(7 * alpha, alpha)
    }

    pub fn with_delta(delta: u32, alpha: u32) -> Self {
        DistConfig {
            delta,
            alpha,
            matching: false,
            round_limit: 10_000,
            audit: true,
            insert_rule: InsertRule::ArbitraryFixed,
        }
    }

    pub fn matching(mut self, on: bool) -> Self {
        self.matching = on;
        self
    }

    pub fn audit(mut self, on: bool) -> Self {
        self.audit = on;
        self
    }

    pub fn round_limit(mut self, limit: u64) -> Self {
        self.round_limit = limit;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha == 0 || self.delta < 7 * self.alpha {
            return Err(Error::Config(format!(
                "distributed anti-reset needs delta >= 7*alpha (delta - 5*alpha >= 2*alpha), got delta={}, alpha={}",
                self.delta, self.alpha
            )));
        }
        Ok(())
    }

    /// Largest colored load at which a node uncolors.
    pub fn cascade_limit(&self) -> usize {
        5 * self.alpha as usize
    }

    pub fn mem_budget(&self) -> usize {
        MEM_FACTOR * (self.delta as usize + 2)
    }
}

/// What one update cost.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct OpReport {
    pub rounds: u64,
    pub messages: u64,
    pub cascade: Option<CascadeReport>,
}

pub struct DistSim {
    pub cfg: DistConfig,
    pub(crate) nodes: Vec<Option<Node>>,
    /// Reference orientation, updated where nodes make decisions.
    pub(crate) truth: OrientedGraph,
    pub engine: Engine,
    pub(crate) cascade: Option<CascadeAudit>,
    pub(crate) mate_changed: BTreeSet<VertexId>,
    /// Vertex set of the cascade run by the current update, if any.
    pub(crate) last_members: BTreeSet<VertexId>,
    executed: BTreeSet<VertexId>,
    pub cascades: Vec<CascadeReport>,
    pub rounds: u64,
    pub ops: u64,
    pub peak_mem: usize,
    /// Largest `entries / (records + 1)` seen at a round boundary.
    pub peak_mem_ratio: f64,
}

impl DistSim {
    pub fn new(cfg: DistConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(DistSim {
            cfg,
            nodes: Vec::new(),
            truth: OrientedGraph::new(),
            engine: Engine::new(),
            cascade: None,
            mate_changed: BTreeSet::new(),
            last_members: BTreeSet::new(),
            executed: BTreeSet::new(),
            cascades: Vec::new(),
            rounds: 0,
            ops: 0,
            peak_mem: 0,
            peak_mem_ratio: 0.0,
        })
    }

    pub fn graph(&self) -> &OrientedGraph {
        &self.truth
    }

    pub(crate) fn inner_threshold(&self) -> usize {
        (self.cfg.delta - 5 * self.cfg.alpha) as usize
    }

    pub(crate) fn node(&self, v: VertexId) -> Result<&Node> {
        self.nodes
            .get(v.idx())
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Protocol(format!("{v} is not a live node")))
    }

    fn node_mut(&mut self, v: VertexId) -> Result<&mut Node> {
        self.nodes
            .get_mut(v.idx())
            .and_then(Option::as_mut)
            .ok_or_else(|| Error::Protocol(format!("{v} is not a live node")))
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.node(v).ok().and_then(|n| n.mate)
    }

    pub fn matching(&self) -> Vec<(VertexId, VertexId)> {
        self.truth
            .vertices()
            .filter_map(|v| self.mate(v).filter(|&w| v < w).map(|w| (v, w)))
            .collect()
    }

    /// Current stored entries at `v`.
    pub fn mem_of(&self, v: VertexId) -> usize {
        self.node(v).map_or(0, Node::mem)
    }

    pub fn metrics(&self) -> Metrics {
        let mut m = self.truth.metrics().clone();
        m.rounds = self.rounds;
        m.messages = self.engine.messages;
        m.peak_mem_entries = self.peak_mem as u64;
        m
    }

    pub fn record_trace(&mut self, on: bool) {
        self.engine.record_trace(on);
    }

    pub fn trace(&self) -> &[TraceLine] {
        self.engine.trace()
    }

    fn push_event(&mut self, v: VertexId, e: Event) -> Result<()> {
        self.node_mut(v)?.events.push(e);
        self.engine.wake(v);
        Ok(())
    }

    fn settle(&mut self) -> Result<u64> {
        let limit = self.cfg.round_limit;
        let mut engine = std::mem::take(&mut self.engine);
        let r = engine.run_until_quiescent(self, limit);
        self.engine = engine;
        let used = r?;
        self.rounds += used;
        Ok(used)
    }

    /// Applies one update and runs the network until it is quiet again.
    pub fn op(&mut self, op: &UpdateOp) -> Result<OpReport> {
        let msgs0 = self.engine.messages;
        let rounds0 = self.rounds;
        self.executed.clear();
        self.mate_changed.clear();
        self.last_members.clear();
        self.ops += 1;
        let mut touched: BTreeSet<VertexId> = op.endpoints().into_iter().collect();
        let mut searchers = Vec::new();
        let mut proposal = None;

        match *op {
            UpdateOp::InsertVertex(v) => {
                self.truth.insert_vertex(v)?;
                if self.nodes.len() <= v.idx() {
                    self.nodes.resize_with(v.idx() + 1, || None);
                }
                self.nodes[v.idx()] = Some(Node::default());
            }
            UpdateOp::InsertEdge(u, v) | UpdateOp::InsertDirected(u, v) => {
                let (tail, head) = if let UpdateOp::InsertDirected(..) = op {
                    self.truth.insert_directed(u, v)?;
                    (u, v)
                } else {
                    self.truth.insert_edge(u, v, self.cfg.insert_rule)?
                };
                self.push_event(tail, Event::AddOut(head))?;
                proposal = Some((tail, head));
            }
            UpdateOp::DeleteEdge(u, v) => {
                let (tail, head) = self.truth.delete_edge(u, v)?;
                self.push_event(tail, Event::DropOut(head))?;
                if self.mate(u) == Some(v) {
                    self.push_event(u, Event::Freed)?;
                    self.push_event(v, Event::Freed)?;
                    searchers = vec![u, v];
                }
            }
            UpdateOp::DeleteVertex(v) => {
                self.truth.check_live(v)?;
                touched.extend(self.truth.neighbors(v));
                let ins: Vec<VertexId> = self.truth.in_neighbors(v).iter().copied().collect();
                let mate = self.mate(v);
                self.truth.delete_vertex(v)?;
                self.push_event(v, Event::Die)?;
                for x in ins {
                    self.push_event(x, Event::ParentGone(v))?;
                }
                if let Some(w) = mate {
                    self.push_event(w, Event::Freed)?;
                    searchers = vec![w];
                }
            }
            UpdateOp::Query(..) | UpdateOp::SetValue(..) => {
                self.truth.apply_raw(op, self.cfg.insert_rule)?;
            }
        }
        self.settle()?;
        let cascade = self.finish_cascade()?;
        if let Some(c) = &cascade {
            self.cascades.push(c.clone());
        }

        if self.cfg.matching {
            if let Some((tail, head)) = proposal {
                if self.mate(tail).is_none() && self.mate(head).is_none() {
                    self.push_event(tail, Event::ProposeTo(head))?;
                }
            }
            for s in searchers {
                self.push_event(s, Event::Search)?;
            }
            self.settle()?;
        }

        if let UpdateOp::DeleteVertex(v) = *op {
            let node = self.node(v)?;
            if !node.out.is_empty() {
                return Err(Error::Protocol(format!("{v} still holds records after deletion")));
            }
            self.nodes[v.idx()] = None;
        }
        self.truth.note_steady();
        if self.cfg.audit {
            self.audit_op(&touched)?;
        }
        Ok(OpReport {
            rounds: self.rounds - rounds0,
            messages: self.engine.messages - msgs0,
            cascade,
        })
    }

    pub fn run(&mut self, seq: &UpdateSequence) -> Result<Vec<OpReport>> {
        seq.iter()
            .enumerate()
            .map(|(i, op)| self.op(op).map_err(|e| e.at(i)))
            .collect()
    }

    /// Chains equal true in-neighbor sets, node out-records equal the
    /// reference orientation, the matching is maximal.
    pub fn check_representation(&self) -> Result<()> {
        for v in self.truth.vertices() {
            let node = self.node(v)?;
            let outs: Vec<VertexId> = node.live_out().map(|(&w, _)| w).collect();
            let want: Vec<VertexId> = self.truth.out_neighbors(v).iter().copied().collect();
            if outs != want || node.out.len() != outs.len() {
                return Err(Error::Protocol(format!("{v} holds out-records {outs:?}, expected {want:?}")));
            }
            if node.has_chain_work() {
                return Err(Error::Protocol(format!("{v} has unfinished chain work at quiescence")));
            }
            let mut sib = self.walk_chain(v, Chain::Sib)?;
            sib.sort_unstable();
            let ins: Vec<VertexId> = self.truth.in_neighbors(v).iter().copied().collect();
            if sib != ins {
                return Err(Error::Protocol(format!("sibling chain of {v} is {sib:?}, in-neighbors {ins:?}")));
            }
            let mut free = self.walk_chain(v, Chain::Free)?;
            free.sort_unstable();
            let want_free: Vec<VertexId> = if self.cfg.matching {
                ins.iter().copied().filter(|&x| self.mate(x).is_none()).collect()
            } else {
                Vec::new()
            };
            if free != want_free {
                return Err(Error::Protocol(format!(
                    "free chain of {v} is {free:?}, free in-neighbors {want_free:?}"
                )));
            }
            if let Some(w) = node.mate {
                if self.mate(w) != Some(v) || !self.truth.has_edge(v, w) {
                    return Err(Error::Protocol(format!("{v} is matched to {w} one-sidedly")));
                }
            }
        }
        if self.cfg.matching {
            check_maximal_matching(&self.truth, &self.matching())
                .map_err(|e| Error::Protocol(format!("matching: {e:?}")))?;
        }
        Ok(())
    }

    fn audit_op(&mut self, touched: &BTreeSet<VertexId>) -> Result<()> {
        self.check_representation()?;
        // nodes that changed: endpoints, cascade vertices, new mates; work
        // may reach their neighbors and, through chains, their neighbors'
        // other in-neighbors
        let mut seed: BTreeSet<VertexId> = touched.clone();
        seed.extend(self.last_members.iter().copied());
        seed.extend(self.mate_changed.iter().copied());
        let mut allowed = seed.clone();
        for _ in 0..2 {
            let frontier: Vec<VertexId> = allowed.iter().copied().collect();
            for v in frontier {
                if self.truth.is_live(v) {
                    allowed.extend(self.truth.neighbors(v));
                }
            }
        }
        if let Some(&v) = self.executed.iter().find(|v| !allowed.contains(v)) {
            return Err(Error::Protocol(format!("{v} woke up but is not near the update")));
        }
        Ok(())
    }

    fn run_node(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node, inbox: &[Msg]) -> Result<()> {
        for e in std::mem::take(&mut node.events) {
            match e {
                Event::AddOut(w) => {
                    let free = self.cfg.matching && node.is_free();
                    node.out.insert(w, OutRec::live(free));
                    if node.outdegree() > self.cfg.delta as usize {
                        self.start_cascade(ctx, v, node)?;
                    }
                }
                Event::DropOut(w) => {
                    let rec = node
                        .out
                        .get_mut(&w)
                        .ok_or_else(|| Error::Protocol(format!("{v} deletes missing edge to {w}")))?;
                    rec.gone = true;
                    rec.colored = false;
                    for m in rec.chain.iter_mut() {
                        m.want = false;
                    }
                }
                Event::ParentGone(w) => {
                    node.out.remove(&w);
                }
                Event::Freed => self.set_mate(v, node, None),
                Event::Search => self.start_search(ctx, v, node),
                Event::ProposeTo(w) => self.propose_to(ctx, v, node, w),
                Event::Die => {
                    node.dying = true;
                    node.mate = None;
                    node.head = [None, None];
                    node.joins = [Vec::new(), Vec::new()];
                    for rec in node.out.values_mut() {
                        rec.gone = true;
                        for m in rec.chain.iter_mut() {
                            m.want = false;
                        }
                    }
                }
            }
        }

        let mut explorers = Vec::new();
        let mut pingers = Vec::new();
        let mut leaves: [Vec<Leave>; 2] = [Vec::new(), Vec::new()];
        for m in inbox {
            let src = m.src;
            let [a, b, c] = m.payload;
            match m.tag {
                Tag::Explore => explorers.push(src),
                Tag::Reject => self.on_reply(v, node, src, None)?,
                Tag::Done => self.on_reply(v, node, src, Some(a as u32))?,
                Tag::Wake => self.on_wake(ctx, v, node, a as u64)?,
                Tag::Ping => pingers.push(src),
                Tag::Flip => self.on_flip(v, node, src, a == 1)?,
                Tag::Join => {
                    let kind = chain_of(a)?;
                    if !node.dying {
                        node.joins[kind as usize].push(src);
                    }
                }
                Tag::Leave => {
                    let kind = chain_of(a)?;
                    if ctx.round() % 2 == 1 {
                        return Err(Error::Protocol(format!("leave from {src} arrived at {v} on an odd round")));
                    }
                    leaves[kind as usize].push((src, field_id(b), field_id(c)));
                }
                Tag::SetLink => self.set_link(v, node, src, chain_of(a)?, b, c)?,
                Tag::Probe => ctx.send(v, src, Tag::Status, [i64::from(node.is_free()), NIL, NIL]),
                Tag::Status => self.on_status(node, src, a == 1),
                Tag::Propose => self.on_propose(ctx, v, node, src),
                Tag::Accept => self.on_accept(v, node, src),
                Tag::Refuse => self.on_refuse(ctx, v, node),
                Tag::Note => {}
            }
        }

        if !explorers.is_empty() {
            self.on_explore(ctx, v, node, &explorers)?;
        }
        self.maybe_report(ctx, v, node);
        self.phase_three(ctx, v, node, &pingers)?;
        self.advance_search(ctx, v, node);

        if ctx.round() % 2 == 0 && !node.dying {
            for kind in Chain::ALL {
                let k = kind as usize;
                if !leaves[k].is_empty() || !node.joins[k].is_empty() {
                    self.batch(ctx, v, node, kind, &leaves[k]);
                }
            }
        }
        self.pump(ctx, v, node);
        if node.has_chain_work() {
            ctx.wake_next(v);
        }
        Ok(())
    }
}

fn chain_of(x: i64) -> Result<Chain> {
    Chain::from_field(x).ok_or_else(|| Error::Protocol(format!("bad chain tag {x}")))
}

impl Protocol for DistSim {
    fn execute(&mut self, ctx: &mut Ctx, v: VertexId, inbox: &[Msg]) -> Result<()> {
        let mut node = self
            .nodes
            .get_mut(v.idx())
            .and_then(Option::take)
            .ok_or_else(|| Error::Protocol(format!("message for {v}, which does not exist")))?;
        let r = self.run_node(ctx, v, &mut node, inbox);
        self.nodes[v.idx()] = Some(node);
        r
    }

    fn end_round(&mut self, round: u64, executed: &[VertexId]) -> Result<()> {
        self.cascade_round_end(round)?;
        let budget = self.cfg.mem_budget();
        for &v in executed {
            self.executed.insert(v);
            let node = self.node(v)?;
            let entries = node.mem();
            // records awaiting graceful removal still count as edges
            let outdeg = node.out.len();
            if entries > budget {
                return Err(Error::Memory {
                    node: v,
                    entries,
                    budget,
                });
            }
            self.peak_mem = self.peak_mem.max(entries);
            let ratio = entries as f64 / (outdeg + 1) as f64;
            if ratio > self.peak_mem_ratio {
                self.peak_mem_ratio = ratio;
            }
        }
        Ok(())
    }

    fn mem(&self, v: VertexId) -> usize {
        self.mem_of(v)
    }
}

//! Distributed anti-reset cascade.
//!
//! Three phases, started by a node whose outdegree passed `Δ`:
//!
//! 1. Exploration. The trigger sends `explore` on its out-edges. A node
//!    reached for the first time adopts the smallest sender as its tree
//!    parent and rejects the others. If its outdegree exceeds `Δ - 5α` it
//!    colors its out-edges and explores further; otherwise it is a leaf.
//!    Replies flow back up the tree, carrying subtree heights.
//! 2. Countdown. The trigger, knowing the height `h`, sends `h - 1` down the
//!    tree; a node at depth `i` receives `h - i`, forwards one less and
//!    fires that many rounds later, so all nodes fire together.
//! 3. Uncoloring, in pairs of rounds. First every node with colored
//!    out-edges pings along them. Then every node whose colored out-edges
//!    plus received pings number at most `5α` turns the pinged edges
//!    outward and uncolors all its colored edges.

use std::collections::BTreeSet;

use serde::Serialize;

use super::engine::{Ctx, Tag, NIL};
use super::node::{CascadeScratch, Chain, Link, Node, OutRec};
use super::sim::DistSim;
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// What one distributed cascade did.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CascadeReport {
    pub trigger: u32,
    /// Vertices reached by the exploration (the cascade's vertex set).
    pub nodes: usize,
    pub internal: usize,
    /// Colored edges.
    pub edges: usize,
    /// Uncoloring rounds (the second round of each pair).
    pub rounds: u32,
    /// Per uncoloring round: edges uncolored, edges still colored after.
    pub per_round: Vec<(usize, usize)>,
    /// Pings and flip notices.
    pub messages: u64,
    pub flips: u64,
    /// Largest outdegree reached while the cascade ran.
    pub peak_outdeg: usize,
    /// Largest final outdegree among internal vertices.
    pub internal_final_max: usize,
    /// Largest final outdegree among the other reached vertices.
    pub boundary_final_max: usize,
}

impl CascadeReport {
    /// Every uncoloring round removed at least as many colored edges as it
    /// left behind.
    pub fn halves_each_round(&self) -> bool {
        self.per_round.iter().all(|&(done, left)| done >= left)
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct CascadeAudit {
    pub trigger: VertexId,
    pub members: BTreeSet<VertexId>,
    pub internal: BTreeSet<VertexId>,
    pub colored: BTreeSet<(VertexId, VertexId)>,
    pub edges: usize,
    pub fire_at: Option<u64>,
    pub per_round: Vec<(usize, usize)>,
    pub uncolored_now: usize,
    pub messages: u64,
    pub flips: u64,
    pub peak_outdeg: usize,
}

impl DistSim {
    fn audit(&mut self) -> Result<&mut CascadeAudit> {
        self.cascade
            .as_mut()
            .ok_or_else(|| Error::Protocol("cascade message outside a cascade".into()))
    }

    fn color_and_explore(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) -> Result<()> {
        let outs: Vec<VertexId> = node.live_out().map(|(&w, _)| w).collect();
        for &w in &outs {
            node.out.get_mut(&w).expect("live record").colored = true;
            ctx.send(v, w, Tag::Explore, [NIL, NIL, NIL]);
        }
        let audit = self.audit()?;
        audit.internal.insert(v);
        for &w in &outs {
            audit.colored.insert((v, w));
        }
        audit.edges += outs.len();
        node.cascade.as_mut().expect("scratch").awaiting = outs.len() as u32;
        Ok(())
    }

    pub(crate) fn start_cascade(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) -> Result<()> {
        if self.cascade.is_some() {
            return Err(Error::Protocol(format!("second cascade triggered at {v}")));
        }
        self.cascade = Some(CascadeAudit {
            trigger: v,
            members: BTreeSet::from([v]),
            peak_outdeg: node.outdegree(),
            ..Default::default()
        });
        node.cascade = Some(CascadeScratch::default());
        self.color_and_explore(ctx, v, node)
    }

    /// Handles this round's explore messages (senders sorted by id).
    pub(crate) fn on_explore(
        &mut self,
        ctx: &mut Ctx,
        v: VertexId,
        node: &mut Node,
        senders: &[VertexId],
    ) -> Result<()> {
        let mut rest = senders;
        if node.cascade.is_none() {
            let parent = senders[0];
            rest = &senders[1..];
            node.cascade = Some(CascadeScratch {
                tree_parent: Some(parent),
                ..Default::default()
            });
            self.audit()?.members.insert(v);
            if node.outdegree() > self.inner_threshold() {
                self.color_and_explore(ctx, v, node)?;
            } else {
                ctx.send(v, parent, Tag::Done, [0, NIL, NIL]);
                node.cascade.as_mut().expect("scratch").reported = true;
            }
        }
        for &s in rest {
            ctx.send(v, s, Tag::Reject, [NIL, NIL, NIL]);
        }
        Ok(())
    }

    pub(crate) fn on_reply(&mut self, v: VertexId, node: &mut Node, src: VertexId, height: Option<u32>) -> Result<()> {
        let scratch = node
            .cascade
            .as_mut()
            .ok_or_else(|| Error::Protocol(format!("reply from {src} to {v} outside exploration")))?;
        scratch.awaiting = scratch
            .awaiting
            .checked_sub(1)
            .ok_or_else(|| Error::Protocol(format!("unexpected reply from {src} at {v}")))?;
        if let Some(h) = height {
            scratch.height = scratch.height.max(h + 1);
            node.out
                .get_mut(&src)
                .ok_or_else(|| Error::Protocol(format!("tree child {src} of {v} is not an out-neighbor")))?
                .child = true;
        }
        Ok(())
    }

    fn send_countdown(ctx: &mut Ctx, v: VertexId, node: &mut Node, count: u64) {
        for (&w, rec) in node.out.iter_mut() {
            if rec.child {
                rec.child = false;
                ctx.send(v, w, Tag::Wake, [count as i64, NIL, NIL]);
            }
        }
    }

    /// Sends the convergecast reply, or at the trigger starts the countdown.
    pub(crate) fn maybe_report(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) {
        let Some(s) = node.cascade.as_mut() else {
            return;
        };
        if s.reported || s.awaiting > 0 {
            return;
        }
        s.reported = true;
        match s.tree_parent {
            Some(p) => ctx.send(v, p, Tag::Done, [s.height as i64, NIL, NIL]),
            None => {
                let h = s.height as u64;
                s.fire_at = Some(ctx.round() + h);
                ctx.wake_at(v, ctx.round() + h);
                Self::send_countdown(ctx, v, node, h.saturating_sub(1));
            }
        }
    }

    pub(crate) fn on_wake(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node, count: u64) -> Result<()> {
        let s = node
            .cascade
            .as_mut()
            .ok_or_else(|| Error::Protocol(format!("countdown at {v} outside a cascade")))?;
        let at = ctx.round() + count;
        // keep the earliest firing time
        if s.fire_at.map_or(true, |f| at < f) {
            s.fire_at = Some(at);
            if at > ctx.round() {
                ctx.wake_at(v, at);
            }
        }
        if count > 0 {
            Self::send_countdown(ctx, v, node, count - 1);
        }
        Ok(())
    }

    /// Fires if due, then takes this round's phase-three step.
    pub(crate) fn phase_three(
        &mut self,
        ctx: &mut Ctx,
        v: VertexId,
        node: &mut Node,
        pingers: &[VertexId],
    ) -> Result<()> {
        let round = ctx.round();
        if let Some(s) = node.cascade.as_mut() {
            if !s.fired && s.fire_at == Some(round) {
                s.fired = true;
                s.tree_parent = None;
                let audit = self.audit()?;
                match audit.fire_at {
                    None => audit.fire_at = Some(round),
                    Some(f) if f != round => {
                        return Err(Error::Protocol(format!("{v} fired at {round}, others at {f}")))
                    }
                    _ => {}
                }
            }
        }
        let fired_at = node.cascade.as_ref().filter(|s| s.fired).and_then(|s| s.fire_at);
        let colored = node.colored_out();
        if fired_at.is_some() && colored == 0 && pingers.is_empty() {
            node.cascade = None;
            return Ok(());
        }
        let pinging = fired_at.is_some_and(|f| (round - f) % 2 == 0);
        if pinging && colored > 0 {
            for (&w, rec) in node.live_out() {
                if rec.colored {
                    ctx.send(v, w, Tag::Ping, [NIL, NIL, NIL]);
                }
            }
            self.audit()?.messages += colored as u64;
            ctx.wake_next(v);
            return Ok(());
        }
        if fired_at.is_none() && pingers.is_empty() {
            return Ok(());
        }
        // deciding round
        let load = colored + pingers.len();
        if load == 0 {
            node.cascade = None;
            return Ok(());
        }
        if load > self.cfg.cascade_limit() {
            if colored > 0 {
                ctx.wake_next(v);
            }
            return Ok(());
        }
        let free = self.cfg.matching && node.is_free();
        for &x in pingers {
            if node.out.contains_key(&x) {
                return Err(Error::Protocol(format!("{v} flips {x}->{v} but already holds a record for {x}")));
            }
            let mut rec = OutRec::live(free);
            for m in rec.chain.iter_mut().filter(|m| m.want) {
                m.link = Link::Joining;
            }
            node.out.insert(x, rec);
            ctx.send(v, x, Tag::Flip, [i64::from(free), NIL, NIL]);
            self.truth.flip(x, v)?;
        }
        let mut uncolored = Vec::new();
        for (&w, rec) in node.out.iter_mut() {
            if rec.colored {
                rec.colored = false;
                uncolored.push((v, w));
            }
        }
        let peak = self.truth.out_len(v);
        let audit = self.audit()?;
        for &x in pingers {
            if audit.colored.remove(&(x, v)) {
                audit.uncolored_now += 1;
            }
        }
        for e in uncolored {
            if audit.colored.remove(&e) {
                audit.uncolored_now += 1;
            }
        }
        audit.messages += pingers.len() as u64;
        audit.flips += pingers.len() as u64;
        audit.peak_outdeg = audit.peak_outdeg.max(peak);
        node.cascade = None;
        Ok(())
    }

    /// Member side of a flip: the edge to `p` now points at us.
    pub(crate) fn on_flip(&mut self, v: VertexId, node: &mut Node, p: VertexId, p_free: bool) -> Result<()> {
        let rec = node
            .out
            .get_mut(&p)
            .filter(|r| !r.gone)
            .ok_or_else(|| Error::Protocol(format!("{p} flipped {v}->{p}, but {v} has no such edge")))?;
        rec.gone = true;
        rec.colored = false;
        for m in rec.chain.iter_mut() {
            m.want = false;
        }
        node.joins[Chain::Sib as usize].push(p);
        if p_free {
            node.joins[Chain::Free as usize].push(p);
        }
        Ok(())
    }

    /// Closes the books on a finished cascade.
    pub(crate) fn finish_cascade(&mut self) -> Result<Option<CascadeReport>> {
        let Some(a) = self.cascade.take() else {
            return Ok(None);
        };
        if !a.colored.is_empty() {
            return Err(Error::Protocol(format!(
                "cascade from {} ended with {} colored edges",
                a.trigger,
                a.colored.len()
            )));
        }
        self.last_members = a.members.clone();
        let mut report = CascadeReport {
            trigger: a.trigger.0,
            nodes: a.members.len(),
            internal: a.internal.len(),
            edges: a.edges,
            rounds: a.per_round.len() as u32,
            per_round: a.per_round,
            messages: a.messages,
            flips: a.flips,
            peak_outdeg: a.peak_outdeg,
            ..Default::default()
        };
        for &x in &a.members {
            let d = self.truth.out_len(x);
            if a.internal.contains(&x) {
                report.internal_final_max = report.internal_final_max.max(d);
            } else {
                report.boundary_final_max = report.boundary_final_max.max(d);
            }
        }
        Ok(Some(report))
    }

    /// Per-round bookkeeping once every node of the round ran.
    pub(crate) fn cascade_round_end(&mut self, round: u64) -> Result<()> {
        let Some(a) = self.cascade.as_mut() else {
            return Ok(());
        };
        let Some(f) = a.fire_at else {
            return Ok(());
        };
        if round <= f || (round - f) % 2 == 0 {
            return Ok(());
        }
        let done = std::mem::take(&mut a.uncolored_now);
        if done == 0 && a.colored.is_empty() {
            return Ok(());
        }
        if done == 0 {
            return Err(Error::Protocol(format!(
                "cascade from {} stalled with {} colored edges",
                a.trigger,
                a.colored.len()
            )));
        }
        a.per_round.push((done, a.colored.len()));
        Ok(())
    }
}

//! Distributed maximal matching over the chain representation.
//!
//! Status changes travel as free-chain joins and leaves, one message per
//! out-neighbor. A node that needs a partner probes all out-neighbors in one
//! round and proposes to the smallest free one; failing that it proposes to
//! the head of its free-in chain. A refused proposal restarts the search a
//! few rounds later, once chains have caught up.

use super::engine::{Ctx, Tag, NIL};
use super::node::{Chain, Node, Search};
use super::sim::DistSim;
use crate::graph::VertexId;

/// Rounds to wait after a refusal before searching again.
const RETRY_DELAY: u64 = 3;

impl DistSim {
    pub(crate) fn set_free_wants(&self, node: &mut Node) {
        let want = self.cfg.matching && node.is_free();
        for rec in node.out.values_mut().filter(|r| !r.gone) {
            rec.chain[Chain::Free as usize].want = want;
        }
    }

    pub(crate) fn set_mate(&mut self, v: VertexId, node: &mut Node, mate: Option<VertexId>) {
        node.mate = mate;
        self.mate_changed.insert(v);
        self.set_free_wants(node);
    }

    pub(crate) fn start_search(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) {
        if !node.is_free() || node.search.is_some() {
            return;
        }
        let outs: Vec<VertexId> = node.live_out().map(|(&w, _)| w).collect();
        for &w in &outs {
            ctx.send(v, w, Tag::Probe, [NIL, NIL, NIL]);
        }
        node.search = Some(Search {
            awaiting: outs.len() as u32,
            ..Default::default()
        });
    }

    pub(crate) fn propose_to(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node, w: VertexId) {
        if !node.is_free() || node.search.is_some() {
            return;
        }
        ctx.send(v, w, Tag::Propose, [NIL, NIL, NIL]);
        node.search = Some(Search {
            proposed: Some(w),
            single: true,
            ..Default::default()
        });
    }

    pub(crate) fn on_status(&mut self, node: &mut Node, src: VertexId, free: bool) {
        if let Some(s) = node.search.as_mut() {
            s.awaiting = s.awaiting.saturating_sub(1);
            if free && s.best.map_or(true, |b| src < b) {
                s.best = Some(src);
            }
        }
    }

    pub(crate) fn on_propose(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node, src: VertexId) {
        let busy = node.search.as_ref().is_some_and(|s| s.proposed.is_some());
        if node.is_free() && !busy {
            node.search = None;
            self.set_mate(v, node, Some(src));
            ctx.send(v, src, Tag::Accept, [NIL, NIL, NIL]);
        } else {
            ctx.send(v, src, Tag::Refuse, [NIL, NIL, NIL]);
        }
    }

    pub(crate) fn on_accept(&mut self, v: VertexId, node: &mut Node, src: VertexId) {
        node.search = None;
        self.set_mate(v, node, Some(src));
    }

    pub(crate) fn on_refuse(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) {
        let single = node.search.as_ref().is_some_and(|s| s.single);
        node.search = None;
        if !single {
            let at = ctx.round() + RETRY_DELAY;
            node.retry_at = Some(at);
            ctx.wake_at(v, at);
        }
    }

    /// Proposes once all probe replies are in.
    pub(crate) fn advance_search(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) {
        if node.retry_at == Some(ctx.round()) {
            node.retry_at = None;
            self.start_search(ctx, v, node);
        }
        let Some(s) = node.search.as_mut() else {
            return;
        };
        if s.proposed.is_some() || s.awaiting > 0 {
            return;
        }
        match s.best.or(node.head[Chain::Free as usize]) {
            Some(w) => {
                s.proposed = Some(w);
                ctx.send(v, w, Tag::Propose, [NIL, NIL, NIL]);
            }
            None => node.search = None,
        }
    }
}

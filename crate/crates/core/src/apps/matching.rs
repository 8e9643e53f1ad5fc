//! Maximal matching on top of a low-outdegree orientation.
//!
//! Every vertex keeps the set of its free in-neighbors. A vertex whose
//! status changes tells its out-neighbors; a vertex that lost its mate first
//! takes a free in-neighbor if it has one and otherwise scans its
//! out-neighbors. Both steps cost `O(outdegree)`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::flipgame::GameMode;
use crate::graph::{Applied, InsertRule, OrientedGraph, VertexId};
use crate::orient::Orienter;
use crate::seq::UpdateOp;

/// How the orientation underneath the matching is maintained.
#[derive(Debug, Clone)]
pub enum MatchEngine {
    /// Cascades keep every outdegree within the orienter's threshold.
    Orient(Orienter),
    /// No cascades; a vertex that scans its out-neighbors is reset
    /// afterwards (always, or only above the threshold).
    Game(GameMode),
}

#[derive(Debug, Clone)]
pub struct Matching {
    pub g: OrientedGraph,
    engine: MatchEngine,
    rule: InsertRule,
    mate: Vec<Option<VertexId>>,
    free_in: Vec<BTreeSet<VertexId>>,
    /// Edge updates, flips and scanned entries.
    pub work: u64,
}

impl Matching {
    pub fn new(engine: MatchEngine) -> Self {
        let rule = match &engine {
            MatchEngine::Orient(o) => o.cfg.insert_rule,
            MatchEngine::Game(_) => InsertRule::ArbitraryFixed,
        };
        let mut g = OrientedGraph::new();
        g.enable_flip_log();
        Matching {
            g,
            engine,
            rule,
            mate: Vec::new(),
            free_in: Vec::new(),
            work: 0,
        }
    }

    pub fn mate(&self, v: VertexId) -> Option<VertexId> {
        self.mate.get(v.idx()).copied().flatten()
    }

    pub fn is_free(&self, v: VertexId) -> bool {
        self.mate(v).is_none()
    }

    pub fn free_in(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.free_in[v.idx()]
    }

    /// Matched pairs as `(smaller, larger)`.
    pub fn matching(&self) -> Vec<(VertexId, VertexId)> {
        self.g
            .vertices()
            .filter_map(|v| self.mate(v).filter(|&w| v < w).map(|w| (v, w)))
            .collect()
    }

    fn slot(&mut self, v: VertexId) {
        if self.mate.len() <= v.idx() {
            self.mate.resize(v.idx() + 1, None);
            self.free_in.resize_with(v.idx() + 1, BTreeSet::new);
        }
    }

    /// Moves free-in entries for flips made since the last call.
    fn sync_flips(&mut self) {
        for (a, b) in self.g.drain_flip_log() {
            self.work += 1;
            if self.is_free(a) {
                self.free_in[b.idx()].remove(&a);
            }
            if self.is_free(b) {
                self.free_in[a.idx()].insert(b);
            }
        }
    }

    /// Out-neighbors of `x`, charged as a scan.
    fn scan(&mut self, x: VertexId) -> Vec<VertexId> {
        let outs: Vec<VertexId> = self.g.out_neighbors(x).iter().copied().collect();
        self.work += outs.len() as u64;
        outs
    }

    /// In game mode a vertex that just scanned is reset (always, or only
    /// above the threshold).
    fn after_scan(&mut self, x: VertexId) {
        let MatchEngine::Game(mode) = self.engine else {
            return;
        };
        let reset = match mode {
            GameMode::Basic => self.g.out_len(x) > 0,
            GameMode::Threshold(dp) => self.g.out_len(x) > dp as usize,
        };
        if reset {
            self.g.reset(x);
            self.g.metrics_mut().resets += 1;
            self.sync_flips();
        }
    }

    /// Tells `x`'s out-neighbors its current status.
    fn notify(&mut self, x: VertexId) {
        let free = self.is_free(x);
        for w in self.scan(x) {
            if free {
                self.free_in[w.idx()].insert(x);
            } else {
                self.free_in[w.idx()].remove(&x);
            }
        }
        self.after_scan(x);
    }

    fn pair(&mut self, x: VertexId, y: VertexId) {
        self.mate[x.idx()] = Some(y);
        self.mate[y.idx()] = Some(x);
        self.notify(x);
        self.notify(y);
    }

    /// Finds a partner for free `x`: a free in-neighbor first, else a free
    /// out-neighbor, smallest id in either case.
    fn search(&mut self, x: VertexId) {
        if !self.is_free(x) {
            return;
        }
        self.work += 1;
        if let Some(&w) = self.free_in[x.idx()].first() {
            self.pair(x, w);
            return;
        }
        let found = self.scan(x).into_iter().find(|&w| self.is_free(w));
        self.after_scan(x);
        if let Some(w) = found {
            self.pair(x, w);
        }
    }

    fn insert_edge(&mut self, op: &UpdateOp) -> Result<()> {
        let t0 = self.g.metrics().t;
        let applied = match &self.engine {
            MatchEngine::Orient(o) => o.apply(&mut self.g, op)?.0,
            MatchEngine::Game(_) => {
                self.g.begin_update(&op.endpoints());
                self.g.apply_raw(op, self.rule)?
            }
        };
        self.work += self.g.metrics().t - t0;
        let Applied::EdgeInserted { tail, head } = applied else {
            return Err(Error::Protocol("edge insert did not insert".into()));
        };
        // the new edge first, then whatever the cascade did to it
        let flips = self.g.drain_flip_log();
        if self.is_free(tail) {
            self.free_in[head.idx()].insert(tail);
        }
        for (a, b) in flips {
            self.work += 1;
            if self.is_free(a) {
                self.free_in[b.idx()].remove(&a);
            }
            if self.is_free(b) {
                self.free_in[a.idx()].insert(b);
            }
        }
        if self.is_free(tail) && self.is_free(head) {
            self.pair(tail, head);
        }
        Ok(())
    }

    fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        let (tail, head) = self.g.delete_edge(u, v)?;
        self.work += 1;
        self.free_in[head.idx()].remove(&tail);
        if self.mate(u) == Some(v) {
            self.mate[u.idx()] = None;
            self.mate[v.idx()] = None;
            for x in [u, v] {
                self.notify(x);
                self.search(x);
            }
        }
        Ok(())
    }

    pub fn op(&mut self, op: &UpdateOp) -> Result<()> {
        match *op {
            UpdateOp::InsertVertex(v) => {
                self.g.insert_vertex(v)?;
                self.slot(v);
            }
            UpdateOp::DeleteVertex(v) => {
                self.g.check_live(v)?;
                let nbrs: Vec<VertexId> = self.g.neighbors(v).collect();
                for w in nbrs {
                    self.delete_edge(v, w)?;
                }
                self.g.delete_vertex(v)?;
                self.free_in[v.idx()].clear();
            }
            UpdateOp::InsertEdge(..) | UpdateOp::InsertDirected(..) => self.insert_edge(op)?,
            UpdateOp::DeleteEdge(u, v) => self.delete_edge(u, v)?,
            UpdateOp::Query(..) | UpdateOp::SetValue(..) => {
                self.g.apply_raw(op, self.rule)?;
            }
        }
        self.g.note_steady();
        Ok(())
    }

    /// Recomputes every free-in set from scratch and compares.
    pub fn check_free_in(&self) -> std::result::Result<(), String> {
        for v in self.g.vertices() {
            let want: BTreeSet<VertexId> = self
                .g
                .in_neighbors(v)
                .iter()
                .copied()
                .filter(|&u| self.is_free(u))
                .collect();
            if want != self.free_in[v.idx()] {
                return Err(format!(
                    "free-in of {v} is {:?}, expected {want:?}",
                    self.free_in[v.idx()]
                ));
            }
        }
        Ok(())
    }
}

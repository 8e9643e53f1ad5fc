//! Adjacency queries answered from short sorted out-lists.
//!
//! A query `(u, v)` touches both endpoints: a touched vertex with more than
//! `Δ'` out-edges is reset. Afterwards both out-lists are short, and each
//! keeps a sorted index so the lookup is a binary search. An index is dropped
//! when its list reaches `2Δ'` entries and rebuilt once it falls below that.

use crate::error::{Error, Result};
use crate::graph::{Applied, InsertRule, OrientedGraph, VertexId};
use crate::seq::UpdateOp;

#[derive(Debug, Clone)]
pub struct AdjacencyStructure {
    g: OrientedGraph,
    delta_prime: usize,
    rule: InsertRule,
    index: Vec<Option<Vec<VertexId>>>,
    /// Flips plus index maintenance plus search steps.
    pub work: u64,
    pub queries: u64,
}

fn sorted_insert(ix: &mut Vec<VertexId>, x: VertexId) {
    if let Err(p) = ix.binary_search(&x) {
        ix.insert(p, x);
    }
}

fn sorted_remove(ix: &mut Vec<VertexId>, x: VertexId) {
    if let Ok(p) = ix.binary_search(&x) {
        ix.remove(p);
    }
}

impl AdjacencyStructure {
    pub fn new(delta_prime: u32) -> Self {
        let mut g = OrientedGraph::new();
        g.enable_flip_log();
        AdjacencyStructure {
            g,
            delta_prime: delta_prime.max(1) as usize,
            rule: InsertRule::ArbitraryFixed,
            index: Vec::new(),
            work: 0,
            queries: 0,
        }
    }

    pub fn graph(&self) -> &OrientedGraph {
        &self.g
    }

    pub fn delta_prime(&self) -> usize {
        self.delta_prime
    }

    pub fn has_index(&self, v: VertexId) -> bool {
        matches!(self.index.get(v.idx()), Some(Some(_)))
    }

    fn slot(&mut self, v: VertexId) {
        if self.index.len() <= v.idx() {
            self.index.resize(v.idx() + 1, None);
        }
    }

    /// Applies the 2Δ' rule to `v` after its out-list changed.
    fn refresh(&mut self, v: VertexId) {
        let d = self.g.out_len(v);
        let ix = &mut self.index[v.idx()];
        if d >= 2 * self.delta_prime {
            *ix = None;
        } else if ix.is_none() {
            self.work += d as u64;
            *ix = Some(self.g.out_neighbors(v).iter().copied().collect());
        }
    }

    fn out_added(&mut self, tail: VertexId, head: VertexId) {
        if let Some(ix) = &mut self.index[tail.idx()] {
            self.work += 1;
            sorted_insert(ix, head);
        }
        self.refresh(tail);
    }

    fn out_removed(&mut self, tail: VertexId, head: VertexId) {
        if let Some(ix) = &mut self.index[tail.idx()] {
            self.work += 1;
            sorted_remove(ix, head);
        }
        self.refresh(tail);
    }

    fn sync_flips(&mut self) {
        for (a, b) in self.g.drain_flip_log() {
            self.work += 1;
            self.out_removed(a, b);
            self.out_added(b, a);
        }
    }

    /// Resets `v` if it has more than `Δ'` out-edges.
    fn touch(&mut self, v: VertexId) {
        if self.g.out_len(v) > self.delta_prime {
            self.g.reset(v);
            self.g.metrics_mut().resets += 1;
            self.sync_flips();
        }
    }

    fn lookup(&mut self, u: VertexId, v: VertexId) -> bool {
        let ix = self.index[u.idx()]
            .as_ref()
            .expect("short out-list without an index");
        self.work += (usize::BITS - ix.len().leading_zeros()) as u64 + 1;
        ix.binary_search(&v).is_ok()
    }

    pub fn adjacency_query(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        self.g.check_live(u)?;
        self.g.check_live(v)?;
        self.queries += 1;
        self.touch(u);
        self.touch(v);
        Ok(self.lookup(u, v) || self.lookup(v, u))
    }

    /// Applies an update; `q u v` is answered as an adjacency query.
    pub fn op(&mut self, op: &UpdateOp) -> Result<Option<bool>> {
        self.g.begin_update(&op.endpoints());
        let out = match *op {
            UpdateOp::Query(u, Some(v)) => Some(self.adjacency_query(u, v)?),
            UpdateOp::Query(u, None) => {
                self.g.check_live(u)?;
                self.touch(u);
                None
            }
            _ => {
                match self.g.apply_raw(op, self.rule)? {
                    Applied::VertexInserted(v) => {
                        self.slot(v);
                        self.index[v.idx()] = Some(Vec::new());
                    }
                    Applied::VertexDeleted(v, removed) => {
                        for (tail, head) in removed {
                            if tail != v {
                                self.out_removed(tail, head);
                            }
                        }
                        self.index[v.idx()] = None;
                    }
                    Applied::EdgeInserted { tail, head } => self.out_added(tail, head),
                    Applied::EdgeDeleted { tail, head } => self.out_removed(tail, head),
                    Applied::Nothing => {}
                }
                None
            }
        };
        self.g.note_steady();
        Ok(out)
    }

    /// Every vertex with at most `Δ'` out-edges has an index matching its
    /// out-list, and every index that exists is exact.
    pub fn check_index(&self) -> std::result::Result<(), Error> {
        for v in self.g.vertices() {
            let outs: Vec<VertexId> = self.g.out_neighbors(v).iter().copied().collect();
            match &self.index[v.idx()] {
                Some(ix) if *ix != outs => {
                    return Err(Error::Protocol(format!("index of {v} is stale")));
                }
                None if outs.len() <= self.delta_prime => {
                    return Err(Error::Protocol(format!(
                        "{v} has {} out-edges but no index",
                        outs.len()
                    )));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_random_with, RandomConfig};

    #[test]
    fn answers_match_graph() {
        let cfg = RandomConfig::new(2, 120, 3000, 5).deletes(0.3).hubs(0.4).queries(0.3, 0.0);
        let seq = gen_random_with(&cfg);
        let mut a = AdjacencyStructure::new(4);
        for op in seq.iter() {
            if let UpdateOp::Query(u, Some(v)) = *op {
                let truth = a.graph().has_edge(u, v);
                assert_eq!(a.op(op).unwrap(), Some(truth));
            } else {
                a.op(op).unwrap();
            }
            a.check_index().unwrap();
        }
        assert!(a.queries > 0);
    }

    #[test]
    fn index_dropped_at_twice_threshold() {
        let mut a = AdjacencyStructure::new(2);
        for x in 0..6 {
            a.op(&UpdateOp::InsertVertex(VertexId(x))).unwrap();
        }
        for x in 1..5 {
            a.op(&UpdateOp::InsertDirected(VertexId(0), VertexId(x))).unwrap();
        }
        assert!(!a.has_index(VertexId(0)));
        a.op(&UpdateOp::DeleteEdge(VertexId(0), VertexId(4))).unwrap();
        assert!(a.has_index(VertexId(0)));
        assert_eq!(a.op(&UpdateOp::Query(VertexId(0), Some(VertexId(3)))).unwrap(), Some(true));
        assert_eq!(a.op(&UpdateOp::Query(VertexId(0), Some(VertexId(5)))).unwrap(), Some(false));
    }
}

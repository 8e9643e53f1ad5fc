//! Dynamic oriented graph with maintained degree counters.
//!
//! Every undirected edge `{u, v}` is stored exactly once as an out-neighbor
//! entry of its tail and an in-neighbor entry of its head. Neighbor sets are
//! ordered by [`VertexId`] so that every traversal, and therefore every run,
//! is deterministic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;
use crate::metrics::{Metrics, UNREACHABLE};
use crate::seq::UpdateOp;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

/// How a freshly inserted (undirected) edge is oriented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum InsertRule {
    /// Toward the higher id.
    #[default]
    ArbitraryFixed,
    /// From the endpoint of lower outdegree to the one of higher outdegree;
    /// ties fall back to `ArbitraryFixed`.
    HigherOutdegree,
    /// Like `ArbitraryFixed` for plain inserts. Directed inserts (`ied`) are
    /// honored under every rule.
    Directive,
}

impl InsertRule {
    pub fn orient(self, g: &OrientedGraph, u: VertexId, v: VertexId) -> (VertexId, VertexId) {
        let fixed = if u < v { (u, v) } else { (v, u) };
        match self {
            InsertRule::ArbitraryFixed | InsertRule::Directive => fixed,
            InsertRule::HigherOutdegree => {
                let (du, dv) = (g.out[u.idx()].len(), g.out[v.idx()].len());
                match du.cmp(&dv) {
                    std::cmp::Ordering::Less => (u, v),
                    std::cmp::Ordering::Greater => (v, u),
                    std::cmp::Ordering::Equal => fixed,
                }
            }
        }
    }
}

/// What `apply_raw` did, so that algorithms can react.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Applied {
    VertexInserted(VertexId),
    /// Edges removed before the vertex itself, as `(tail, head)`.
    VertexDeleted(VertexId, Vec<(VertexId, VertexId)>),
    EdgeInserted { tail: VertexId, head: VertexId },
    EdgeDeleted { tail: VertexId, head: VertexId },
    /// Query and value ops do not touch the topology.
    Nothing,
}

/// Lazily expanded BFS from the endpoints of the current update. A flipped
/// edge is charged the larger BFS distance of its two endpoints, so edges
/// incident to an endpoint sit at distance at most 1.
#[derive(Debug, Clone, Default)]
struct DistanceProbe {
    dist: HashMap<VertexId, u32>,
    frontier: Vec<VertexId>,
    level: u32,
}

impl DistanceProbe {
    fn start(sources: &[VertexId]) -> Self {
        let mut dist = HashMap::new();
        let mut frontier = Vec::new();
        for &s in sources {
            if dist.insert(s, 0).is_none() {
                frontier.push(s);
            }
        }
        DistanceProbe {
            dist,
            frontier,
            level: 0,
        }
    }

    fn distance(&mut self, g: &OrientedGraph, v: VertexId) -> u32 {
        loop {
            if let Some(&d) = self.dist.get(&v) {
                return d;
            }
            if self.frontier.is_empty() {
                return UNREACHABLE;
            }
            let next_level = self.level + 1;
            let mut next = Vec::new();
            for &x in &self.frontier {
                for &y in g.out[x.idx()].iter().chain(g.inn[x.idx()].iter()) {
                    if let std::collections::hash_map::Entry::Vacant(e) = self.dist.entry(y) {
                        e.insert(next_level);
                        next.push(y);
                    }
                }
            }
            self.frontier = next;
            self.level = next_level;
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct OrientedGraph {
    alive: Vec<bool>,
    used: Vec<bool>,
    out: Vec<BTreeSet<VertexId>>,
    inn: Vec<BTreeSet<VertexId>>,
    n_live: usize,
    m: usize,
    /// Number of live vertices per outdegree value.
    deg_hist: Vec<usize>,
    max_out: usize,
    peak_out: Vec<u32>,
    metrics: Metrics,
    track_distance: bool,
    probe: Option<DistanceProbe>,
    flip_log: Option<Vec<(VertexId, VertexId)>>,
}

impl OrientedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph with live vertices `0..n` and no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.insert_vertex(VertexId(v as u32)).expect("fresh id");
        }
        g
    }

    fn ensure_slot(&mut self, v: VertexId) {
        let need = v.idx() + 1;
        if self.alive.len() < need {
            self.alive.resize(need, false);
            self.used.resize(need, false);
            self.out.resize_with(need, BTreeSet::new);
            self.inn.resize_with(need, BTreeSet::new);
            self.peak_out.resize(need, 0);
        }
    }

    fn hist_add(&mut self, d: usize) {
        if self.deg_hist.len() <= d {
            self.deg_hist.resize(d + 1, 0);
        }
        self.deg_hist[d] += 1;
        if d > self.max_out {
            self.max_out = d;
        }
    }

    fn hist_remove(&mut self, d: usize) {
        self.deg_hist[d] -= 1;
        while self.max_out > 0 && self.deg_hist[self.max_out] == 0 {
            self.max_out -= 1;
        }
    }

    fn out_grew(&mut self, v: VertexId) {
        let d = self.out[v.idx()].len();
        self.hist_remove(d - 1);
        self.hist_add(d);
        let p = &mut self.peak_out[v.idx()];
        if d as u32 > *p {
            *p = d as u32;
        }
        if d as u64 > self.metrics.peak_outdeg {
            self.metrics.peak_outdeg = d as u64;
        }
    }

    fn out_shrank(&mut self, v: VertexId) {
        let d = self.out[v.idx()].len();
        self.hist_remove(d + 1);
        self.hist_add(d);
    }

    pub fn insert_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        self.ensure_slot(v);
        if self.used[v.idx()] {
            return Err(GraphError::VertexReused(v));
        }
        self.used[v.idx()] = true;
        self.alive[v.idx()] = true;
        self.n_live += 1;
        self.hist_add(0);
        Ok(())
    }

    /// Removes `v` after deleting its incident edges (each billed to `t`).
    pub fn delete_vertex(
        &mut self,
        v: VertexId,
    ) -> Result<Vec<(VertexId, VertexId)>, GraphError> {
        self.check_live(v)?;
        let mut removed = Vec::new();
        let outs: Vec<_> = self.out[v.idx()].iter().copied().collect();
        for w in outs {
            removed.push(self.delete_edge(v, w)?);
        }
        let ins: Vec<_> = self.inn[v.idx()].iter().copied().collect();
        for w in ins {
            removed.push(self.delete_edge(w, v)?);
        }
        self.alive[v.idx()] = false;
        self.n_live -= 1;
        self.hist_remove(0);
        Ok(removed)
    }

    #[inline]
    pub fn is_live(&self, v: VertexId) -> bool {
        self.alive.get(v.idx()).copied().unwrap_or(false)
    }

    pub fn check_live(&self, v: VertexId) -> Result<(), GraphError> {
        if self.is_live(v) {
            Ok(())
        } else {
            Err(GraphError::MissingVertex(v))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.is_live(u)
            && self.is_live(v)
            && (self.out[u.idx()].contains(&v) || self.out[v.idx()].contains(&u))
    }

    /// True when the edge exists and is oriented `u -> v`.
    pub fn is_oriented(&self, u: VertexId, v: VertexId) -> bool {
        self.is_live(u) && self.out[u.idx()].contains(&v)
    }

    /// Inserts `{u, v}` oriented by `rule`; returns `(tail, head)`.
    pub fn insert_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        rule: InsertRule,
    ) -> Result<(VertexId, VertexId), GraphError> {
        self.validate_new_edge(u, v)?;
        let (tail, head) = rule.orient(self, u, v);
        self.link(tail, head);
        Ok((tail, head))
    }

    /// Inserts the edge oriented exactly `tail -> head`.
    pub fn insert_directed(&mut self, tail: VertexId, head: VertexId) -> Result<(), GraphError> {
        self.validate_new_edge(tail, head)?;
        self.link(tail, head);
        Ok(())
    }

    fn validate_new_edge(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check_live(u)?;
        self.check_live(v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        Ok(())
    }

    fn link(&mut self, tail: VertexId, head: VertexId) {
        self.out[tail.idx()].insert(head);
        self.inn[head.idx()].insert(tail);
        self.m += 1;
        self.metrics.t += 1;
        self.out_grew(tail);
    }

    /// Deletes `{u, v}` whichever way it is oriented; returns `(tail, head)`.
    pub fn delete_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
    ) -> Result<(VertexId, VertexId), GraphError> {
        self.check_live(u)?;
        self.check_live(v)?;
        let (tail, head) = if self.out[u.idx()].contains(&v) {
            (u, v)
        } else if self.out[v.idx()].contains(&u) {
            (v, u)
        } else {
            return Err(GraphError::MissingEdge(u, v));
        };
        self.out[tail.idx()].remove(&head);
        self.inn[head.idx()].remove(&tail);
        self.m -= 1;
        self.metrics.t += 1;
        self.out_shrank(tail);
        Ok((tail, head))
    }

    /// Reverses `u -> v` into `v -> u`.
    pub fn flip(&mut self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if !self.is_oriented(u, v) {
            return Err(if self.has_edge(u, v) {
                GraphError::WrongOrientation(u, v)
            } else {
                GraphError::MissingEdge(u, v)
            });
        }
        if self.track_distance {
            let mut probe = self.probe.take().unwrap_or_default();
            let d = probe.distance(self, u).max(probe.distance(self, v));
            *self.metrics.flip_distance_hist.entry(d).or_insert(0) += 1;
            self.probe = Some(probe);
        }
        self.out[u.idx()].remove(&v);
        self.inn[v.idx()].remove(&u);
        self.out_shrank(u);
        self.out[v.idx()].insert(u);
        self.inn[u.idx()].insert(v);
        self.out_grew(v);
        self.metrics.f += 1;
        if let Some(log) = self.flip_log.as_mut() {
            log.push((u, v));
        }
        Ok(())
    }

    /// Flips every outgoing edge of `v`; returns the former out-neighbors.
    pub fn reset(&mut self, v: VertexId) -> Vec<VertexId> {
        let outs: Vec<_> = self.out[v.idx()].iter().copied().collect();
        for &w in &outs {
            self.flip(v, w).expect("out-neighbor edge");
        }
        outs
    }

    /// Applies a single update with no rebalancing.
    pub fn apply_raw(&mut self, op: &UpdateOp, rule: InsertRule) -> Result<Applied, GraphError> {
        Ok(match *op {
            UpdateOp::InsertVertex(v) => {
                self.insert_vertex(v)?;
                Applied::VertexInserted(v)
            }
            UpdateOp::DeleteVertex(v) => {
                let removed = self.delete_vertex(v)?;
                Applied::VertexDeleted(v, removed)
            }
            UpdateOp::InsertEdge(u, v) => {
                let (tail, head) = self.insert_edge(u, v, rule)?;
                Applied::EdgeInserted { tail, head }
            }
            UpdateOp::InsertDirected(u, v) => {
                self.insert_directed(u, v)?;
                Applied::EdgeInserted { tail: u, head: v }
            }
            UpdateOp::DeleteEdge(u, v) => {
                let (tail, head) = self.delete_edge(u, v)?;
                Applied::EdgeDeleted { tail, head }
            }
            UpdateOp::Query(u, v) => {
                self.check_live(u)?;
                if let Some(v) = v {
                    self.check_live(v)?;
                }
                Applied::Nothing
            }
            UpdateOp::SetValue(v, _) => {
                self.check_live(v)?;
                Applied::Nothing
            }
        })
    }

    pub fn outdegree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check_live(v)?;
        Ok(self.out[v.idx()].len())
    }

    pub fn indegree(&self, v: VertexId) -> Result<usize, GraphError> {
        self.check_live(v)?;
        Ok(self.inn[v.idx()].len())
    }

    /// Unchecked outdegree; zero for dead or unknown ids.
    #[inline]
    pub fn out_len(&self, v: VertexId) -> usize {
        self.out.get(v.idx()).map_or(0, |s| s.len())
    }

    pub fn out_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.out[v.idx()]
    }

    pub fn in_neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.inn[v.idx()]
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v.idx()].iter().chain(self.inn[v.idx()].iter()).copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.out[v.idx()].len() + self.inn[v.idx()].len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, a)| **a)
            .map(|(i, _)| VertexId(i as u32))
    }

    /// All edges as `(tail, head)`, ordered by tail then head.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.out[u.idx()].iter().map(move |&v| (u, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n_live
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    /// One past the largest id ever used.
    pub fn id_bound(&self) -> usize {
        self.alive.len()
    }

    pub fn max_outdegree(&self) -> usize {
        self.max_out
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn metrics_mut(&mut self) -> &mut Metrics {
        &mut self.metrics
    }

    pub fn take_metrics(&mut self) -> Metrics {
        std::mem::take(&mut self.metrics)
    }

    /// Records the current max outdegree as a between-updates observation.
    pub fn note_steady(&mut self) {
        let d = self.max_out as u64;
        if d > self.metrics.peak_outdeg_steady {
            self.metrics.peak_outdeg_steady = d;
        }
        if d > self.metrics.peak_outdeg {
            self.metrics.peak_outdeg = d;
        }
    }

    /// Largest outdegree `v` reached since the last [`reset_vertex_peaks`](Self::reset_vertex_peaks).
    pub fn vertex_peak(&self, v: VertexId) -> usize {
        self.peak_out.get(v.idx()).copied().unwrap_or(0) as usize
    }

    pub fn reset_vertex_peaks(&mut self) {
        for (p, o) in self.peak_out.iter_mut().zip(self.out.iter()) {
            *p = o.len() as u32;
        }
    }

    /// Like [`reset_vertex_peaks`](Self::reset_vertex_peaks) for one vertex.
    pub fn reset_vertex_peak(&mut self, v: VertexId) {
        if let (Some(p), Some(o)) = (self.peak_out.get_mut(v.idx()), self.out.get(v.idx())) {
            *p = o.len() as u32;
        }
    }

    pub fn set_distance_tracking(&mut self, on: bool) {
        self.track_distance = on;
        if !on {
            self.probe = None;
        }
    }

    pub fn distance_tracking(&self) -> bool {
        self.track_distance
    }

    /// Sets the reference endpoints for flip distances until the next call.
    pub fn begin_update(&mut self, endpoints: &[VertexId]) {
        if self.track_distance {
            self.probe = Some(DistanceProbe::start(endpoints));
        }
    }

    pub fn enable_flip_log(&mut self) {
        self.flip_log.get_or_insert_with(Vec::new);
    }

    /// Drains flips recorded since the last call, as `(old tail, old head)`.
    pub fn drain_flip_log(&mut self) -> Vec<(VertexId, VertexId)> {
        self.flip_log.as_mut().map(std::mem::take).unwrap_or_default()
    }

    /// Full consistency scan: orientation totality and counter agreement.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut m = 0;
        let mut hist = vec![0usize; self.deg_hist.len().max(1)];
        let mut live = 0;
        for u in 0..self.alive.len() {
            let uid = VertexId(u as u32);
            if !self.alive[u] {
                if !self.out[u].is_empty() || !self.inn[u].is_empty() {
                    return Err(format!("dead vertex {uid} has incident edges"));
                }
                continue;
            }
            live += 1;
            let d = self.out[u].len();
            if d >= hist.len() {
                return Err(format!("degree histogram too short for {uid}"));
            }
            hist[d] += 1;
            for &v in &self.out[u] {
                if v == uid {
                    return Err(format!("self-loop at {uid}"));
                }
                if !self.is_live(v) {
                    return Err(format!("edge {uid}->{v} to dead vertex"));
                }
                if !self.inn[v.idx()].contains(&uid) {
                    return Err(format!("in-set of {v} misses {uid}"));
                }
                if self.out[v.idx()].contains(&uid) {
                    return Err(format!("edge {uid}-{v} oriented both ways"));
                }
                m += 1;
            }
            for &w in &self.inn[u] {
                if !self.out[w.idx()].contains(&uid) {
                    return Err(format!("in-set of {uid} lists {w} without edge"));
                }
            }
        }
        if m != self.m {
            return Err(format!("edge count {} != recount {m}", self.m));
        }
        if live != self.n_live {
            return Err(format!("live count {} != recount {live}", self.n_live));
        }
        if hist[..] != self.deg_hist[..hist.len()] {
            return Err("outdegree histogram out of sync".into());
        }
        let true_max = hist.iter().rposition(|&c| c > 0).unwrap_or(0);
        if true_max != self.max_out {
            return Err(format!("max outdegree {} != recount {true_max}", self.max_out));
        }
        Ok(())
    }

    /// Copy of the topology and orientation without metrics or probes.
    pub fn snapshot(&self) -> OrientedGraph {
        OrientedGraph {
            alive: self.alive.clone(),
            used: self.used.clone(),
            out: self.out.clone(),
            inn: self.inn.clone(),
            n_live: self.n_live,
            m: self.m,
            deg_hist: self.deg_hist.clone(),
            max_out: self.max_out,
            peak_out: self.out.iter().map(|s| s.len() as u32).collect(),
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn first_edge_arbitrary_rule() {
        let mut g = OrientedGraph::with_vertices(3);
        g.insert_edge(v(1), v(2), InsertRule::ArbitraryFixed).unwrap();
        assert!(g.out_neighbors(v(1)).contains(&v(2)));
        assert_eq!(g.indegree(v(2)).unwrap(), 1);
        assert_eq!(g.metrics().t, 1);
    }

    #[test]
    fn higher_outdegree_rule_orients_toward_busier_endpoint() {
        let mut g = OrientedGraph::with_vertices(6);
        for w in 3..6 {
            g.insert_directed(v(1), v(w)).unwrap();
        }
        assert_eq!(g.outdegree(v(1)).unwrap(), 3);
        let (tail, head) = g.insert_edge(v(1), v(2), InsertRule::HigherOutdegree).unwrap();
        assert_eq!((tail, head), (v(2), v(1)));
    }

    #[test]
    fn delete_vertex_bills_each_edge() {
        let mut g = OrientedGraph::with_vertices(4);
        g.insert_edge(v(0), v(1), InsertRule::ArbitraryFixed).unwrap();
        g.insert_edge(v(0), v(2), InsertRule::ArbitraryFixed).unwrap();
        g.insert_edge(v(3), v(0), InsertRule::ArbitraryFixed).unwrap();
        let t0 = g.metrics().t;
        let removed = g.delete_vertex(v(0)).unwrap();
        assert_eq!(removed.len(), 3);
        assert_eq!(g.metrics().t - t0, 3);
        assert!(!g.is_live(v(0)));
        assert_eq!(g.edge_count(), 0);
        g.check_invariants().unwrap();
        assert_eq!(g.insert_vertex(v(0)), Err(GraphError::VertexReused(v(0))));
    }

    #[test]
    fn flip_and_involution() {
        let mut g = OrientedGraph::with_vertices(3);
        g.insert_edge(v(1), v(2), InsertRule::ArbitraryFixed).unwrap();
        g.flip(v(1), v(2)).unwrap();
        assert!(g.is_oriented(v(2), v(1)));
        assert_eq!(g.metrics().f, 1);
        g.flip(v(2), v(1)).unwrap();
        assert!(g.is_oriented(v(1), v(2)));
        assert_eq!(g.metrics().f, 2);
        assert_eq!(g.flip(v(2), v(1)), Err(GraphError::WrongOrientation(v(2), v(1))));
        assert_eq!(g.flip(v(0), v(1)), Err(GraphError::MissingEdge(v(0), v(1))));
    }

    #[test]
    fn degrees_of_star_and_isolated() {
        let mut g = OrientedGraph::with_vertices(7);
        for w in 1..6 {
            g.insert_directed(v(0), v(w)).unwrap();
        }
        assert_eq!((g.outdegree(v(0)).unwrap(), g.indegree(v(0)).unwrap()), (5, 0));
        assert_eq!((g.outdegree(v(6)).unwrap(), g.indegree(v(6)).unwrap()), (0, 0));
        assert_eq!(g.outdegree(v(9)), Err(GraphError::MissingVertex(v(9))));
        assert_eq!(g.max_outdegree(), 5);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut g = OrientedGraph::with_vertices(2);
        assert_eq!(
            g.insert_edge(v(0), v(0), InsertRule::ArbitraryFixed),
            Err(GraphError::SelfLoop(v(0)))
        );
        g.insert_edge(v(0), v(1), InsertRule::ArbitraryFixed).unwrap();
        assert_eq!(
            g.insert_edge(v(1), v(0), InsertRule::ArbitraryFixed),
            Err(GraphError::DuplicateEdge(v(1), v(0)))
        );
        assert_eq!(
            g.insert_edge(v(0), v(5), InsertRule::ArbitraryFixed),
            Err(GraphError::MissingVertex(v(5)))
        );
    }

    #[test]
    fn flip_distance_three_hops_out() {
        // path 0-1-2-3-4, update endpoints {0,1}; edge 3-4 is three hops out
        let mut g = OrientedGraph::with_vertices(5);
        for i in 0..4 {
            g.insert_edge(v(i), v(i + 1), InsertRule::ArbitraryFixed).unwrap();
        }
        g.set_distance_tracking(true);
        g.begin_update(&[v(0), v(1)]);
        g.flip(v(3), v(4)).unwrap();
        g.flip(v(0), v(1)).unwrap();
        assert_eq!(g.metrics().flip_distance_hist.get(&3), Some(&1));
        assert_eq!(g.metrics().flip_distance_hist.get(&0), Some(&1));
    }

    #[test]
    fn max_outdegree_tracks_decreases() {
        let mut g = OrientedGraph::with_vertices(4);
        for w in 1..4 {
            g.insert_directed(v(0), v(w)).unwrap();
        }
        assert_eq!(g.max_outdegree(), 3);
        g.reset(v(0));
        assert_eq!(g.max_outdegree(), 1);
        assert_eq!(g.vertex_peak(v(0)), 3);
        g.check_invariants().unwrap();
    }
}

//! Reset cascades: while some vertex has more than `Δ` out-edges, pick one
//! and flip all of its out-edges.

use std::collections::{HashSet, VecDeque};

use super::bucket::BucketHeap;
use super::{CascadeOrder, OrientConfig};
use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, VertexId};

/// Pending over-threshold vertices in the configured extraction order.
enum Pending {
    Fifo(VecDeque<VertexId>, HashSet<VertexId>),
    Lifo(Vec<VertexId>, HashSet<VertexId>),
    Largest(BucketHeap),
}

impl Pending {
    fn new(order: CascadeOrder) -> Self {
        match order {
            CascadeOrder::Fifo => Pending::Fifo(VecDeque::new(), HashSet::new()),
            CascadeOrder::Lifo => Pending::Lifo(Vec::new(), HashSet::new()),
            CascadeOrder::LargestFirst => Pending::Largest(BucketHeap::new()),
        }
    }

    /// Called whenever `v`'s outdegree changed to `d > Δ`.
    fn offer(&mut self, v: VertexId, d: usize) {
        match self {
            Pending::Fifo(q, seen) => {
                if seen.insert(v) {
                    q.push_back(v);
                }
            }
            Pending::Lifo(q, seen) => {
                if seen.insert(v) {
                    q.push(v);
                }
            }
            Pending::Largest(h) => h.set(v, d),
        }
    }

    fn pop(&mut self) -> Option<VertexId> {
        match self {
            Pending::Fifo(q, seen) => {
                let v = q.pop_front()?;
                seen.remove(&v);
                Some(v)
            }
            Pending::Lifo(q, seen) => {
                let v = q.pop()?;
                seen.remove(&v);
                Some(v)
            }
            Pending::Largest(h) => h.pop_max().map(|(v, _)| v),
        }
    }
}

/// Per-update summary of a reset cascade.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ResetCascade {
    /// Vertices in the order they were reset, each with the number of
    /// edges that reset flipped.
    pub resets: Vec<(VertexId, usize)>,
    pub flips: u64,
}

/// A reset cascade driven one reset at a time.
///
/// Useful when the cascade is expected not to settle (thresholds at or below
/// the best achievable outdegree) but its early behavior is of interest.
pub struct ResetStepper<'g> {
    g: &'g mut OrientedGraph,
    pending: Pending,
    delta: usize,
}

impl<'g> ResetStepper<'g> {
    pub fn new(g: &'g mut OrientedGraph, seeds: &[VertexId], cfg: &OrientConfig) -> Self {
        let delta = cfg.delta as usize;
        let mut pending = Pending::new(cfg.order);
        for &s in seeds {
            let d = g.out_len(s);
            if g.is_live(s) && d > delta {
                pending.offer(s, d);
            }
        }
        ResetStepper { g, pending, delta }
    }

    /// Performs the next reset; returns the vertex and its outdegree just
    /// before the reset, or `None` once every outdegree is within bound.
    pub fn step(&mut self) -> Option<(VertexId, usize)> {
        while let Some(x) = self.pending.pop() {
            let d = self.g.out_len(x);
            if d <= self.delta {
                continue;
            }
            let flipped = self.g.reset(x);
            self.g.metrics_mut().resets += 1;
            for w in flipped {
                let dw = self.g.out_len(w);
                if dw > self.delta {
                    self.pending.offer(w, dw);
                }
            }
            return Some((x, d));
        }
        None
    }

    pub fn graph(&self) -> &OrientedGraph {
        self.g
    }
}

/// Runs the cascade seeded by `seeds` until every outdegree is at most `Δ`.
pub fn reset_cascade(
    g: &mut OrientedGraph,
    seeds: &[VertexId],
    cfg: &OrientConfig,
) -> Result<ResetCascade> {
    let f0 = g.metrics().f;
    let mut report = ResetCascade::default();
    let mut stepper = ResetStepper::new(g, seeds, cfg);
    while let Some(step) = stepper.step() {
        report.resets.push(step);
        let g = stepper.graph();
        let m = g.metrics();
        let limit = 10 * (m.t + 1) * g.vertex_count().max(1) as u64;
        if m.f > limit {
            return Err(Error::Watchdog {
                flips: m.f,
                updates: m.t,
                vertices: g.vertex_count(),
            });
        }
    }
    report.flips = g.metrics().f - f0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::InsertRule;

    fn v(x: u32) -> VertexId {
        VertexId(x)
    }

    #[test]
    fn three_out_at_delta_two() {
        let mut g = OrientedGraph::with_vertices(4);
        for w in 1..4 {
            g.insert_directed(v(0), v(w)).unwrap();
        }
        let cfg = OrientConfig::bf(2);
        let r = reset_cascade(&mut g, &[v(0)], &cfg).unwrap();
        assert_eq!(r.resets, vec![(v(0), 3)]);
        assert_eq!(r.flips, 3);
        assert!(g.max_outdegree() <= 2);
    }

    #[test]
    fn watchdog_on_infeasible_threshold() {
        // K5 needs outdegree 2; threshold 1 can never settle
        let mut g = OrientedGraph::with_vertices(5);
        for a in 0..5 {
            for b in a + 1..5 {
                g.insert_edge(v(a), v(b), InsertRule::ArbitraryFixed).unwrap();
            }
        }
        let cfg = OrientConfig::bf(1);
        let err = reset_cascade(&mut g, &[v(0), v(1), v(2)], &cfg).unwrap_err();
        assert!(matches!(err, Error::Watchdog { .. }));
    }
}

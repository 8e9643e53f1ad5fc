//! Anti-reset cascades.
//!
//! When `u` exceeds `Δ`, explore from `u` along out-edges, expanding only
//! vertices of outdegree above `Δ' = Δ - 2α` (internal) and stopping at the
//! rest (boundary). Color every out-edge of every internal vertex. Then
//! repeatedly take a vertex with at most `2α` colored incident edges, turn
//! its colored in-edges outward, and uncolor all of its colored edges.
//!
//! Internal vertices finish with at most `2α` out-edges, boundary vertices
//! with at most `Δ`, and nothing exceeds `Δ + 1` along the way.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::OrientConfig;
use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, VertexId};

/// What one cascade did, for audits and reports.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AntiResetCascade {
    pub trigger: VertexId,
    pub internal: Vec<VertexId>,
    pub boundary: Vec<VertexId>,
    /// Outdegree of each internal vertex when the exploration reached it.
    pub internal_outdeg: Vec<usize>,
    pub colored_edges: usize,
    pub flips: u64,
    pub anti_resets: u64,
    /// Largest number of times any single colored edge was flipped.
    pub max_flips_per_edge: u32,
    /// Largest outdegree any touched vertex reached during the cascade.
    pub peak_outdeg: usize,
}

impl AntiResetCascade {
    /// Flips every internal vertex is guaranteed to contribute:
    /// `Σ (d_x - 2α)` over internal `x`.
    pub fn guaranteed_flips(&self, alpha: u32) -> u64 {
        let two_a = 2 * alpha as usize;
        self.internal_outdeg
            .iter()
            .map(|&d| d.saturating_sub(two_a) as u64)
            .sum()
    }
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

/// Runs one anti-reset cascade triggered at `u`.
pub fn antireset_cascade(
    g: &mut OrientedGraph,
    u: VertexId,
    cfg: &OrientConfig,
) -> Result<AntiResetCascade> {
    let two_a = 2 * cfg.alpha as usize;
    let delta = cfg.delta as usize;
    if delta < 5 * cfg.alpha as usize {
        return Err(Error::Config(format!(
            "anti-reset needs delta >= 5*alpha, got delta={delta}, alpha={}",
            cfg.alpha
        )));
    }
    let inner = delta - two_a;

    // exploration; classification is frozen at first visit
    let mut internal_set: HashSet<VertexId> = HashSet::new();
    let mut visited: HashSet<VertexId> = HashSet::from([u]);
    let mut report = AntiResetCascade {
        trigger: u,
        ..Default::default()
    };
    let mut stack = Vec::new();
    if g.out_len(u) > inner {
        internal_set.insert(u);
        report.internal.push(u);
        report.internal_outdeg.push(g.out_len(u));
        stack.push(u);
    } else {
        report.boundary.push(u);
    }
    while let Some(x) = stack.pop() {
        for &w in g.out_neighbors(x) {
            if !visited.insert(w) {
                continue;
            }
            let d = g.out_len(w);
            if d > inner {
                internal_set.insert(w);
                report.internal.push(w);
                report.internal_outdeg.push(d);
                stack.push(w);
            } else {
                report.boundary.push(w);
            }
        }
    }

    // coloring
    let mut colored: HashMap<VertexId, BTreeSet<VertexId>> = HashMap::new();
    for &x in &report.internal {
        for &w in g.out_neighbors(x) {
            colored.entry(x).or_default().insert(w);
            colored.entry(w).or_default().insert(x);
            report.colored_edges += 1;
        }
    }
    let mut ready: BTreeSet<VertexId> = colored
        .iter()
        .filter(|(_, s)| !s.is_empty() && s.len() <= two_a)
        .map(|(&x, _)| x)
        .collect();
    let mut remaining = report.colored_edges;
    let mut flip_count: HashMap<(VertexId, VertexId), u32> = HashMap::new();
    report.peak_outdeg = g.out_len(u);

    while remaining > 0 {
        let Some(x) = ready.pop_first() else {
            return Err(Error::Promise(format!(
                "{remaining} colored edges left but every vertex has more than {two_a} of them"
            )));
        };
        let nbrs = colored.remove(&x).unwrap_or_default();
        for y in nbrs {
            if g.is_oriented(y, x) {
                g.flip(y, x)?;
                *flip_count.entry(key(x, y)).or_insert(0) += 1;
                report.flips += 1;
            }
            let ys = colored.get_mut(&y).expect("colored symmetric");
            ys.remove(&x);
            remaining -= 1;
            match ys.len() {
                0 => {
                    ready.remove(&y);
                }
                k if k <= two_a => {
                    ready.insert(y);
                }
                _ => {}
            }
        }
        report.anti_resets += 1;
        report.peak_outdeg = report.peak_outdeg.max(g.out_len(x));
    }
    g.metrics_mut().resets += report.anti_resets;
    report.max_flips_per_edge = flip_count.values().copied().max().unwrap_or(0);
    Ok(report)
}

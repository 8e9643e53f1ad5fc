//! Forest decompositions read off an orientation, and the adjacency labels
//! they give.
//!
//! The `k`-th out-edge of every vertex (in id order) goes to class `k`. Each
//! vertex has at most one out-edge per class, so a class is a set of parent
//! pointers; it may still close cycles. One edge per cycle moves to overflow
//! class `Δ + k`. Cycles of one class are vertex-disjoint, so the moved edges
//! form a matching. An orientation of outdegree `Δ` yields at most `2Δ`
//! forests.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestDecomposition {
    /// Class of each edge, keyed `(min, max)`.
    pub class: BTreeMap<(VertexId, VertexId), usize>,
    /// `(tail, head)` of each edge, same keys.
    pub tail: BTreeMap<(VertexId, VertexId), VertexId>,
    pub classes: usize,
}

fn key(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    (a.min(b), a.max(b))
}

pub fn forest_decompose(g: &OrientedGraph, delta: u32) -> Result<ForestDecomposition> {
    let delta = delta as usize;
    let bound = g.id_bound();
    // parent[k][v] = head of v's k-th out-edge
    let mut parent: Vec<Vec<Option<VertexId>>> = vec![vec![None; bound]; delta];
    for v in g.vertices() {
        let outs = g.out_neighbors(v);
        if outs.len() > delta {
            return Err(Error::Config(format!(
                "{v} has outdegree {} above {delta}",
                outs.len()
            )));
        }
        for (k, &w) in outs.iter().enumerate() {
            parent[k][v.idx()] = Some(w);
        }
    }

    let mut class = BTreeMap::new();
    let mut tail = BTreeMap::new();
    let mut used = 0;
    for (k, par) in parent.iter().enumerate() {
        // 0 = unseen, 1 = on the current walk, 2 = done
        let mut state = vec![0u8; bound];
        let mut cut = vec![false; bound];
        for start in g.vertices() {
            let mut walk = Vec::new();
            let mut x = start;
            while state[x.idx()] == 0 {
                state[x.idx()] = 1;
                walk.push(x);
                match par[x.idx()] {
                    Some(p) => x = p,
                    None => break,
                }
            }
            if state[x.idx()] == 1 && par[x.idx()].is_some() {
                // x closes a cycle on this walk
                let pos = walk.iter().position(|&y| y == x).expect("on walk");
                let on_cycle = &walk[pos..];
                cut[on_cycle.iter().min().expect("non-empty cycle").idx()] = true;
            }
            for y in walk {
                state[y.idx()] = 2;
            }
        }
        for v in g.vertices() {
            if let Some(w) = par[v.idx()] {
                let c = if cut[v.idx()] { delta + k } else { k };
                used = used.max(c + 1);
                class.insert(key(v, w), c);
                tail.insert(key(v, w), v);
            }
        }
    }
    Ok(ForestDecomposition {
        class,
        tail,
        classes: used,
    })
}

/// ID plus one parent pointer per forest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestLabel {
    pub id: VertexId,
    pub parents: Vec<Option<VertexId>>,
}

impl ForestLabel {
    /// Number of vertex ids stored, counting empty parent slots.
    pub fn size(&self) -> usize {
        1 + self.parents.len()
    }
}

pub fn make_labels(g: &OrientedGraph, d: &ForestDecomposition) -> BTreeMap<VertexId, ForestLabel> {
    let mut labels: BTreeMap<VertexId, ForestLabel> = g
        .vertices()
        .map(|v| {
            (
                v,
                ForestLabel {
                    id: v,
                    parents: vec![None; d.classes],
                },
            )
        })
        .collect();
    for (k, &c) in &d.class {
        let t = d.tail[k];
        let h = if k.0 == t { k.1 } else { k.0 };
        labels.get_mut(&t).expect("live tail").parents[c] = Some(h);
    }
    labels
}

/// Decides adjacency from the two labels alone.
pub fn label_adjacent(a: &ForestLabel, b: &ForestLabel) -> bool {
    a.parents.contains(&Some(b.id)) || b.parents.contains(&Some(a.id))
}

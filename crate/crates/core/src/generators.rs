//! Update-sequence generators: random bounded-arboricity workloads and the
//! adversarial constructions that drive reset cascades to their extremes.
//!
//! Gadgets are returned as a setup sequence plus a trigger op. Setup edges
//! carry explicit orientations (`ied`) unless the construction is meant to
//! be reproduced by an insert rule.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::seq::{UpdateOp, UpdateSequence};

fn v(x: usize) -> VertexId {
    VertexId(x as u32)
}

/// Knobs for [`gen_random_with`]. `t` counts edge-update steps; vertex churn,
/// queries and value updates come on top.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomConfig {
    pub alpha: u32,
    pub n: usize,
    pub t: usize,
    pub seed: u64,
    pub delete_fraction: f64,
    /// Probability that an inserted edge has one endpoint among the
    /// `⌈√n⌉` lowest ids, which grows high-degree hubs.
    pub hub_bias: f64,
    /// Per step, probability of deleting a random vertex and inserting a fresh one.
    pub vertex_churn: f64,
    /// Per step, probability of an extra adjacency query `q u v`.
    pub adjacency_queries: f64,
    /// Per step, probability of an extra value query `q v`.
    pub value_queries: f64,
    /// Per step, probability of an extra `val v x`.
    pub value_updates: f64,
}

impl RandomConfig {
    pub fn new(alpha: u32, n: usize, t: usize, seed: u64) -> Self {
        RandomConfig {
            alpha,
            n,
            t,
            seed,
            delete_fraction: 0.0,
            hub_bias: 0.0,
            vertex_churn: 0.0,
            adjacency_queries: 0.0,
            value_queries: 0.0,
            value_updates: 0.0,
        }
    }

    pub fn deletes(mut self, fraction: f64) -> Self {
        self.delete_fraction = fraction;
        self
    }

    pub fn hubs(mut self, bias: f64) -> Self {
        self.hub_bias = bias;
        self
    }

    pub fn churn(mut self, p: f64) -> Self {
        self.vertex_churn = p;
        self
    }

    pub fn queries(mut self, adjacency: f64, value: f64) -> Self {
        self.adjacency_queries = adjacency;
        self.value_queries = value;
        self
    }

    pub fn values(mut self, p: f64) -> Self {
        self.value_updates = p;
        self
    }
}

/// A forest with parent pointers supporting link (by re-rooting) and cut.
struct DynForest {
    parent: Vec<Option<u32>>,
}

impl DynForest {
    fn new(n: usize) -> Self {
        DynForest {
            parent: vec![None; n],
        }
    }

    fn grow(&mut self, n: usize) {
        if self.parent.len() < n {
            self.parent.resize(n, None);
        }
    }

    fn root(&self, mut x: usize) -> usize {
        while let Some(p) = self.parent[x] {
            x = p as usize;
        }
        x
    }

    fn connected(&self, a: usize, b: usize) -> bool {
        self.root(a) == self.root(b)
    }

    /// Makes `x` the root of its tree by reversing its root path.
    fn evert(&mut self, x: usize) {
        let mut prev: Option<u32> = None;
        let mut cur = Some(x as u32);
        while let Some(c) = cur {
            let next = self.parent[c as usize];
            self.parent[c as usize] = prev;
            prev = Some(c);
            cur = next;
        }
    }

    fn link(&mut self, a: usize, b: usize) {
        self.evert(a);
        self.parent[a] = Some(b as u32);
    }

    fn cut(&mut self, a: usize, b: usize) {
        if self.parent[a] == Some(b as u32) {
            self.parent[a] = None;
        } else {
            debug_assert_eq!(self.parent[b], Some(a as u32));
            self.parent[b] = None;
        }
    }
}

struct ForestUnion {
    forests: Vec<DynForest>,
    /// Live edges with their forest, plus positions for O(1) uniform removal.
    edges: Vec<(u32, u32)>,
    slot: HashMap<(u32, u32), (usize, usize)>,
    incident: Vec<Vec<u32>>,
}

impl ForestUnion {
    fn new(alpha: usize, n: usize) -> Self {
        ForestUnion {
            forests: (0..alpha).map(|_| DynForest::new(n)).collect(),
            edges: Vec::new(),
            slot: HashMap::new(),
            incident: vec![Vec::new(); n],
        }
    }

    fn grow(&mut self, n: usize) {
        for f in &mut self.forests {
            f.grow(n);
        }
        if self.incident.len() < n {
            self.incident.resize(n, Vec::new());
        }
    }

    fn key(a: u32, b: u32) -> (u32, u32) {
        (a.min(b), a.max(b))
    }

    fn try_insert(&mut self, a: u32, b: u32, forest: usize) -> bool {
        let k = Self::key(a, b);
        if a == b || self.slot.contains_key(&k) {
            return false;
        }
        let f = &mut self.forests[forest];
        if f.connected(a as usize, b as usize) {
            return false;
        }
        f.link(a as usize, b as usize);
        self.slot.insert(k, (forest, self.edges.len()));
        self.edges.push(k);
        self.incident[a as usize].push(b);
        self.incident[b as usize].push(a);
        true
    }

    fn remove(&mut self, a: u32, b: u32) {
        let k = Self::key(a, b);
        let (forest, pos) = self.slot.remove(&k).expect("live edge");
        self.forests[forest].cut(a as usize, b as usize);
        let last = self.edges.pop().expect("non-empty");
        if pos < self.edges.len() {
            self.edges[pos] = last;
            self.slot.get_mut(&last).expect("live edge").1 = pos;
        }
        for (x, y) in [(a, b), (b, a)] {
            let inc = &mut self.incident[x as usize];
            let i = inc.iter().position(|&w| w == y).expect("incident");
            inc.swap_remove(i);
        }
    }
}

/// Random arboricity-`alpha` preserving sequence over vertices `0..n`.
pub fn gen_random(alpha: u32, n: usize, t: usize, seed: u64, delete_fraction: f64) -> UpdateSequence {
    gen_random_with(&RandomConfig::new(alpha, n, t, seed).deletes(delete_fraction))
}

/// The graph is at all times a union of `alpha` forests: every insertion is
/// assigned to a random forest and emitted only if it stays acyclic there.
pub fn gen_random_with(cfg: &RandomConfig) -> UpdateSequence {
    const RETRIES: usize = 32;
    let alpha = cfg.alpha.max(1) as usize;
    let n = cfg.n.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut seq = UpdateSequence::new();
    let mut live: Vec<u32> = (0..n as u32).collect();
    for &x in &live {
        seq.push(UpdateOp::InsertVertex(VertexId(x)));
    }
    let mut next_id = n as u32;
    let hubs = ((n as f64).sqrt().ceil() as usize).max(1);
    let mut fu = ForestUnion::new(alpha, n);

    for _ in 0..cfg.t {
        let delete = !fu.edges.is_empty() && rng.gen_bool(cfg.delete_fraction.clamp(0.0, 1.0));
        let mut emitted = false;
        if !delete {
            for _ in 0..RETRIES {
                let a = if rng.gen_bool(cfg.hub_bias.clamp(0.0, 1.0)) {
                    live[rng.gen_range(0..hubs.min(live.len()))]
                } else {
                    *live.choose(&mut rng).expect("vertices")
                };
                let b = *live.choose(&mut rng).expect("vertices");
                let forest = rng.gen_range(0..alpha);
                if fu.try_insert(a, b, forest) {
                    seq.push(UpdateOp::InsertEdge(VertexId(a), VertexId(b)));
                    emitted = true;
                    break;
                }
            }
        }
        if !emitted && !fu.edges.is_empty() {
            let (a, b) = fu.edges[rng.gen_range(0..fu.edges.len())];
            fu.remove(a, b);
            seq.push(UpdateOp::DeleteEdge(VertexId(a), VertexId(b)));
        }

        if cfg.vertex_churn > 0.0 && rng.gen_bool(cfg.vertex_churn.min(1.0)) && live.len() > 2 {
            let i = rng.gen_range(0..live.len());
            let x = live.swap_remove(i);
            for y in fu.incident[x as usize].clone() {
                fu.remove(x, y);
            }
            seq.push(UpdateOp::DeleteVertex(VertexId(x)));
            let fresh = next_id;
            next_id += 1;
            fu.grow(next_id as usize);
            live.push(fresh);
            seq.push(UpdateOp::InsertVertex(VertexId(fresh)));
        }
        if cfg.adjacency_queries > 0.0 && rng.gen_bool(cfg.adjacency_queries.min(1.0)) {
            let (a, b) = if !fu.edges.is_empty() && rng.gen_bool(0.5) {
                fu.edges[rng.gen_range(0..fu.edges.len())]
            } else {
                (*live.choose(&mut rng).unwrap(), *live.choose(&mut rng).unwrap())
            };
            if a != b {
                seq.push(UpdateOp::Query(VertexId(a), Some(VertexId(b))));
            }
        }
        if cfg.value_queries > 0.0 && rng.gen_bool(cfg.value_queries.min(1.0)) {
            seq.push(UpdateOp::Query(VertexId(*live.choose(&mut rng).unwrap()), None));
        }
        if cfg.value_updates > 0.0 && rng.gen_bool(cfg.value_updates.min(1.0)) {
            let x = *live.choose(&mut rng).unwrap();
            seq.push(UpdateOp::SetValue(VertexId(x), rng.gen_range(-1000..=1000)));
        }
    }
    seq
}

/// A gadget: build with `setup`, then apply `trigger` to start the cascade.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub setup: UpdateSequence,
    pub trigger: UpdateOp,
    /// Vertex whose outdegree the construction is designed to blow up.
    pub watch: Option<VertexId>,
    /// Arboricity of the built graph (trigger included).
    pub alpha: u32,
    /// Number of vertices including the trigger's fresh endpoint.
    pub n: usize,
}

impl Gadget {
    pub fn sequence(&self) -> UpdateSequence {
        let mut s = self.setup.clone();
        s.push(self.trigger);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum GadgetSpec {
    BlowupTree { delta: u32, height: u32 },
    FarFlipChain { n: usize },
    Gi { i: u32 },
    GiAlpha { i: u32, alpha: u32 },
    RandomForestUnion(RandomConfig),
}

impl GadgetSpec {
    /// Builds the sequence, trigger included. Random workloads have no trigger.
    pub fn to_sequence(&self) -> Result<UpdateSequence> {
        Ok(match self {
            GadgetSpec::BlowupTree { delta, height } => gen_blowup_tree(*delta, *height)?.sequence(),
            GadgetSpec::FarFlipChain { n } => gen_farflip_chain(*n)?.sequence(),
            GadgetSpec::Gi { i } => gen_gi(*i)?.sequence(),
            GadgetSpec::GiAlpha { i, alpha } => gen_gi_alpha(*i, *alpha)?.sequence(),
            GadgetSpec::RandomForestUnion(cfg) => gen_random_with(cfg),
        })
    }
}

/// An almost perfect `delta`-ary tree of height `height` oriented toward the
/// leaves. Every leaf-parent has `delta - 1` leaf children plus an edge to a
/// shared sink `v*`, so all internal vertices sit at outdegree exactly
/// `delta`. The trigger gives the root one more out-edge; a FIFO reset
/// cascade then resets every leaf-parent before `v*`, leaving `v*` with
/// outdegree `delta^(height-1)`.
///
/// Ids are assigned in BFS order with the root at 0, then `v*`, then the
/// trigger's fresh vertex.
pub fn gen_blowup_tree(delta: u32, height: u32) -> Result<Gadget> {
    if delta < 2 || height < 2 {
        return Err(Error::Config(format!(
            "blowup tree needs delta >= 2 and height >= 2, got {delta}, {height}"
        )));
    }
    let d = delta as usize;
    let mut edges = Vec::new();
    let mut level = vec![0usize];
    let mut next = 1usize;
    let mut leaf_parents = Vec::new();
    for depth in 0..height {
        let kids_each = if depth + 1 == height { d - 1 } else { d };
        if depth + 1 == height {
            leaf_parents = level.clone();
        }
        let mut next_level = Vec::with_capacity(level.len() * kids_each);
        for &p in &level {
            for _ in 0..kids_each {
                edges.push((p, next));
                next_level.push(next);
                next += 1;
            }
        }
        level = next_level;
    }
    let sink = next;
    let fresh = next + 1;
    for &lp in &leaf_parents {
        edges.push((lp, sink));
    }
    let mut setup = UpdateSequence::new();
    for x in 0..fresh {
        setup.push(UpdateOp::InsertVertex(v(x)));
    }
    for (a, b) in edges {
        setup.push(UpdateOp::InsertDirected(v(a), v(b)));
    }
    setup.push(UpdateOp::InsertVertex(v(fresh)));
    Ok(Gadget {
        setup,
        trigger: UpdateOp::InsertDirected(v(0), v(fresh)),
        watch: Some(v(sink)),
        alpha: 2,
        n: fresh + 1,
    })
}

/// Two complete binary trees of equal depth, edges oriented parent to child,
/// so that every internal vertex has outdegree exactly 2. The trigger joins
/// the two roots with the edge oriented out of the first root. At threshold
/// 2 any repair must flip a root-to-leaf path of length `log2 n - O(1)`.
///
/// The depth is the largest `d` with `2 (2^(d+1) - 1) <= n`. The first
/// tree takes ids `0..2^(d+1)-1` in heap order, the second follows.
pub fn gen_farflip_chain(n: usize) -> Result<Gadget> {
    if n < 8 {
        return Err(Error::Config(format!("far-flip chain needs n >= 8, got {n}")));
    }
    let mut d = 0u32;
    while 2 * ((1usize << (d + 2)) - 1) <= n {
        d += 1;
    }
    let size = (1usize << (d + 1)) - 1;
    let mut setup = UpdateSequence::new();
    for x in 0..2 * size {
        setup.push(UpdateOp::InsertVertex(v(x)));
    }
    for base in [0, size] {
        for i in 0..size {
            for c in [2 * i + 1, 2 * i + 2] {
                if c < size {
                    setup.push(UpdateOp::InsertDirected(v(base + i), v(base + c)));
                }
            }
        }
    }
    Ok(Gadget {
        setup,
        trigger: UpdateOp::InsertDirected(v(0), v(size)),
        watch: None,
        alpha: 1,
        n: 2 * size,
    })
}

/// Directed edges of `G_i`, built directly from its recursive definition.
///
/// `G_2` is `a`, `b` and the cycle `C_1 = {x, y}`; since a simple graph cannot
/// hold a 2-cycle, `C_1` contributes the single edge `x -> y`, and `x -> a`,
/// `y -> b` attach it. `G_{m+1}` adds a cycle `C_m` on `2^m` vertices whose
/// `k`-th vertex points to the `k`-th vertex (by id) of `G_m`.
///
/// Ids: `C_{i-1}` takes the smallest ids, then `C_{i-2}`, ..., `C_1`, then
/// `a`, `b`. Returns the edges in an insertion order under which the
/// higher-outdegree rule reproduces every orientation, plus the id list of
/// each cycle (index `m` holds `C_m`).
pub fn gi_edges(i: u32) -> Result<(Vec<(VertexId, VertexId)>, Vec<Vec<VertexId>>)> {
    if !(2..=24).contains(&i) {
        return Err(Error::Config(format!("G_i needs 2 <= i <= 24, got {i}")));
    }
    let total = 1usize << i;
    let (a, b) = (total - 2, total - 1);
    let mut cycles: Vec<Vec<VertexId>> = vec![Vec::new(); i as usize];
    let mut start = 0usize;
    for m in (1..i as usize).rev() {
        let len = 1usize << m;
        cycles[m] = (start..start + len).map(v).collect();
        start += len;
    }
    debug_assert_eq!(start, a);
    let (x, y) = (cycles[1][0], cycles[1][1]);
    let mut edges = vec![(x, v(a)), (y, v(b)), (x, y)];
    let mut members: Vec<VertexId> = vec![x, y, v(a), v(b)];
    for m in 2..i as usize {
        members.sort();
        let cyc = &cycles[m];
        for (k, &c) in cyc.iter().enumerate() {
            edges.push((c, members[k]));
        }
        for k in 0..cyc.len() {
            edges.push((cyc[k], cyc[(k + 1) % cyc.len()]));
        }
        members.extend_from_slice(cyc);
    }
    Ok((edges, cycles))
}

/// `G_i` built with undirected inserts, so the orientation comes from the
/// higher-outdegree rule. The trigger gives the first vertex of `C_{i-1}`
/// (`C_1` when `i = 2`) an out-edge to a fresh vertex. Under largest-first
/// resets at threshold 2 the vertices of `C_1` climb to outdegree `i`.
pub fn gen_gi(i: u32) -> Result<Gadget> {
    let (edges, cycles) = gi_edges(i)?;
    let total = 1usize << i;
    let mut setup = UpdateSequence::new();
    for x in 0..=total {
        setup.push(UpdateOp::InsertVertex(v(x)));
    }
    for (a, b) in edges {
        setup.push(UpdateOp::InsertEdge(a, b));
    }
    let top = cycles[(i as usize - 1).max(1)][0];
    Ok(Gadget {
        setup,
        trigger: UpdateOp::InsertDirected(top, v(total)),
        watch: Some(cycles[1][0]),
        alpha: 2,
        n: total + 1,
    })
}

/// Layout of the blown-up construction, exposed for measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GiAlphaLayout {
    /// `copies[u]` are the `alpha` copies of base vertex `u`.
    pub copies: Vec<Vec<VertexId>>,
    /// Base vertex ids of each cycle `C_m`, special vertex `s_m` first.
    pub cycles: Vec<Vec<usize>>,
    /// `t`-clique per cycle index.
    pub t_sets: Vec<Vec<VertexId>>,
    /// Base vertex `a` of the innermost graph.
    pub a: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

/// The modified `G_i` blown up by `alpha`.
///
/// Base graph: `G_1 = {a}`; `G_{m+1}` adds a cycle `C_m` of length
/// `|V_m| + 1` whose first vertex `s_m` has no partner and whose `k`-th
/// remaining vertex points to the `k`-th vertex of `G_m`. Each base vertex
/// becomes `alpha` copies, each base edge a complete bipartite graph, and
/// each `s_m` additionally gets an oriented clique among its copies, a
/// second oriented clique `t_m`, and edges `s_m^j -> t_m^l` for `l <= j`, so
/// that every copy of `s_m` has exactly `alpha` out-edges inside the two
/// cliques. (The source indexes the target set as `t_j`; reading it as the
/// `t`-set of the same cycle is what makes that count come out right.)
pub fn gi_alpha_layout(i: u32, alpha: u32) -> Result<GiAlphaLayout> {
    if !(2..=16).contains(&i) || alpha < 1 {
        return Err(Error::Config(format!(
            "G_i^alpha needs 2 <= i <= 16 and alpha >= 1, got i={i}, alpha={alpha}"
        )));
    }
    let al = alpha as usize;
    // base ids: outer cycles first so the trigger side has the smallest ids
    let mut lens = vec![0usize; i as usize];
    let mut size = 1usize;
    for len in lens.iter_mut().skip(1) {
        *len = size + 1;
        size = 2 * size + 1;
    }
    let mut cycles: Vec<Vec<usize>> = vec![Vec::new(); i as usize];
    let mut start = 0usize;
    for m in (1..i as usize).rev() {
        cycles[m] = (start..start + lens[m]).collect();
        start += lens[m];
    }
    let a = start;
    let base_n = a + 1;
    let copies: Vec<Vec<VertexId>> = (0..base_n)
        .map(|u| (0..al).map(|j| v(u * al + j)).collect())
        .collect();
    let mut next = base_n * al;
    let mut t_sets = vec![Vec::new(); i as usize];
    for t in t_sets.iter_mut().skip(1) {
        *t = (next..next + al).map(v).collect();
        next += al;
    }

    let mut edges = Vec::new();
    let mut members = vec![a];
    for m in 1..i as usize {
        members.sort();
        let cyc = &cycles[m];
        for (k, &c) in cyc.iter().enumerate().skip(1) {
            for &x in &copies[c] {
                for &y in &copies[members[k - 1]] {
                    edges.push((x, y));
                }
            }
        }
        for k in 0..cyc.len() {
            let (c, d) = (cyc[k], cyc[(k + 1) % cyc.len()]);
            if cyc.len() == 2 && k == 1 {
                break;
            }
            for &x in &copies[c] {
                for &y in &copies[d] {
                    edges.push((x, y));
                }
            }
        }
        let s = &copies[cyc[0]];
        let t = &t_sets[m];
        for j in 0..al {
            for l in j + 1..al {
                edges.push((s[j], s[l]));
                edges.push((t[j], t[l]));
            }
            for &tl in t.iter().take(j + 1) {
                edges.push((s[j], tl));
            }
        }
        members.extend_from_slice(cyc);
    }
    Ok(GiAlphaLayout {
        copies,
        cycles,
        t_sets,
        a,
        edges,
    })
}

/// `G_i^alpha` with explicit orientations; the trigger adds an out-edge at
/// the first copy of the outermost special vertex.
pub fn gen_gi_alpha(i: u32, alpha: u32) -> Result<Gadget> {
    let lay = gi_alpha_layout(i, alpha)?;
    let n = lay.copies.len() * alpha as usize + (i as usize - 1) * alpha as usize;
    let mut setup = UpdateSequence::new();
    for x in 0..=n {
        setup.push(UpdateOp::InsertVertex(v(x)));
    }
    for &(a, b) in &lay.edges {
        setup.push(UpdateOp::InsertDirected(a, b));
    }
    let s_top = lay.copies[lay.cycles[i as usize - 1][0]][0];
    Ok(Gadget {
        setup,
        trigger: UpdateOp::InsertDirected(s_top, v(n)),
        watch: Some(lay.copies[lay.a][0]),
        alpha: 2 * alpha,
        n: n + 1,
    })
}

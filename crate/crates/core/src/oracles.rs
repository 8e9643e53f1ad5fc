//! Ground-truth computations used to validate the maintained structures.
//!
//! Everything here is deliberately simple and independent of the dynamic
//! algorithms: exhaustive subset scans for density and arboricity, a max-flow
//! feasibility test for the best achievable outdegree, and direct checkers for
//! matchings and forest decompositions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{OrientedGraph, VertexId};

/// Hard ceiling for the exponential subset scans.
pub const SUBSET_SCAN_MAX: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityCertificate {
    pub subset: Vec<VertexId>,
    pub edges_inside: usize,
}

impl DensityCertificate {
    /// `|E(U)| / (|U| - 1)` as a numerator/denominator pair.
    pub fn value(&self) -> (usize, usize) {
        (self.edges_inside, self.subset.len() - 1)
    }

    /// Recomputes the induced edge count on `g`.
    pub fn recount(&self, g: &OrientedGraph) -> usize {
        let set: BTreeSet<_> = self.subset.iter().copied().collect();
        self.subset
            .iter()
            .map(|&u| g.out_neighbors(u).iter().filter(|w| set.contains(w)).count())
            .sum()
    }
}

struct SubsetTable {
    verts: Vec<VertexId>,
    /// Induced edge count per vertex mask.
    edges: Vec<u16>,
}

fn subset_table(g: &OrientedGraph, limit: usize) -> Result<SubsetTable> {
    let limit = limit.min(SUBSET_SCAN_MAX);
    let verts: Vec<VertexId> = g.vertices().collect();
    if verts.len() > limit {
        return Err(Error::OracleLimit(format!(
            "subset scan needs n <= {limit}, graph has {} vertices",
            verts.len()
        )));
    }
    let pos: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = vec![0u32; verts.len()];
    for (u, v) in g.edges() {
        adj[pos[&u]] |= 1 << pos[&v];
        adj[pos[&v]] |= 1 << pos[&u];
    }
    let total = 1usize << verts.len();
    let mut edges = vec![0u16; total];
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        edges[mask] = edges[rest] + (adj[low] & rest as u32).count_ones() as u16;
    }
    Ok(SubsetTable { verts, edges })
}

fn mask_vertices(verts: &[VertexId], mask: usize) -> Vec<VertexId> {
    (0..verts.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| verts[i])
        .collect()
}

/// Exact arboricity by scanning every vertex subset. Refuses graphs with more
/// than `limit` (capped at [`SUBSET_SCAN_MAX`]) vertices. The certificate is
/// `None` for edgeless graphs, whose arboricity is 0.
pub fn arboricity_bruteforce(
    g: &OrientedGraph,
    limit: usize,
) -> Result<(u32, Option<DensityCertificate>)> {
    let tab = subset_table(g, limit)?;
    let mut best: Option<(usize, u32)> = None;
    for (mask, &e) in tab.edges.iter().enumerate() {
        let k = mask.count_ones() as usize;
        if k < 2 || e == 0 {
            continue;
        }
        let a = (e as usize).div_ceil(k - 1) as u32;
        if best.map_or(true, |(_, b)| a > b) {
            best = Some((mask, a));
        }
    }
    Ok(match best {
        None => (0, None),
        Some((mask, a)) => (
            a,
            Some(DensityCertificate {
                subset: mask_vertices(&tab.verts, mask),
                edges_inside: tab.edges[mask] as usize,
            }),
        ),
    })
}

/// `⌈max_U |E(U)| / |U|⌉` by subset scan; a lower bound on the best outdegree.
pub fn max_density_bruteforce(g: &OrientedGraph, limit: usize) -> Result<u32> {
    let tab = subset_table(g, limit)?;
    Ok(tab
        .edges
        .iter()
        .enumerate()
        .skip(1)
        .map(|(mask, &e)| (e as usize).div_ceil(mask.count_ones() as usize) as u32)
        .max()
        .unwrap_or(0))
}

/// Dinic max-flow with a fixed adjacency order, so witnesses are reproducible.
struct Dinic {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    fn new(n: usize) -> Self {
        Dinic {
            head: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    /// Returns the arc index; its reverse is `idx ^ 1`.
    fn add(&mut self, a: usize, b: usize, c: u32) -> usize {
        let idx = self.to.len();
        self.head[a].push(idx);
        self.to.push(b);
        self.cap.push(c);
        self.head[b].push(idx + 1);
        self.to.push(a);
        self.cap.push(0);
        idx
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut q = VecDeque::from([s]);
        while let Some(x) = q.pop_front() {
            for &e in &self.head[x] {
                let y = self.to[e];
                if self.cap[e] > 0 && self.level[y] < 0 {
                    self.level[y] = self.level[x] + 1;
                    q.push_back(y);
                }
            }
        }
        self.level[t] >= 0
    }

    /// Blocking-flow DFS, iterative to survive long augmenting paths.
    fn augment(&mut self, s: usize, t: usize) -> u32 {
        let mut pushed = 0;
        let mut path: Vec<usize> = Vec::new();
        let mut x = s;
        loop {
            if x == t {
                let bottleneck = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                for &e in &path {
                    self.cap[e] -= bottleneck;
                    self.cap[e ^ 1] += bottleneck;
                }
                pushed += bottleneck;
                path.clear();
                x = s;
                continue;
            }
            let mut advanced = false;
            while self.iter[x] < self.head[x].len() {
                let e = self.head[x][self.iter[x]];
                let y = self.to[e];
                if self.cap[e] > 0 && self.level[y] == self.level[x] + 1 {
                    path.push(e);
                    x = y;
                    advanced = true;
                    break;
                }
                self.iter[x] += 1;
            }
            if !advanced {
                if x == s {
                    return pushed;
                }
                self.level[x] = -1;
                let e = path.pop().expect("non-root has an entry arc");
                x = self.to[e ^ 1];
                self.iter[x] += 1;
            }
        }
    }

    fn max_flow(&mut self, s: usize, t: usize) -> u32 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            flow += self.augment(s, t);
        }
        flow
    }
}

/// Orientation of `g` with every outdegree at most `delta`, if one exists.
pub fn orient_within(g: &OrientedGraph, delta: u32) -> Option<OrientedGraph> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let pos: BTreeMap<VertexId, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
    let m = edges.len();
    let (s, t) = (0, 1);
    let edge_node = |k: usize| 2 + k;
    let vert_node = |i: usize| 2 + m + i;
    let mut net = Dinic::new(2 + m + verts.len());
    let mut choice = Vec::with_capacity(m);
    for (k, &(a, b)) in edges.iter().enumerate() {
        net.add(s, edge_node(k), 1);
        let to_a = net.add(edge_node(k), vert_node(pos[&a]), 1);
        net.add(edge_node(k), vert_node(pos[&b]), 1);
        choice.push(to_a);
    }
    for i in 0..verts.len() {
        net.add(vert_node(i), t, delta);
    }
    if net.max_flow(s, t) as usize != m {
        return None;
    }
    let mut out = OrientedGraph::new();
    for &v in &verts {
        out.insert_vertex(v).expect("distinct ids");
    }
    for (k, &(a, b)) in edges.iter().enumerate() {
        // flow into an endpoint charges the edge to that endpoint's outdegree
        let (tail, head) = if net.cap[choice[k]] == 0 { (a, b) } else { (b, a) };
        out.insert_directed(tail, head).expect("edge from source graph");
    }
    Some(out)
}

/// Smallest achievable maximum outdegree, with a witness orientation.
pub fn min_max_outdegree(g: &OrientedGraph) -> (u32, OrientedGraph) {
    let n = g.vertex_count().max(1);
    let m = g.edge_count();
    let mut lo = m.div_ceil(n) as u32;
    let mut hi = g.max_outdegree() as u32;
    if lo >= hi {
        lo = hi;
    }
    let mut best = orient_within(g, hi).expect("current orientation is feasible");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match orient_within(g, mid) {
            Some(o) => {
                hi = mid;
                best = o;
            }
            None => lo = mid + 1,
        }
    }
    (hi, best)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingViolation {
    NotAnEdge(VertexId, VertexId),
    SharedVertex(VertexId),
    /// Both endpoints of this edge are unmatched.
    Augmentable(VertexId, VertexId),
}

impl fmt::Display for MatchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingViolation::NotAnEdge(u, v) => write!(f, "matched pair {u}-{v} is not an edge"),
            MatchingViolation::SharedVertex(v) => write!(f, "vertex {v} matched twice"),
            MatchingViolation::Augmentable(u, v) => {
                write!(f, "edge {u}-{v} has both endpoints free")
            }
        }
    }
}

pub fn check_maximal_matching(
    g: &OrientedGraph,
    matching: &[(VertexId, VertexId)],
) -> std::result::Result<(), MatchingViolation> {
    let mut matched = BTreeSet::new();
    for &(u, v) in matching {
        if !g.has_edge(u, v) {
            return Err(MatchingViolation::NotAnEdge(u, v));
        }
        for x in [u, v] {
            if !matched.insert(x) {
                return Err(MatchingViolation::SharedVertex(x));
            }
        }
    }
    for (u, v) in g.edges() {
        if !matched.contains(&u) && !matched.contains(&v) {
            return Err(MatchingViolation::Augmentable(u.min(v), u.max(v)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForestViolation {
    /// Adding this edge to its class closes a cycle.
    Cycle { class: usize, edge: (VertexId, VertexId) },
    Unassigned(VertexId, VertexId),
    NotAnEdge(VertexId, VertexId),
}

impl fmt::Display for ForestViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ForestViolation::Cycle { class, edge } => {
                write!(f, "class {class} has a cycle through {}-{}", edge.0, edge.1)
            }
            ForestViolation::Unassigned(u, v) => write!(f, "edge {u}-{v} has no class"),
            ForestViolation::NotAnEdge(u, v) => write!(f, "assigned pair {u}-{v} is not an edge"),
        }
    }
}

/// Union-find over dense indices with path halving.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already connected.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Checks that `assignment` covers exactly the edges of `g` and that every
/// class is acyclic. Keys are normalized to `(min, max)`.
pub fn check_forest_decomposition(
    g: &OrientedGraph,
    assignment: &BTreeMap<(VertexId, VertexId), usize>,
) -> std::result::Result<(), ForestViolation> {
    for &(u, v) in assignment.keys() {
        if !g.has_edge(u, v) {
            return Err(ForestViolation::NotAnEdge(u, v));
        }
    }
    let mut per_class: BTreeMap<usize, Vec<(VertexId, VertexId)>> = BTreeMap::new();
    for (u, v) in g.edges() {
        let key = (u.min(v), u.max(v));
        match assignment.get(&key) {
            Some(&c) => per_class.entry(c).or_default().push(key),
            None => return Err(ForestViolation::Unassigned(key.0, key.1)),
        }
    }
    let bound = g.id_bound();
    for (class, edges) in per_class {
        let mut uf = UnionFind::new(bound);
        for (u, v) in edges {
            if !uf.union(u.idx(), v.idx()) {
                return Err(ForestViolation::Cycle { class, edge: (u, v) });
            }
        }
    }
    Ok(())
}

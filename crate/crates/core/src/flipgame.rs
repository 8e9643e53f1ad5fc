//! Value maintenance over an orientation, with exact cost accounting.
//!
//! Every vertex holds an integer value and caches the values of its current
//! in-neighbors. Answering a query at `v` or changing `v`'s value requires a
//! scan of `v`'s out-neighbors, billed at `outdegree(v)`. Flipping an edge
//! out of `v` while operating at `v` is free; any other flip costs 1.
//!
//! The flipping game resets the operated vertex (flips all its out-edges
//! inward) on every query and value update; the threshold variant only does
//! so when the outdegree exceeds `Δ'`. [`BfFamily`] runs reset cascades under
//! the same accounting so the two can be compared on one sequence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Applied, InsertRule, OrientedGraph, VertexId};
use crate::orient::{Algorithm, Cascade, OrientConfig, Orienter};
use crate::seq::{UpdateOp, UpdateSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GameMode {
    Basic,
    Threshold(u32),
}

/// Value written for free vertices by the matching layer.
pub const FREE: i64 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Aggregate {
    #[default]
    Sum,
    Min,
    /// Number of entries equal to [`FREE`].
    CountFree,
}

impl Aggregate {
    pub fn apply(self, vals: impl Iterator<Item = i64>) -> i64 {
        match self {
            Aggregate::Sum => vals.sum(),
            Aggregate::Min => vals.min().unwrap_or(i64::MAX),
            Aggregate::CountFree => vals.filter(|&x| x == FREE).count() as i64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CostLedger {
    pub t: u64,
    /// Flips billed at cost 1.
    pub f_cost: u64,
    /// Flips of out-edges of the operated vertex during its own op.
    pub free_flips: u64,
    pub outdeg_charges: u64,
    /// Reset operations performed.
    pub r: u64,
}

impl CostLedger {
    pub fn c(&self) -> u64 {
        self.t + self.f_cost + self.outdeg_charges
    }

    pub fn flips(&self) -> u64 {
        self.f_cost + self.free_flips
    }

    /// Ledger fields plus the total, for appending to a metrics record.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "c": self.c(),
            "f_cost": self.f_cost,
            "free_flips": self.free_flips,
            "outdeg_charges": self.outdeg_charges,
            "r": self.r,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Answer {
    None,
    Value(i64),
    Adjacent(bool),
}

/// An orientation plus per-vertex values and in-neighbor value caches.
#[derive(Debug, Clone, Default)]
pub struct ValueGraph {
    pub g: OrientedGraph,
    value: Vec<i64>,
    cache: Vec<BTreeMap<VertexId, i64>>,
}

impl ValueGraph {
    pub fn new() -> Self {
        let mut g = OrientedGraph::new();
        g.enable_flip_log();
        ValueGraph {
            g,
            value: Vec::new(),
            cache: Vec::new(),
        }
    }

    pub fn value(&self, v: VertexId) -> i64 {
        self.value.get(v.idx()).copied().unwrap_or(0)
    }

    pub fn cached_in_values(&self, v: VertexId) -> &BTreeMap<VertexId, i64> {
        &self.cache[v.idx()]
    }

    fn slot(&mut self, v: VertexId) {
        if self.value.len() <= v.idx() {
            self.value.resize(v.idx() + 1, 0);
            self.cache.resize_with(v.idx() + 1, BTreeMap::new);
        }
    }

    /// Applies a topology op and keeps the caches in step.
    fn apply_topology(&mut self, applied: &Applied) {
        match applied {
            Applied::VertexInserted(v) => {
                self.slot(*v);
                self.value[v.idx()] = 0;
            }
            Applied::VertexDeleted(v, removed) => {
                for &(tail, head) in removed {
                    self.cache[head.idx()].remove(&tail);
                }
                self.cache[v.idx()].clear();
            }
            Applied::EdgeInserted { tail, head } => {
                let x = self.value[tail.idx()];
                self.cache[head.idx()].insert(*tail, x);
            }
            Applied::EdgeDeleted { tail, head } => {
                self.cache[head.idx()].remove(tail);
            }
            Applied::Nothing => {}
        }
    }

    /// Moves cache entries for every flip since the last call; returns the
    /// flips as `(old tail, old head)`.
    fn sync_flips(&mut self) -> Vec<(VertexId, VertexId)> {
        let log = self.g.drain_flip_log();
        for &(a, b) in &log {
            self.cache[b.idx()].remove(&a);
            let x = self.value[b.idx()];
            self.cache[a.idx()].insert(b, x);
        }
        log
    }

    /// Writes `x` at `v` and pushes it to every out-neighbor's cache.
    fn set_value(&mut self, v: VertexId, x: i64) {
        self.value[v.idx()] = x;
        for &w in self.g.out_neighbors(v) {
            self.cache[w.idx()].insert(v, x);
        }
    }

    fn aggregate(&self, v: VertexId, agg: Aggregate) -> i64 {
        let own = std::iter::once(self.value[v.idx()]);
        let outs = self.g.out_neighbors(v).iter().map(|w| self.value[w.idx()]);
        let ins = self.cache[v.idx()].values().copied();
        agg.apply(own.chain(outs).chain(ins))
    }

    /// Cache entries equal the true values of exactly the current in-neighbors.
    pub fn check_caches(&self) -> std::result::Result<(), String> {
        for v in self.g.vertices() {
            let cache = &self.cache[v.idx()];
            let ins = self.g.in_neighbors(v);
            if cache.len() != ins.len() || !cache.keys().eq(ins.iter()) {
                return Err(format!("cache of {v} lists {:?}, in-set is {ins:?}", cache.keys()));
            }
            for (u, x) in cache {
                if self.value[u.idx()] != *x {
                    return Err(format!("cache of {v} holds {x} for {u}, true value {}", self.value[u.idx()]));
                }
            }
        }
        Ok(())
    }
}

/// The flipping game (basic or threshold) over a [`ValueGraph`].
#[derive(Debug, Clone)]
pub struct FlipGame {
    pub vg: ValueGraph,
    pub mode: GameMode,
    pub agg: Aggregate,
    pub rule: InsertRule,
    pub ledger: CostLedger,
    /// Treat edge updates as ops at both endpoints (scan and maybe reset).
    pub touch_on_edge_updates: bool,
}

impl FlipGame {
    pub fn new(mode: GameMode) -> Self {
        FlipGame {
            vg: ValueGraph::new(),
            mode,
            agg: Aggregate::Sum,
            rule: InsertRule::ArbitraryFixed,
            ledger: CostLedger::default(),
            touch_on_edge_updates: false,
        }
    }

    pub fn with_aggregate(mut self, agg: Aggregate) -> Self {
        self.agg = agg;
        self
    }

    pub fn graph(&self) -> &OrientedGraph {
        &self.vg.g
    }

    /// Charges the scan at `v` and resets `v` if the mode calls for it.
    /// Returns whether a reset happened.
    pub fn touch(&mut self, v: VertexId) -> bool {
        let d = self.vg.g.out_len(v);
        self.ledger.outdeg_charges += d as u64;
        let reset = match self.mode {
            GameMode::Basic => true,
            GameMode::Threshold(dp) => d > dp as usize,
        };
        if reset {
            self.vg.g.reset(v);
            self.vg.g.metrics_mut().resets += 1;
            self.ledger.r += 1;
            self.ledger.free_flips += self.vg.sync_flips().len() as u64;
        }
        reset
    }

    pub fn op(&mut self, op: &UpdateOp) -> Result<Answer> {
        self.vg.g.begin_update(&op.endpoints());
        let t0 = self.vg.g.metrics().t;
        let applied = self.vg.g.apply_raw(op, self.rule)?;
        self.vg.apply_topology(&applied);
        self.ledger.t += self.vg.g.metrics().t - t0;
        let answer = match *op {
            UpdateOp::SetValue(v, x) => {
                // the scan in `touch` pays for pushing the value out
                self.vg.set_value(v, x);
                self.touch(v);
                Answer::None
            }
            UpdateOp::Query(v, None) => {
                let a = self.vg.aggregate(v, self.agg);
                self.touch(v);
                Answer::Value(a)
            }
            UpdateOp::Query(u, Some(v)) => {
                self.touch(u);
                self.touch(v);
                Answer::Adjacent(self.vg.g.has_edge(u, v))
            }
            UpdateOp::InsertEdge(u, v) | UpdateOp::InsertDirected(u, v) | UpdateOp::DeleteEdge(u, v)
                if self.touch_on_edge_updates =>
            {
                self.touch(u);
                self.touch(v);
                Answer::None
            }
            _ => Answer::None,
        };
        self.vg.g.note_steady();
        Ok(answer)
    }
}

/// Reset cascades run as a member of the same cost model: cascade flips are
/// billed 1 each, scans at value and query ops are billed the outdegree.
#[derive(Debug, Clone)]
pub struct BfFamily {
    pub vg: ValueGraph,
    pub orienter: Orienter,
    pub agg: Aggregate,
    pub ledger: CostLedger,
    /// Reset order of the last op's cascade, each with the flips it made.
    pub last_resets: Vec<(VertexId, usize)>,
}

impl BfFamily {
    pub fn new(cfg: OrientConfig) -> Result<Self> {
        Ok(BfFamily {
            vg: ValueGraph::new(),
            orienter: Orienter::new(Algorithm::Bf, cfg)?,
            agg: Aggregate::Sum,
            ledger: CostLedger::default(),
            last_resets: Vec::new(),
        })
    }

    pub fn graph(&self) -> &OrientedGraph {
        &self.vg.g
    }

    pub fn op(&mut self, op: &UpdateOp) -> Result<Answer> {
        let t0 = self.vg.g.metrics().t;
        let (applied, cascade) = self.orienter.apply(&mut self.vg.g, op)?;
        // topology first, so that cascade flips move existing cache entries
        let flips = self.vg.g.drain_flip_log();
        self.vg.apply_topology(&applied);
        for &(a, b) in &flips {
            self.vg.cache[b.idx()].remove(&a);
            let x = self.vg.value[b.idx()];
            self.vg.cache[a.idx()].insert(b, x);
        }
        self.ledger.t += self.vg.g.metrics().t - t0;
        self.ledger.f_cost += flips.len() as u64;
        self.last_resets.clear();
        if let Cascade::Reset(rc) = &cascade {
            self.ledger.r += rc.resets.len() as u64;
            self.last_resets = rc.resets.clone();
        }
        Ok(match *op {
            UpdateOp::SetValue(v, x) => {
                self.ledger.outdeg_charges += self.vg.g.out_len(v) as u64;
                self.vg.set_value(v, x);
                Answer::None
            }
            UpdateOp::Query(v, None) => {
                self.ledger.outdeg_charges += self.vg.g.out_len(v) as u64;
                Answer::Value(self.vg.aggregate(v, self.agg))
            }
            UpdateOp::Query(u, Some(v)) => {
                self.ledger.outdeg_charges += (self.vg.g.out_len(u) + self.vg.g.out_len(v)) as u64;
                Answer::Adjacent(self.vg.g.has_edge(u, v))
            }
            _ => Answer::None,
        })
    }
}

/// Game and competitor ledgers over one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub game: CostLedger,
    pub bf: CostLedger,
    /// Flips of the reset-cascade competitor.
    pub f_bf: u64,
    pub t: u64,
    pub game_peak_outdeg: u64,
}

/// Runs the game and the competitor side by side over `seq`.
pub fn compare(seq: &UpdateSequence, mode: GameMode, bf_cfg: OrientConfig) -> Result<Comparison> {
    let mut game = FlipGame::new(mode);
    let mut bf = BfFamily::new(bf_cfg)?;
    for (i, op) in seq.iter().enumerate() {
        let a = game.op(op).map_err(|e| e.at(i))?;
        let b = bf.op(op).map_err(|e| e.at(i))?;
        if a != b {
            return Err(Error::Protocol(format!("op #{i}: game answered {a:?}, competitor {b:?}")));
        }
    }
    Ok(Comparison {
        game: game.ledger,
        bf: bf.ledger,
        f_bf: bf.vg.g.metrics().f,
        t: game.ledger.t,
        game_peak_outdeg: game.vg.g.metrics().peak_outdeg,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResetSimulation {
    pub t: u64,
    pub r: u64,
    pub f: u64,
    /// Fewest flips made by any single simulated reset.
    pub min_flips_per_reset: u64,
    /// Flips per operation of the game run, `f / (t + r)`.
    pub k: f64,
}

impl ResetSimulation {
    /// `k t / (1 - k / (Δ + 1))`, infinite when `k >= Δ + 1`.
    pub fn flip_bound(&self, delta: u32) -> f64 {
        let denom = 1.0 - self.k / (delta as f64 + 1.0);
        if denom <= 0.0 {
            f64::INFINITY
        } else {
            self.k * self.t as f64 / denom
        }
    }
}

/// Replays `seq` through reset cascades at threshold `delta`, viewing every
/// cascade reset as a reset op of the game.
pub fn simulate_bf_via_resets(seq: &UpdateSequence, delta: u32) -> Result<ResetSimulation> {
    let orienter = Orienter::new(Algorithm::Bf, OrientConfig::bf(delta))?;
    let mut g = OrientedGraph::new();
    let mut r = 0u64;
    let mut min_flips = u64::MAX;
    for (i, op) in seq.iter().enumerate() {
        let (_, cascade) = orienter.apply(&mut g, op).map_err(|e| e.at(i))?;
        if let Cascade::Reset(rc) = cascade {
            for (_, flipped) in rc.resets {
                r += 1;
                min_flips = min_flips.min(flipped as u64);
            }
        }
    }
    let m = g.metrics();
    let per_reset = m.f as f64 / (delta as f64 + 1.0);
    if r as f64 > per_reset {
        return Err(Error::Protocol(format!("{r} resets exceed flips/(Δ+1) = {per_reset}")));
    }
    Ok(ResetSimulation {
        t: m.t,
        r,
        f: m.f,
        min_flips_per_reset: if r == 0 { 0 } else { min_flips },
        k: if m.t + r == 0 { 0.0 } else { m.f as f64 / (m.t + r) as f64 },
    })
}

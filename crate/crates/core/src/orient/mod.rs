//! Orientation maintenance: reset cascades (in several extraction orders)
//! and anti-reset cascades.

pub mod antireset;
pub mod bf;
pub mod bucket;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Applied, InsertRule, OrientedGraph};
use crate::metrics::Metrics;
use crate::seq::{UpdateOp, UpdateSequence};

pub use antireset::{antireset_cascade, AntiResetCascade};
pub use bf::{reset_cascade, ResetCascade, ResetStepper};
pub use bucket::BucketHeap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CascadeOrder {
    #[default]
    Fifo,
    Lifo,
    LargestFirst,
}

impl FromStr for CascadeOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fifo" => Ok(CascadeOrder::Fifo),
            "lifo" => Ok(CascadeOrder::Lifo),
            "largest" | "largest-first" => Ok(CascadeOrder::LargestFirst),
            _ => Err(Error::Config(format!("unknown cascade order `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientConfig {
    pub delta: u32,
    pub alpha: u32,
    pub order: CascadeOrder,
    pub insert_rule: InsertRule,
}

impl OrientConfig {
    pub fn bf(delta: u32) -> Self {
        OrientConfig {
            delta,
            alpha: 1,
            order: CascadeOrder::Fifo,
            insert_rule: InsertRule::ArbitraryFixed,
        }
    }

    pub fn antireset(delta: u32, alpha: u32) -> Self {
        OrientConfig {
            delta,
            alpha,
            order: CascadeOrder::Fifo,
            insert_rule: InsertRule::ArbitraryFixed,
        }
    }

    pub fn with_order(mut self, order: CascadeOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_rule(mut self, rule: InsertRule) -> Self {
        self.insert_rule = rule;
        self
    }

    /// Threshold separating internal from boundary vertices in anti-reset.
    pub fn inner_threshold(&self) -> u32 {
        self.delta.saturating_sub(2 * self.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Reset cascade in the configured order.
    Bf,
    /// Reset cascade, largest outdegree first regardless of the configured order.
    BfLargest,
    AntiReset,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Bf => "bf",
            Algorithm::BfLargest => "bf-largest",
            Algorithm::AntiReset => "antireset",
        })
    }
}

impl FromStr for Algorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bf" => Ok(Algorithm::Bf),
            "bf-largest" => Ok(Algorithm::BfLargest),
            "antireset" => Ok(Algorithm::AntiReset),
            _ => Err(Error::Config(format!("unknown orientation algorithm `{s}`"))),
        }
    }
}

/// What the rebalancing step did after one op.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cascade {
    None,
    Reset(ResetCascade),
    AntiReset(AntiResetCascade),
}

/// Applies ops to a graph and restores the outdegree bound after each one.
#[derive(Debug, Clone)]
pub struct Orienter {
    pub algo: Algorithm,
    pub cfg: OrientConfig,
}

impl Orienter {
    pub fn new(algo: Algorithm, cfg: OrientConfig) -> Result<Self> {
        if cfg.delta < 1 {
            return Err(Error::Config("delta must be at least 1".into()));
        }
        if algo == Algorithm::AntiReset && cfg.delta < 5 * cfg.alpha {
            return Err(Error::Config(format!(
                "anti-reset needs delta >= 5*alpha, got delta={}, alpha={}",
                cfg.delta, cfg.alpha
            )));
        }
        let mut cfg = cfg;
        if algo == Algorithm::BfLargest {
            cfg.order = CascadeOrder::LargestFirst;
        }
        Ok(Orienter { algo, cfg })
    }

    /// Applies `op` and rebalances. Returns the raw effect and the cascade.
    pub fn apply(&self, g: &mut OrientedGraph, op: &UpdateOp) -> Result<(Applied, Cascade)> {
        g.begin_update(&op.endpoints());
        let applied = g.apply_raw(op, self.cfg.insert_rule)?;
        let cascade = match applied {
            Applied::EdgeInserted { tail, .. } if g.out_len(tail) > self.cfg.delta as usize => {
                self.rebalance(g, tail)?
            }
            _ => Cascade::None,
        };
        g.note_steady();
        Ok((applied, cascade))
    }

    /// Restores the bound after `x` went over it.
    pub fn rebalance(&self, g: &mut OrientedGraph, x: crate::graph::VertexId) -> Result<Cascade> {
        Ok(match self.algo {
            Algorithm::Bf | Algorithm::BfLargest => Cascade::Reset(reset_cascade(g, &[x], &self.cfg)?),
            Algorithm::AntiReset => Cascade::AntiReset(antireset_cascade(g, x, &self.cfg)?),
        })
    }
}

fn single_update(
    algo: Algorithm,
    g: &mut OrientedGraph,
    op: &UpdateOp,
    cfg: &OrientConfig,
) -> Result<Metrics> {
    let before = g.metrics().clone();
    Orienter::new(algo, *cfg)?.apply(g, op)?;
    Ok(g.metrics().delta_since(&before))
}

/// One op under reset cascades in `cfg.order`; returns the metrics delta.
pub fn bf_update(g: &mut OrientedGraph, op: &UpdateOp, cfg: &OrientConfig) -> Result<Metrics> {
    single_update(Algorithm::Bf, g, op, cfg)
}

pub fn bf_largest_first_update(
    g: &mut OrientedGraph,
    op: &UpdateOp,
    cfg: &OrientConfig,
) -> Result<Metrics> {
    single_update(Algorithm::BfLargest, g, op, cfg)
}

pub fn antireset_update(g: &mut OrientedGraph, op: &UpdateOp, cfg: &OrientConfig) -> Result<Metrics> {
    single_update(Algorithm::AntiReset, g, op, cfg)
}

/// Replays `seq` from the empty graph. `observe` sees the graph after every
/// op together with that op's cascade.
pub fn run_sequence_with(
    algo: Algorithm,
    seq: &UpdateSequence,
    cfg: &OrientConfig,
    g: &mut OrientedGraph,
    mut observe: impl FnMut(usize, &OrientedGraph, &Cascade) -> Result<()>,
) -> Result<Metrics> {
    let orienter = Orienter::new(algo, *cfg)?;
    for (i, op) in seq.iter().enumerate() {
        let (_, cascade) = orienter.apply(g, op).map_err(|e| e.at(i))?;
        observe(i, g, &cascade).map_err(|e| e.at(i))?;
    }
    Ok(g.metrics().clone())
}

pub fn run_sequence(algo: Algorithm, seq: &UpdateSequence, cfg: &OrientConfig) -> Result<Metrics> {
    let mut g = OrientedGraph::new();
    run_sequence_with(algo, seq, cfg, &mut g, |_, _, _| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_random;

    #[test]
    fn empty_sequence_zero_metrics() {
        let m = run_sequence(Algorithm::Bf, &UpdateSequence::new(), &OrientConfig::bf(4)).unwrap();
        assert_eq!(m, Metrics::default());
    }

    #[test]
    fn deterministic_replay() {
        let seq = gen_random(2, 200, 3000, 11, 0.2);
        for algo in [Algorithm::Bf, Algorithm::BfLargest, Algorithm::AntiReset] {
            let cfg = OrientConfig::antireset(10, 2);
            let a = run_sequence(algo, &seq, &cfg).unwrap();
            let b = run_sequence(algo, &seq, &cfg).unwrap();
            assert_eq!(a, b, "{algo}");
            assert!(a.peak_outdeg_steady <= 10);
        }
    }

    #[test]
    fn error_names_op_index() {
        let seq = UpdateSequence::parse("iv 0\niv 1\nie 0 1\nie 1 0\n").unwrap();
        let err = run_sequence(Algorithm::Bf, &seq, &OrientConfig::bf(2)).unwrap_err();
        assert!(err.to_string().starts_with("op #3"), "{err}");
    }
}

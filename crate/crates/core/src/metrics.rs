//! Per-run counters shared by every algorithm.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Distance bucket used for flips whose edge is unreachable from the update endpoints.
pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    /// Edge insertions and deletions, including those a vertex deletion decomposes into.
    pub t: u64,
    /// Edge flips.
    pub f: u64,
    /// Reset (or anti-reset) operations.
    pub resets: u64,
    /// Largest outdegree seen at any instant, mid-cascade included.
    pub peak_outdeg: u64,
    /// Largest outdegree seen between updates.
    pub peak_outdeg_steady: u64,
    pub rounds: u64,
    pub messages: u64,
    pub peak_mem_entries: u64,
    /// Histogram keyed by the distance from the current update's endpoints to a flipped edge.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub flip_distance_hist: BTreeMap<u32, u64>,
}

impl Metrics {
    pub fn max_flip_distance(&self) -> Option<u32> {
        self.flip_distance_hist
            .keys()
            .copied()
            .filter(|&d| d != UNREACHABLE)
            .max()
    }

    pub fn flips_at_or_beyond(&self, d: u32) -> u64 {
        self.flip_distance_hist.range(d..).map(|(_, c)| *c).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("metrics serialize")
    }

    /// Field-wise difference, used for per-op snapshots.
    pub fn delta_since(&self, before: &Metrics) -> Metrics {
        let mut hist = BTreeMap::new();
        for (k, v) in &self.flip_distance_hist {
            let prev = before.flip_distance_hist.get(k).copied().unwrap_or(0);
            if *v > prev {
                hist.insert(*k, v - prev);
            }
        }
        Metrics {
            t: self.t - before.t,
            f: self.f - before.f,
            resets: self.resets - before.resets,
            peak_outdeg: self.peak_outdeg,
            peak_outdeg_steady: self.peak_outdeg_steady,
            rounds: self.rounds - before.rounds,
            messages: self.messages - before.messages,
            peak_mem_entries: self.peak_mem_entries,
            flip_distance_hist: hist,
        }
    }
}

//! Bucket priority queue keyed by small integer outdegrees.

use std::collections::{BTreeSet, HashMap};

use crate::graph::VertexId;

/// Max-priority queue over vertices with integer keys. Buckets are ordered
/// sets so that extraction among equal keys returns the smallest id.
#[derive(Debug, Clone, Default)]
pub struct BucketHeap {
    buckets: Vec<BTreeSet<VertexId>>,
    key: HashMap<VertexId, usize>,
    max: usize,
}

impl BucketHeap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.key.len()
    }

    pub fn is_empty(&self) -> bool {
        self.key.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.key.contains_key(&v)
    }

    pub fn key_of(&self, v: VertexId) -> Option<usize> {
        self.key.get(&v).copied()
    }

    /// Inserts `v` or moves it to bucket `k`.
    pub fn set(&mut self, v: VertexId, k: usize) {
        if let Some(old) = self.key.insert(v, k) {
            if old == k {
                return;
            }
            self.buckets[old].remove(&v);
        }
        if self.buckets.len() <= k {
            self.buckets.resize_with(k + 1, BTreeSet::new);
        }
        self.buckets[k].insert(v);
        if k > self.max {
            self.max = k;
        }
    }

    pub fn remove(&mut self, v: VertexId) -> bool {
        match self.key.remove(&v) {
            Some(k) => {
                self.buckets[k].remove(&v);
                true
            }
            None => false,
        }
    }

    pub fn peek_max(&mut self) -> Option<(VertexId, usize)> {
        if self.key.is_empty() {
            return None;
        }
        while self.buckets[self.max].is_empty() {
            self.max -= 1;
        }
        let v = *self.buckets[self.max].first().expect("non-empty bucket");
        Some((v, self.max))
    }

    /// Removes the vertex of largest key, smallest id among ties.
    pub fn pop_max(&mut self) -> Option<(VertexId, usize)> {
        let (v, k) = self.peek_max()?;
        self.buckets[k].remove(&v);
        self.key.remove(&v);
        Some((v, k))
    }
}

//! Per-node state of the distributed simulation.
//!
//! A node stores one record per out-neighbor and nothing per in-neighbor.
//! Its in-neighbors are reachable through a doubly linked chain whose links
//! live in the in-neighbors' records: the record of `x` for out-neighbor `p`
//! holds `x`'s left and right siblings in `p`'s chain. `p` itself only keeps
//! the chain head. The same layout gives a second chain over the free
//! in-neighbors, used by matching.

use std::collections::BTreeMap;

use crate::graph::VertexId;

/// Which chain a link belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Chain {
    /// All in-neighbors of the parent.
    Sib = 0,
    /// Free in-neighbors of the parent.
    Free = 1,
}

impl Chain {
    pub const ALL: [Chain; 2] = [Chain::Sib, Chain::Free];

    pub fn from_field(x: i64) -> Option<Chain> {
        match x {
            0 => Some(Chain::Sib),
            1 => Some(Chain::Free),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Link {
    #[default]
    Out,
    /// Join requested, links not received yet.
    Joining,
    In,
}

/// Membership of this node in one chain of an out-neighbor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Member {
    pub link: Link,
    pub want: bool,
    pub left: Option<VertexId>,
    pub right: Option<VertexId>,
}

impl Member {
    /// A request the pump still has to act on.
    pub fn unsettled(&self) -> bool {
        match self.link {
            Link::Out => self.want,
            Link::Joining => true,
            Link::In => !self.want,
        }
    }
}

/// Fields stored per out-record: the id, two chain memberships of two links
/// each, and one word of flags.
pub const RECORD_ENTRIES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OutRec {
    /// The edge no longer exists (deleted or flipped); kept until this node
    /// has left the parent's chains.
    pub gone: bool,
    pub colored: bool,
    pub child: bool,
    pub chain: [Member; 2],
}

impl OutRec {
    pub fn live(want_free: bool) -> Self {
        let mut r = OutRec::default();
        r.chain[Chain::Sib as usize].want = true;
        r.chain[Chain::Free as usize].want = want_free;
        r
    }

    pub fn settled_out(&self) -> bool {
        self.chain.iter().all(|m| m.link == Link::Out && !m.want)
    }
}

/// Exploration and countdown state while a cascade runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CascadeScratch {
    pub tree_parent: Option<VertexId>,
    pub awaiting: u32,
    pub height: u32,
    pub reported: bool,
    pub fire_at: Option<u64>,
    pub fired: bool,
}

impl CascadeScratch {
    fn entries(&self) -> usize {
        // parent, awaiting, height, fire time
        usize::from(self.tree_parent.is_some()) + 2 + usize::from(self.fire_at.is_some())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Search {
    pub awaiting: u32,
    pub best: Option<VertexId>,
    pub proposed: Option<VertexId>,
    /// A refusal ends the search instead of restarting it.
    pub single: bool,
}

/// Work handed to a node by the driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// New out-edge to the given vertex.
    AddOut(VertexId),
    /// The out-edge to the given vertex was deleted.
    DropOut(VertexId),
    /// The given out-neighbor is being deleted; forget it without messages.
    ParentGone(VertexId),
    /// Lost the mate.
    Freed,
    Search,
    ProposeTo(VertexId),
    Die,
}

#[derive(Debug, Clone, Default)]
pub struct Node {
    pub out: BTreeMap<VertexId, OutRec>,
    pub head: [Option<VertexId>; 2],
    /// Join requests waiting for the next batch round.
    pub joins: [Vec<VertexId>; 2],
    pub mate: Option<VertexId>,
    pub cascade: Option<CascadeScratch>,
    pub search: Option<Search>,
    pub retry_at: Option<u64>,
    pub events: Vec<Event>,
    pub dying: bool,
    pub peak_mem: usize,
}

impl Node {
    pub fn is_free(&self) -> bool {
        self.mate.is_none() && !self.dying
    }

    pub fn live_out(&self) -> impl Iterator<Item = (&VertexId, &OutRec)> {
        self.out.iter().filter(|(_, r)| !r.gone)
    }

    pub fn outdegree(&self) -> usize {
        self.live_out().count()
    }

    pub fn colored_out(&self) -> usize {
        self.live_out().filter(|(_, r)| r.colored).count()
    }

    /// Stored entries, as metered against the memory ceiling.
    pub fn mem(&self) -> usize {
        RECORD_ENTRIES * self.out.len()
            + self.joins.iter().map(Vec::len).sum::<usize>()
            + self.head.iter().filter(|h| h.is_some()).count()
            + usize::from(self.mate.is_some())
            + self.cascade.as_ref().map_or(0, CascadeScratch::entries)
            + self.search.as_ref().map_or(0, |_| 3)
            + usize::from(self.retry_at.is_some())
    }

    pub fn has_chain_work(&self) -> bool {
        self.joins.iter().any(|j| !j.is_empty())
            || self.out.values().any(|r| r.chain.iter().any(Member::unsettled))
    }
}

//! Sibling and free-in chain maintenance.
//!
//! Members request to join by message and leave by sending their two links
//! to the parent. Parents splice in batches on even rounds; members send
//! leaves on odd rounds only, after applying any link updates that arrived.
//! A parent therefore always splices with current link information, even
//! when several neighboring members leave at once.

use std::collections::BTreeMap;

use super::engine::{field_id, id_field, Ctx, Tag, KEEP, NIL};
use super::node::{Chain, Link, Node};
use super::sim::DistSim;
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// A member's leave as received by the parent.
pub(crate) type Leave = (VertexId, Option<VertexId>, Option<VertexId>);

impl DistSim {
    /// Member side: sends joins and (on odd rounds) leaves that are due.
    pub(crate) fn pump(&mut self, ctx: &mut Ctx, v: VertexId, node: &mut Node) {
        let odd = ctx.round() % 2 == 1;
        for (&p, rec) in node.out.iter_mut() {
            for kind in Chain::ALL {
                let m = &mut rec.chain[kind as usize];
                match m.link {
                    Link::Out if m.want => {
                        ctx.send(v, p, Tag::Join, [kind as i64, NIL, NIL]);
                        m.link = Link::Joining;
                    }
                    Link::In if !m.want && odd => {
                        ctx.send(v, p, Tag::Leave, [kind as i64, id_field(m.left), id_field(m.right)]);
                        m.link = Link::Out;
                        m.left = None;
                        m.right = None;
                    }
                    _ => {}
                }
            }
        }
        node.out.retain(|_, r| !(r.gone && r.settled_out()));
    }

    /// Member side: a link update from parent `p`.
    pub(crate) fn set_link(
        &mut self,
        v: VertexId,
        node: &mut Node,
        p: VertexId,
        kind: Chain,
        left: i64,
        right: i64,
    ) -> Result<()> {
        let rec = node.out.get_mut(&p).ok_or_else(|| {
            Error::Protocol(format!("link update from {p} to {v}, which holds no record for it"))
        })?;
        let m = &mut rec.chain[kind as usize];
        if m.link == Link::Out {
            return Err(Error::Protocol(format!(
                "link update from {p} to {v}, which is not in its {kind:?} chain"
            )));
        }
        if left != KEEP {
            m.left = field_id(left);
        }
        if right != KEEP {
            m.right = field_id(right);
        }
        m.link = Link::In;
        Ok(())
    }

    /// Parent side: applies the leaves of this round and pending joins to
    /// one chain, then tells every affected member its new links.
    pub(crate) fn batch(
        &mut self,
        ctx: &mut Ctx,
        v: VertexId,
        node: &mut Node,
        kind: Chain,
        leaves: &[Leave],
    ) {
        let k = kind as usize;
        let removed: BTreeMap<VertexId, (Option<VertexId>, Option<VertexId>)> =
            leaves.iter().map(|&(x, l, r)| (x, (l, r))).collect();
        let mut updates: BTreeMap<VertexId, [i64; 2]> = BTreeMap::new();
        let mut head = node.head[k];
        for &(l, r) in removed.values() {
            let mut a = l;
            while let Some(y) = a.filter(|y| removed.contains_key(y)) {
                a = removed[&y].0;
            }
            let mut b = r;
            while let Some(y) = b.filter(|y| removed.contains_key(y)) {
                b = removed[&y].1;
            }
            match a {
                Some(a) => updates.entry(a).or_insert([KEEP, KEEP])[1] = id_field(b),
                None => head = b,
            }
            if let Some(b) = b {
                updates.entry(b).or_insert([KEEP, KEEP])[0] = id_field(a);
            }
        }

        let mut joins = std::mem::take(&mut node.joins[k]);
        joins.sort_unstable();
        joins.dedup();
        if let Some(&last) = joins.last() {
            if let Some(old) = head {
                updates.entry(old).or_insert([KEEP, KEEP])[0] = id_field(Some(last));
            }
            for (i, &j) in joins.iter().enumerate() {
                let left = i.checked_sub(1).map(|p| joins[p]);
                let right = joins.get(i + 1).copied().or(head);
                updates.insert(j, [id_field(left), id_field(right)]);
            }
            head = Some(joins[0]);
        }
        node.head[k] = head;
        for (dst, [l, r]) in updates {
            ctx.send(v, dst, Tag::SetLink, [kind as i64, l, r]);
        }
    }

    /// Walks `p`'s chain of the given kind; errors on broken links.
    pub(crate) fn walk_chain(&self, p: VertexId, kind: Chain) -> Result<Vec<VertexId>> {
        let node = self.node(p)?;
        let mut out = Vec::new();
        let mut prev = None;
        let mut cur = node.head[kind as usize];
        while let Some(x) = cur {
            if out.len() > self.nodes.len() {
                return Err(Error::Protocol(format!("{kind:?} chain of {p} loops")));
            }
            let rec = self
                .node(x)?
                .out
                .get(&p)
                .filter(|r| !r.gone)
                .ok_or_else(|| Error::Protocol(format!("{x} chained under {p} without an edge")))?;
            let m = rec.chain[kind as usize];
            if m.link != Link::In || m.left != prev {
                return Err(Error::Protocol(format!(
                    "{kind:?} chain of {p} broken at {x} (left {:?}, expected {prev:?})",
                    m.left
                )));
            }
            out.push(x);
            prev = Some(x);
            cur = m.right;
        }
        Ok(out)
    }
}

//! Synchronous round engine.
//!
//! Messages sent in round `k` are delivered at the start of round `k + 1`,
//! grouped by destination and sorted by `(src, dst, seq)`. Only nodes with
//! deliveries or a scheduled wakeup execute. Nodes run in id order, so a
//! replay produces the same trace.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::VertexId;

/// Payload slot meaning "no value".
pub const NIL: i64 = -1;
/// Link slot meaning "leave unchanged".
pub const KEEP: i64 = -2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    Explore,
    Reject,
    Done,
    Wake,
    Ping,
    Flip,
    Join,
    Leave,
    SetLink,
    Probe,
    Status,
    Propose,
    Accept,
    Refuse,
    /// Free-form, for tests and tools.
    Note,
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("tag serializes");
        f.write_str(s.as_str().unwrap_or("?"))
    }
}

/// At most three integer or vertex fields; unused slots hold [`NIL`].
pub type Payload = [i64; 3];

pub fn id_field(v: Option<VertexId>) -> i64 {
    v.map_or(NIL, |v| v.0 as i64)
}

pub fn field_id(x: i64) -> Option<VertexId> {
    (x >= 0).then(|| VertexId(x as u32))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msg {
    pub src: VertexId,
    pub dst: VertexId,
    pub tag: Tag,
    pub payload: Payload,
    seq: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceLine {
    pub round: u64,
    pub src: u32,
    pub dst: u32,
    pub tag: Tag,
    pub payload: Vec<i64>,
}

impl TraceLine {
    fn of(round: u64, m: &Msg) -> Self {
        let used = m.payload.iter().rposition(|&x| x != NIL).map_or(0, |i| i + 1);
        TraceLine {
            round,
            src: m.src.0,
            dst: m.dst.0,
            tag: m.tag,
            payload: m.payload[..used].to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace line serializes")
    }
}

/// What a node can do while executing.
pub struct Ctx {
    round: u64,
    outbox: Vec<Msg>,
    wakeups: Vec<(u64, VertexId)>,
}

impl Ctx {
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn send(&mut self, src: VertexId, dst: VertexId, tag: Tag, payload: Payload) {
        self.outbox.push(Msg {
            src,
            dst,
            tag,
            payload,
            seq: 0,
        });
    }

    /// Runs `v` again in round `round` (at least the next one).
    pub fn wake_at(&mut self, v: VertexId, round: u64) {
        self.wakeups.push((round.max(self.round + 1), v));
    }

    pub fn wake_next(&mut self, v: VertexId) {
        self.wake_at(v, self.round + 1);
    }
}

pub trait Protocol {
    fn execute(&mut self, ctx: &mut Ctx, node: VertexId, inbox: &[Msg]) -> Result<()>;

    /// Called once per round after every node ran.
    fn end_round(&mut self, _round: u64, _executed: &[VertexId]) -> Result<()> {
        Ok(())
    }

    /// Stored entries at `node`, for round reports.
    fn mem(&self, _node: VertexId) -> usize {
        0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RoundReport {
    pub round: u64,
    pub delivered: usize,
    pub executed: Vec<VertexId>,
    pub mem: Vec<(VertexId, usize)>,
}

const TAIL: usize = 32;

#[derive(Debug, Clone, Default)]
pub struct Engine {
    round: u64,
    pending: Vec<Msg>,
    wakeups: BTreeMap<u64, BTreeSet<VertexId>>,
    seq: u64,
    pub messages: u64,
    pub per_tag: BTreeMap<Tag, u64>,
    trace: Option<Vec<TraceLine>>,
    tail: VecDeque<TraceLine>,
}

impl Engine {
    pub fn new() -> Self {
        Engine::default()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn record_trace(&mut self, on: bool) {
        self.trace = on.then(Vec::new);
    }

    pub fn trace(&self) -> &[TraceLine] {
        self.trace.as_deref().unwrap_or(&[])
    }

    pub fn take_trace(&mut self) -> Vec<TraceLine> {
        self.trace.as_mut().map(std::mem::take).unwrap_or_default()
    }

    pub fn is_quiescent(&self) -> bool {
        self.pending.is_empty() && self.wakeups.is_empty()
    }

    /// Schedules `v` to run in the next round.
    pub fn wake(&mut self, v: VertexId) {
        self.wakeups.entry(self.round + 1).or_default().insert(v);
    }

    /// Queues a message for delivery in the next round.
    pub fn inject(&mut self, src: VertexId, dst: VertexId, tag: Tag, payload: Payload) {
        self.seq += 1;
        self.pending.push(Msg {
            src,
            dst,
            tag,
            payload,
            seq: self.seq,
        });
    }

    pub fn step<P: Protocol>(&mut self, proto: &mut P) -> Result<RoundReport> {
        self.round += 1;
        let round = self.round;
        let mut inbound = std::mem::take(&mut self.pending);
        inbound.sort_by_key(|m| (m.src, m.dst, m.seq));
        let delivered = inbound.len();
        self.messages += delivered as u64;
        let mut by_dst: BTreeMap<VertexId, Vec<Msg>> = BTreeMap::new();
        for m in inbound {
            *self.per_tag.entry(m.tag).or_insert(0) += 1;
            let line = TraceLine::of(round, &m);
            if let Some(t) = &mut self.trace {
                t.push(line.clone());
            }
            if self.tail.len() == TAIL {
                self.tail.pop_front();
            }
            self.tail.push_back(line);
            by_dst.entry(m.dst).or_default().push(m);
        }
        let mut woken: BTreeSet<VertexId> = BTreeSet::new();
        while let Some(entry) = self.wakeups.first_entry() {
            if *entry.key() > round {
                break;
            }
            woken.extend(entry.remove());
        }
        for &v in &woken {
            by_dst.entry(v).or_default();
        }

        let mut ctx = Ctx {
            round,
            outbox: Vec::new(),
            wakeups: Vec::new(),
        };
        let mut executed = Vec::with_capacity(by_dst.len());
        for (v, inbox) in &by_dst {
            proto.execute(&mut ctx, *v, inbox)?;
            executed.push(*v);
        }
        for mut m in ctx.outbox {
            self.seq += 1;
            m.seq = self.seq;
            self.pending.push(m);
        }
        for (r, v) in ctx.wakeups {
            self.wakeups.entry(r).or_default().insert(v);
        }
        proto.end_round(round, &executed)?;
        let mem = executed.iter().map(|&v| (v, proto.mem(v))).collect();
        Ok(RoundReport {
            round,
            delivered,
            executed,
            mem,
        })
    }

    /// Steps until nothing is pending; returns the number of rounds used.
    pub fn run_until_quiescent<P: Protocol>(&mut self, proto: &mut P, limit: u64) -> Result<u64> {
        let mut used = 0;
        while !self.is_quiescent() {
            if used == limit {
                let tail = self
                    .tail
                    .iter()
                    .map(TraceLine::to_json)
                    .collect::<Vec<_>>()
                    .join("\n");
                return Err(Error::RoundLimit { limit, tail });
            }
            self.step(proto)?;
            used += 1;
        }
        Ok(used)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Forwards every message once more, up to a hop budget in slot 0.
    struct Relay(Vec<(u64, VertexId, usize)>);

    impl Protocol for Relay {
        fn execute(&mut self, ctx: &mut Ctx, node: VertexId, inbox: &[Msg]) -> Result<()> {
            self.0.push((ctx.round(), node, inbox.len()));
            for m in inbox {
                if m.payload[0] > 0 {
                    ctx.send(node, m.src, Tag::Note, [m.payload[0] - 1, NIL, NIL]);
                }
            }
            Ok(())
        }
    }

    #[test]
    fn empty_is_quiescent() {
        let mut e = Engine::new();
        assert_eq!(e.run_until_quiescent(&mut Relay(vec![]), 10).unwrap(), 0);
    }

    #[test]
    fn single_message_one_round() {
        let mut e = Engine::new();
        let mut p = Relay(vec![]);
        e.inject(VertexId(0), VertexId(1), Tag::Note, [0, NIL, NIL]);
        assert_eq!(e.run_until_quiescent(&mut p, 10).unwrap(), 1);
        assert_eq!(p.0, vec![(1, VertexId(1), 1)]);
        assert_eq!(e.messages, 1);
    }

    #[test]
    fn replay_is_identical_and_limit_reports_tail() {
        let run = || {
            let mut e = Engine::new();
            e.record_trace(true);
            e.inject(VertexId(2), VertexId(1), Tag::Note, [3, NIL, NIL]);
            e.inject(VertexId(0), VertexId(1), Tag::Note, [2, NIL, NIL]);
            e.run_until_quiescent(&mut Relay(vec![]), 10).unwrap();
            e.take_trace()
        };
        let a = run();
        assert_eq!(a, run());
        assert_eq!(a[0].src, 0);
        assert_eq!(a[0].to_json(), r#"{"round":1,"src":0,"dst":1,"tag":"note","payload":[2]}"#);

        let mut e = Engine::new();
        e.inject(VertexId(0), VertexId(1), Tag::Note, [100, NIL, NIL]);
        let err = e.run_until_quiescent(&mut Relay(vec![]), 5).unwrap_err();
        assert!(matches!(err, Error::RoundLimit { limit: 5, .. }));
    }
}

//! Synchronous message-passing simulation of the orientation, its
//! in-neighbor representation and a maximal matching.
//!
//! Every vertex is a node that knows only its own records and talks only to
//! its neighbors, one small message per edge per round. A node wakes up when
//! an update touches it or a message reaches it. The simulator keeps a
//! reference orientation alongside, for auditing only.

mod cascade;
mod chains;
pub mod engine;
mod matching;
pub mod node;
mod sim;

pub use cascade::CascadeReport;
pub use engine::{Engine, Msg, Payload, Protocol, RoundReport, Tag, TraceLine};
pub use sim::{DistConfig, DistSim, OpReport, MEM_FACTOR};

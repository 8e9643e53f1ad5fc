//! Dynamic low-outdegree edge orientations for uniformly sparse graphs.
//!
//! The crate maintains an orientation of a dynamic graph so that every vertex
//! keeps few outgoing edges, and layers applications on top of it. See the
//! `examples/` directory for runnable walkthroughs of each capability.

pub mod apps;
pub mod bench;
pub mod cli;
pub mod distsim;
pub mod error;
pub mod flipgame;
pub mod generators;
pub mod graph;
pub mod metrics;
pub mod oracles;
pub mod orient;
pub mod seq;

pub use error::{Error, GraphError, Result};
pub use graph::{Applied, InsertRule, OrientedGraph, VertexId};
pub use metrics::Metrics;
pub use seq::{UpdateOp, UpdateSequence};

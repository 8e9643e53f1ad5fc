//! Applications built on a maintained orientation: maximal matching,
//! adjacency queries and forest decompositions with adjacency labels.

pub mod adjacency;
pub mod forest;
pub mod matching;

pub use adjacency::AdjacencyStructure;
pub use forest::{forest_decompose, label_adjacent, make_labels, ForestDecomposition, ForestLabel};
pub use matching::{MatchEngine, Matching};

//! Graph and alignment kernels driven over the state machine, each with a
//! conventional reference implementation.

mod closure;
mod dijkstra;
mod graph;
mod nw;

pub use closure::{closure, minplus_bellman_ford, ClosureRun};
pub use dijkstra::{
    classical_dijkstra, recover_distances, temporal_dijkstra, tree_parent, tree_path_sum,
    validate_shortest_path_tree, DijkstraOptions, DijkstraResult, DijkstraRun, MaskVariant,
    ShortestPaths,
};
pub use graph::{Edge, Graph};
pub use nw::{classical_nw, encode, temporal_nw, AlignmentProblem, AlignmentRun};

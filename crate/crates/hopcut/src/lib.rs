//! Negative-weight single-source shortest paths through iterative hop
//! reduction: each pass augments the graph with shortcut edges routed through
//! compression (Steiner) vertices so that shortest paths need fewer designated
//! negative edges, until two hops suffice.
//!
//! The crate exposes the full machinery: the well-behaved input transform,
//! hop-limited distances, randomized threshold estimation, the shortcutting
//! engine with its structural invariants, a reference oracle suite for
//! differential testing, and DIMACS file handling. See `examples/` for one
//! runnable program per capability.

pub mod counters;
pub mod error;
pub mod graph;
pub mod hops;
pub mod oracle;

pub use error::{Error, NegCycle};
pub use graph::{
    apply_potential, snapshot_aux_lists, to_well_behaved, InputGraph, PotentialLedger, VertexId,
    VertexKind, Weight, WeightedDigraph,
};

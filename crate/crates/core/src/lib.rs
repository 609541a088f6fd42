//! Edge colorings of finite multigraphs and their combinatorial equivalents.
//!
//! Five layers:
//!
//! * [`graph`] — finite multigraphs with optional bipartitions, proper edge
//!   colorings, and the properness checker.
//! * [`matrix`] — sparse 0-1 matrices as point sets, partial-transversal and
//!   matching partitions, and the matrix ↔ bipartite-graph correspondence.
//! * [`chromatic`] — the coloring algorithms (first-fit 2Δ−1, König Δ,
//!   Vizing Δ+1), the decompositions built on them, and an exact brute-force
//!   chromatic-index oracle for desk-scale cross-checks.
//! * [`compactness`] — the tree of proper prefix colorings of a streamed
//!   graph: level counts, leftmost path extraction, and dead-node search.
//! * [`gadgets`] — point-set gadgets whose 2-transversal partitions encode
//!   membership in the range of one of two injections, plus the brute-force
//!   forcing verifier and separating-set extraction.

#![forbid(unsafe_code)]

pub mod chromatic;
pub mod compactness;
pub mod gadgets;
pub mod graph;
pub mod matrix;

pub use graph::{
    check_proper, infer_bipartition, EdgeColoring, EdgeId, FiniteMultigraph, Properness, Side,
    Vertex,
};
pub use matrix::{MatchingPartition, Point, PointSet, TransversalPartition};

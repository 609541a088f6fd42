//! Sparse 0-1 matrices as point sets, their partial-transversal partitions,
//! and the correspondence with bipartite graphs.
//!
//! A point set stands for an infinite 0-1 matrix with finitely many ones:
//! point `(i, j)` is a one in row `i`, column `j`. The coordinate order is
//! always (row, column).

use crate::graph::{
    check_proper, infer_bipartition, EdgeColoring, EdgeId, FiniteMultigraph, GraphError,
    NotBipartite, Properness, Side, Vertex,
};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// A single cell of the matrix, in canonical (row, column) order.
///
/// The derived `Ord` is lexicographic in (row, col), which fixes the
/// canonical enumeration order used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub row: u64,
    pub col: u64,
}

impl Point {
    pub fn new(row: u64, col: u64) -> Self {
        Point { row, col }
    }

    pub fn transpose(self) -> Self {
        Point {
            row: self.col,
            col: self.row,
        }
    }
}

/// A finite subset of ℕ×ℕ.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PointSet(BTreeSet<Point>);

impl PointSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Points in canonical (row, col) order.
    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.0.iter()
    }

    pub fn transpose(&self) -> PointSet {
        self.0.iter().map(|p| p.transpose()).collect()
    }

    /// Number of points in each nonempty row.
    pub fn row_counts(&self) -> BTreeMap<u64, usize> {
        let mut counts = BTreeMap::new();
        for p in &self.0 {
            *counts.entry(p.row).or_insert(0) += 1;
        }
        counts
    }

    /// Number of points in each nonempty column.
    pub fn col_counts(&self) -> BTreeMap<u64, usize> {
        let mut counts = BTreeMap::new();
        for p in &self.0 {
            *counts.entry(p.col).or_insert(0) += 1;
        }
        counts
    }

    /// At most one point in each row and each column.
    pub fn is_partial_transversal(&self) -> bool {
        self.row_counts().values().all(|&c| c <= 1)
            && self.col_counts().values().all(|&c| c <= 1)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.union(&other.0).copied().collect())
    }
}

impl FromIterator<Point> for PointSet {
    fn from_iter<T: IntoIterator<Item = Point>>(iter: T) -> Self {
        PointSet(iter.into_iter().collect())
    }
}

impl FromIterator<(u64, u64)> for PointSet {
    fn from_iter<T: IntoIterator<Item = (u64, u64)>>(iter: T) -> Self {
        iter.into_iter().map(|(r, c)| Point::new(r, c)).collect()
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = &'a Point;
    type IntoIter = std::collections::btree_set::Iter<'a, Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("blocks {0} and {1} are not disjoint")]
    Overlap(usize, usize),
    #[error("union of blocks does not equal the source set")]
    WrongUnion,
    #[error("block {block} is not a partial transversal (two points in {axis} {index})")]
    NotTransversal {
        block: usize,
        axis: &'static str,
        index: u64,
    },
    #[error("block {block} is not a matching (edges {a} and {b} share vertex {vertex})")]
    NotMatching {
        block: usize,
        a: EdgeId,
        b: EdgeId,
        vertex: Vertex,
    },
    #[error("block {block} does not cover vertex {vertex}")]
    NotComplete { block: usize, vertex: Vertex },
    #[error("coloring is improper: edges {first} and {second} share vertex {vertex} with color {color}")]
    Improper {
        first: EdgeId,
        second: EdgeId,
        vertex: Vertex,
        color: usize,
    },
    #[error(transparent)]
    Coloring(#[from] crate::graph::ColoringError),
}

/// An ordered list of pairwise-disjoint partial transversals covering a set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransversalPartition {
    pub blocks: Vec<PointSet>,
}

impl TransversalPartition {
    /// Checks the partition invariants against its source set.
    pub fn validate(&self, source: &PointSet) -> Result<(), PartitionError> {
        for (i, block) in self.blocks.iter().enumerate() {
            if let Some((axis, index)) = first_transversal_violation(block) {
                return Err(PartitionError::NotTransversal {
                    block: i,
                    axis,
                    index,
                });
            }
            for (j, other) in self.blocks.iter().enumerate().skip(i + 1) {
                if !block.is_disjoint(other) {
                    return Err(PartitionError::Overlap(i, j));
                }
            }
        }
        let union: PointSet = self
            .blocks
            .iter()
            .flat_map(|b| b.iter().copied())
            .collect();
        if &union != source {
            return Err(PartitionError::WrongUnion);
        }
        Ok(())
    }

    /// The index of the block containing `p`, if any.
    pub fn block_of(&self, p: &Point) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(p))
    }

    pub fn transpose(&self) -> TransversalPartition {
        TransversalPartition {
            blocks: self.blocks.iter().map(PointSet::transpose).collect(),
        }
    }
}

fn first_transversal_violation(block: &PointSet) -> Option<(&'static str, u64)> {
    if let Some((&row, _)) = block.row_counts().iter().find(|(_, &c)| c > 1) {
        return Some(("row", row));
    }
    if let Some((&col, _)) = block.col_counts().iter().find(|(_, &c)| c > 1) {
        return Some(("column", col));
    }
    None
}

/// An ordered list of edge-id sets partitioning a graph's edges, each a
/// matching.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatchingPartition {
    pub blocks: Vec<BTreeSet<EdgeId>>,
}

impl MatchingPartition {
    /// Checks the partition invariants; with `complete`, additionally checks
    /// that every block covers every vertex.
    pub fn validate(&self, g: &FiniteMultigraph, complete: bool) -> Result<(), PartitionError> {
        let mut seen: BTreeSet<EdgeId> = BTreeSet::new();
        for (i, block) in self.blocks.iter().enumerate() {
            let mut covered: BTreeSet<Vertex> = BTreeSet::new();
            let mut at: BTreeMap<Vertex, EdgeId> = BTreeMap::new();
            for &e in block {
                if !seen.insert(e) {
                    let prior = self
                        .blocks
                        .iter()
                        .position(|b| b.contains(&e))
                        .unwrap_or(i);
                    return Err(PartitionError::Overlap(prior, i));
                }
                let (u, v) = g.endpoints(e);
                for x in [u, v] {
                    if let Some(&other) = at.get(&x) {
                        return Err(PartitionError::NotMatching {
                            block: i,
                            a: other,
                            b: e,
                            vertex: x,
                        });
                    }
                    at.insert(x, e);
                    covered.insert(x);
                }
            }
            if complete {
                for &v in g.vertices() {
                    if !covered.contains(&v) {
                        return Err(PartitionError::NotComplete { block: i, vertex: v });
                    }
                }
            }
        }
        if seen.len() != g.edge_count() {
            return Err(PartitionError::WrongUnion);
        }
        Ok(())
    }
}

/// Builds the bipartite graph of a point set: one `Left` vertex per occupied
/// row, one `Right` vertex per occupied column, one edge per point.
///
/// Row `i` becomes vertex `2i`, column `j` becomes vertex `2j + 1`, so row
/// and column indices are recoverable from vertex ids. Edges are laid down
/// in canonical point order, so edge `e` corresponds to the `e`-th point.
pub fn matrix_to_graph(s: &PointSet) -> FiniteMultigraph {
    let mut sides: BTreeMap<Vertex, Side> = BTreeMap::new();
    let mut edges = Vec::with_capacity(s.len());
    for p in s.iter() {
        let v = 2 * p.row;
        let w = 2 * p.col + 1;
        sides.insert(v, Side::Left);
        sides.insert(w, Side::Right);
        edges.push((v, w));
    }
    let vertices: Vec<Vertex> = sides.keys().copied().collect();
    FiniteMultigraph::with_bipartition(vertices, edges, sides)
        .expect("point-set graph is bipartite by construction")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("parallel edges {a} and {b} cannot map to a single matrix cell")]
    ParallelEdges { a: EdgeId, b: EdgeId },
    #[error(transparent)]
    NotBipartite(#[from] NotBipartite),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Inverse of [`matrix_to_graph`]: each edge becomes the point (row of its
/// left endpoint, column of its right endpoint).
///
/// Indices come from the vertex ids: when every `Left` id is even and every
/// `Right` id is odd (the encoding `matrix_to_graph` produces), ids decode
/// as `2i` / `2j + 1`, so the round trip from a point set is the identity.
/// Otherwise each side is indexed by rank of vertex id within the side.
/// Graphs without a declared bipartition are 2-colored first.
pub fn graph_to_matrix(g: &FiniteMultigraph) -> Result<PointSet, MatrixError> {
    if let Some(dup) = first_parallel_pair(g) {
        return Err(MatrixError::ParallelEdges {
            a: dup.0,
            b: dup.1,
        });
    }
    let sides = infer_bipartition(g)?;
    let lefts: Vec<Vertex> = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| sides[v] == Side::Left)
        .collect();
    let rights: Vec<Vertex> = g
        .vertices()
        .iter()
        .copied()
        .filter(|v| sides[v] == Side::Right)
        .collect();
    let parity_consistent =
        lefts.iter().all(|v| v % 2 == 0) && rights.iter().all(|v| v % 2 == 1);
    let index_of = |v: Vertex| -> u64 {
        if parity_consistent {
            v / 2
        } else if sides[&v] == Side::Left {
            lefts.binary_search(&v).unwrap() as u64
        } else {
            rights.binary_search(&v).unwrap() as u64
        }
    };
    let mut points = PointSet::new();
    for &(u, v) in g.edges() {
        let (l, r) = if sides[&u] == Side::Left { (u, v) } else { (v, u) };
        points.insert(Point::new(index_of(l), index_of(r)));
    }
    Ok(points)
}

fn first_parallel_pair(g: &FiniteMultigraph) -> Option<(EdgeId, EdgeId)> {
    let mut seen: BTreeMap<(Vertex, Vertex), EdgeId> = BTreeMap::new();
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let key = (u.min(v), u.max(v));
        if let Some(&first) = seen.get(&key) {
            return Some((first, e));
        }
        seen.insert(key, e);
    }
    None
}

/// Groups a proper coloring's edges by color. Block order follows color
/// order; colors with no edges are skipped, so the number of blocks equals
/// the number of colors used.
pub fn coloring_to_matchings(
    g: &FiniteMultigraph,
    coloring: &EdgeColoring,
) -> Result<MatchingPartition, PartitionError> {
    reject_improper(g, coloring)?;
    let mut by_color: BTreeMap<usize, BTreeSet<EdgeId>> = BTreeMap::new();
    for e in 0..g.edge_count() {
        by_color.entry(coloring.color(e)).or_default().insert(e);
    }
    Ok(MatchingPartition {
        blocks: by_color.into_values().collect(),
    })
}

/// Groups the points of `s` by the color of their edges under a proper
/// coloring of `matrix_to_graph(s)` (edge `e` ↔ `e`-th point in canonical
/// order).
pub fn coloring_to_transversals(
    s: &PointSet,
    coloring: &EdgeColoring,
) -> Result<TransversalPartition, PartitionError> {
    let g = matrix_to_graph(s);
    reject_improper(&g, coloring)?;
    let mut by_color: BTreeMap<usize, PointSet> = BTreeMap::new();
    for (e, p) in s.iter().enumerate() {
        by_color.entry(coloring.color(e)).or_default().insert(*p);
    }
    Ok(TransversalPartition {
        blocks: by_color.into_values().collect(),
    })
}

fn reject_improper(g: &FiniteMultigraph, coloring: &EdgeColoring) -> Result<(), PartitionError> {
    match check_proper(g, coloring)? {
        Properness::Proper => Ok(()),
        Properness::Conflict {
            first,
            second,
            vertex,
            color,
        } => Err(PartitionError::Improper {
            first,
            second,
            vertex,
            color,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PointSet {
        [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect()
    }

    #[test]
    fn single_point_single_edge() {
        let s: PointSet = [(0u64, 0u64)].into_iter().collect();
        let g = matrix_to_graph(&s);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(graph_to_matrix(&g).unwrap(), s);
    }

    #[test]
    fn square_becomes_four_cycle() {
        let g = matrix_to_graph(&square());
        // hand oracle: enumerate the adjacencies
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (2, 1), (2, 3)]);
        assert_eq!(g.vertex_count(), 4);
        for &v in g.vertices() {
            assert_eq!(g.degree(v), 2);
        }
        assert_eq!(graph_to_matrix(&g).unwrap(), square());
    }

    #[test]
    fn diagonal_is_perfect_matching() {
        let s: PointSet = (0..5u64).map(|i| (i, i)).collect();
        let g = matrix_to_graph(&s);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.max_degree(), 1);
        assert_eq!(graph_to_matrix(&g).unwrap(), s);
    }

    #[test]
    fn degree_matches_row_and_column_counts() {
        let s: PointSet = [(0, 0), (0, 2), (0, 5), (3, 2), (7, 2)].into_iter().collect();
        let g = matrix_to_graph(&s);
        for (&row, &count) in &s.row_counts() {
            assert_eq!(g.degree(2 * row), count);
        }
        for (&col, &count) in &s.col_counts() {
            assert_eq!(g.degree(2 * col + 1), count);
        }
    }

    #[test]
    fn sparse_round_trip_preserves_indices() {
        let s: PointSet = [(5, 0), (9, 11)].into_iter().collect();
        assert_eq!(graph_to_matrix(&matrix_to_graph(&s)).unwrap(), s);
    }

    #[test]
    fn parallel_edges_have_no_matrix() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(
            graph_to_matrix(&g),
            Err(MatrixError::ParallelEdges { a: 0, b: 1 })
        );
    }

    #[test]
    fn unlabeled_graph_indexed_by_parity_when_consistent() {
        // path 0-1-2-3, no declared sides; BFS labels 0,2 Left and 1,3 Right,
        // which happens to match the parity encoding
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 3)]).unwrap();
        let s = graph_to_matrix(&g).unwrap();
        let expected: PointSet = [(0, 0), (1, 0), (1, 1)].into_iter().collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn unlabeled_graph_falls_back_to_rank_indexing() {
        // BFS from 0 labels 0,5 Left and 2 Right; 5 is odd, so ids cannot
        // decode by parity and sides are indexed by rank instead
        let g = FiniteMultigraph::from_edges(vec![(0, 2), (2, 5)]).unwrap();
        let s = graph_to_matrix(&g).unwrap();
        let expected: PointSet = [(0, 0), (1, 0)].into_iter().collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn c6_alternating_coloring_gives_two_complete_matchings() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
            .unwrap();
        let c = EdgeColoring::new(2, vec![1, 2, 1, 2, 1, 2]).unwrap();
        let parts = coloring_to_matchings(&g, &c).unwrap();
        assert_eq!(parts.blocks.len(), 2);
        for block in &parts.blocks {
            assert_eq!(block.len(), 3);
        }
        parts.validate(&g, true).unwrap();
    }

    #[test]
    fn singleton_coloring_single_block() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1)]).unwrap();
        let c = EdgeColoring::new(1, vec![1]).unwrap();
        let parts = coloring_to_matchings(&g, &c).unwrap();
        assert_eq!(parts.blocks.len(), 1);
        assert!(parts.blocks[0].contains(&0));
    }

    #[test]
    fn square_diagonals_are_two_transversals() {
        let s = square();
        // colors follow canonical point order (0,0),(0,1),(1,0),(1,1)
        let c = EdgeColoring::new(2, vec![1, 2, 2, 1]).unwrap();
        let parts = coloring_to_transversals(&s, &c).unwrap();
        assert_eq!(parts.blocks.len(), 2);
        parts.validate(&s).unwrap();
        let diag: PointSet = [(0, 0), (1, 1)].into_iter().collect();
        let anti: PointSet = [(0, 1), (1, 0)].into_iter().collect();
        assert_eq!(parts.blocks[0], diag);
        assert_eq!(parts.blocks[1], anti);
    }

    #[test]
    fn improper_coloring_rejected_with_witness() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2)]).unwrap();
        let c = EdgeColoring::new(2, vec![1, 1]).unwrap();
        let err = coloring_to_matchings(&g, &c).unwrap_err();
        assert!(matches!(err, PartitionError::Improper { vertex: 1, .. }));
    }

    #[test]
    fn empty_inputs_give_empty_outputs() {
        let s = PointSet::new();
        let g = matrix_to_graph(&s);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.vertex_count(), 0);
        assert_eq!(graph_to_matrix(&g).unwrap(), s);
        let parts = coloring_to_transversals(&s, &EdgeColoring::empty()).unwrap();
        assert!(parts.blocks.is_empty());
        parts.validate(&s).unwrap();
    }

    #[test]
    fn transpose_maps_transversals_to_transversals() {
        let s = square();
        let c = EdgeColoring::new(2, vec![1, 2, 2, 1]).unwrap();
        let parts = coloring_to_transversals(&s, &c).unwrap();
        let transposed = parts.transpose();
        transposed.validate(&s.transpose()).unwrap();
    }
}

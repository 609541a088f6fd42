//! Edge coloring algorithms and the decompositions built on them.
//!
//! Three algorithms with different palette guarantees:
//!
//! * [`greedy_edge_color`] — first-fit along an explicit edge order; never
//!   needs more than `2n − 1` colors when degrees are bounded by `n`.
//! * [`koenig_edge_color`] — bipartite graphs, exactly Δ colors, by
//!   alternating-path recoloring.
//! * [`vizing_edge_color`] — simple graphs, Δ + 1 colors, by fan rotation
//!   and Kempe-chain inversion.
//!
//! [`chromatic_index_bruteforce`] is the exact oracle the others are tested
//! against; it refuses inputs beyond its edge budget.

use crate::graph::{
    check_proper, infer_bipartition, EdgeColoring, EdgeId, FiniteMultigraph, NotBipartite,
    Properness, Vertex,
};
use crate::matrix::{
    coloring_to_matchings, coloring_to_transversals, matrix_to_graph, MatchingPartition,
    PartitionError, PointSet, TransversalPartition,
};
use std::collections::BTreeMap;
use thiserror::Error;

/// Largest edge count the exact oracle accepts by default.
pub const DEFAULT_BRUTEFORCE_EDGE_BUDGET: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChromaticError {
    #[error("vertex {vertex} has degree {degree}, above the bound {bound}")]
    DegreeBoundExceeded {
        vertex: Vertex,
        degree: usize,
        bound: usize,
    },
    #[error(transparent)]
    NotBipartite(#[from] NotBipartite),
    #[error("parallel edges {a} and {b} are not supported here")]
    ParallelEdges { a: EdgeId, b: EdgeId },
    #[error("vertex {vertex} has degree {degree}, expected {expected} in a regular graph")]
    NotRegular {
        vertex: Vertex,
        degree: usize,
        expected: usize,
    },
    #[error("{axis} {index} holds {count} points, above the bound {bound}")]
    LineOverflow {
        axis: &'static str,
        index: u64,
        count: usize,
        bound: usize,
    },
    #[error("graph has {edges} edges, above the brute-force budget {budget}")]
    BudgetExceeded { edges: usize, budget: usize },
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("order lists {got} edges, graph has {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("edge id {0} out of range")]
    OutOfRange(EdgeId),
    #[error("edge id {0} appears twice")]
    Duplicate(EdgeId),
}

/// A permutation of the edge ids `0..m`: the enumeration order used by the
/// first-fit coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeOrder(Vec<EdgeId>);

impl EdgeOrder {
    pub fn new(perm: Vec<EdgeId>, edge_count: usize) -> Result<Self, OrderError> {
        if perm.len() != edge_count {
            return Err(OrderError::WrongLength {
                got: perm.len(),
                expected: edge_count,
            });
        }
        let mut seen = vec![false; edge_count];
        for &e in &perm {
            if e >= edge_count {
                return Err(OrderError::OutOfRange(e));
            }
            if seen[e] {
                return Err(OrderError::Duplicate(e));
            }
            seen[e] = true;
        }
        Ok(Self(perm))
    }

    /// Edge ids in their natural order.
    pub fn identity(edge_count: usize) -> Self {
        Self((0..edge_count).collect())
    }

    pub fn as_slice(&self) -> &[EdgeId] {
        &self.0
    }
}

/// Per-vertex table mapping color − 1 to the incident edge carrying it.
struct ColorTable {
    slots: BTreeMap<Vertex, Vec<Option<EdgeId>>>,
}

impl ColorTable {
    fn new(g: &FiniteMultigraph, palette: usize) -> Self {
        Self {
            slots: g
                .vertices()
                .iter()
                .map(|&v| (v, vec![None; palette]))
                .collect(),
        }
    }

    fn get(&self, v: Vertex, color: usize) -> Option<EdgeId> {
        self.slots[&v][color - 1]
    }

    fn is_free(&self, v: Vertex, color: usize) -> bool {
        self.get(v, color).is_none()
    }

    fn least_free(&self, v: Vertex) -> usize {
        self.slots[&v]
            .iter()
            .position(Option::is_none)
            .expect("degree bound leaves a free color")
            + 1
    }

    fn set(&mut self, v: Vertex, color: usize, edge: EdgeId) {
        let slot = &mut self.slots.get_mut(&v).unwrap()[color - 1];
        debug_assert!(slot.is_none(), "color {color} already used at {v}");
        *slot = Some(edge);
    }

    fn clear(&mut self, v: Vertex, color: usize) {
        self.slots.get_mut(&v).unwrap()[color - 1] = None;
    }

    fn assign(&mut self, g: &FiniteMultigraph, edge: EdgeId, color: usize) {
        let (u, v) = g.endpoints(edge);
        self.set(u, color, edge);
        self.set(v, color, edge);
    }

    fn unassign(&mut self, g: &FiniteMultigraph, edge: EdgeId, color: usize) {
        let (u, v) = g.endpoints(edge);
        self.clear(u, color);
        self.clear(v, color);
    }

    /// The maximal path from `start` alternating colors `a`, `b`, beginning
    /// with the `a`-colored edge at `start` (empty if there is none).
    fn alternating_path(
        &self,
        g: &FiniteMultigraph,
        start: Vertex,
        a: usize,
        b: usize,
    ) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut x = start;
        let mut want = a;
        while let Some(e) = self.get(x, want) {
            path.push(e);
            x = g.other_endpoint(e, x);
            want = if want == a { b } else { a };
        }
        path
    }

    /// Swaps colors `a` and `b` along an alternating path.
    fn invert_path(
        &mut self,
        g: &FiniteMultigraph,
        path: &[EdgeId],
        assignment: &mut [usize],
        a: usize,
        b: usize,
    ) {
        for &e in path {
            self.unassign(g, e, assignment[e]);
        }
        for &e in path {
            let new = if assignment[e] == a { b } else { a };
            assignment[e] = new;
            self.assign(g, e, new);
        }
    }
}

fn check_degree_bound(g: &FiniteMultigraph, bound: usize) -> Result<(), ChromaticError> {
    for &v in g.vertices() {
        let degree = g.degree(v);
        if degree > bound {
            return Err(ChromaticError::DegreeBoundExceeded {
                vertex: v,
                degree,
                bound,
            });
        }
    }
    Ok(())
}

/// First-fit edge coloring: each edge, taken in `order`, receives the least
/// color not already present at either endpoint. Uses at most `2n − 1`
/// colors when all degrees are at most `n`, and is deterministic in the
/// order.
pub fn greedy_edge_color(
    g: &FiniteMultigraph,
    order: &EdgeOrder,
    bound: usize,
) -> Result<EdgeColoring, ChromaticError> {
    if order.as_slice().len() != g.edge_count() {
        return Err(ChromaticError::Order(OrderError::WrongLength {
            got: order.as_slice().len(),
            expected: g.edge_count(),
        }));
    }
    if g.edge_count() == 0 {
        return Ok(EdgeColoring::empty());
    }
    check_degree_bound(g, bound)?;
    let palette = 2 * bound - 1;
    let mut table = ColorTable::new(g, palette);
    let mut assignment = vec![0usize; g.edge_count()];
    for &e in order.as_slice() {
        let (u, v) = g.endpoints(e);
        let color = (1..=palette)
            .find(|&c| table.is_free(u, c) && table.is_free(v, c))
            .expect("at most 2n-2 colors are forbidden");
        assignment[e] = color;
        table.assign(g, e, color);
    }
    Ok(EdgeColoring::new(palette, assignment).expect("colors drawn from the palette"))
}

/// Proper coloring of a bipartite multigraph with exactly Δ colors.
///
/// Edges are inserted in id order. For edge `(u, v)` take the least color
/// `a` missing at `u` and `b` missing at `v`; if they differ, flip the
/// unique maximal `a`/`b` alternating path starting at `v` (it cannot reach
/// `u`), after which `a` is missing at both ends.
pub fn koenig_edge_color(g: &FiniteMultigraph) -> Result<EdgeColoring, ChromaticError> {
    infer_bipartition(g)?;
    let palette = g.max_degree();
    if palette == 0 {
        return Ok(EdgeColoring::empty());
    }
    let mut table = ColorTable::new(g, palette);
    let mut assignment = vec![0usize; g.edge_count()];
    for e in 0..g.edge_count() {
        let (u, v) = g.endpoints(e);
        let a = table.least_free(u);
        let b = table.least_free(v);
        if a != b {
            let path = table.alternating_path(g, v, a, b);
            debug_assert!(
                path.iter().all(|&pe| {
                    let (x, y) = g.endpoints(pe);
                    x != u && y != u
                }),
                "alternating path reached the opposite endpoint"
            );
            table.invert_path(g, &path, &mut assignment, a, b);
        }
        assignment[e] = a;
        table.assign(g, e, a);
    }
    Ok(EdgeColoring::new(palette, assignment).expect("colors drawn from the palette"))
}

/// Proper coloring of a simple graph from a palette of Δ + 1 colors, by the
/// fan-rotation / Kempe-chain induction.
pub fn vizing_edge_color(g: &FiniteMultigraph) -> Result<EdgeColoring, ChromaticError> {
    if let Some((a, b)) = first_parallel(g) {
        return Err(ChromaticError::ParallelEdges { a, b });
    }
    let delta = g.max_degree();
    if delta == 0 {
        return Ok(EdgeColoring::empty());
    }
    let palette = delta + 1;
    let mut table = ColorTable::new(g, palette);
    let mut assignment = vec![0usize; g.edge_count()];
    for e in 0..g.edge_count() {
        vizing_insert(g, e, palette, &mut table, &mut assignment);
    }
    Ok(EdgeColoring::new(palette, assignment).expect("colors drawn from the palette"))
}

fn first_parallel(g: &FiniteMultigraph) -> Option<(EdgeId, EdgeId)> {
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

/// Colors one uncolored edge `(u, v0)` given a proper partial coloring.
fn vizing_insert(
    g: &FiniteMultigraph,
    edge: EdgeId,
    palette: usize,
    table: &mut ColorTable,
    assignment: &mut [usize],
) {
    let (u, v0) = g.endpoints(edge);

    // Maximal fan: fan[i+1] is reached from u by an edge whose color is
    // free at fan[i] and not yet in the fan.
    let mut fan_vertices = vec![v0];
    let mut fan_edges = vec![edge];
    loop {
        let last = *fan_vertices.last().unwrap();
        let next = (1..=palette).find_map(|d| {
            if !table.is_free(last, d) {
                return None;
            }
            let e2 = table.get(u, d)?;
            let w = g.other_endpoint(e2, u);
            (!fan_vertices.contains(&w)).then_some((w, e2))
        });
        match next {
            Some((w, e2)) => {
                fan_vertices.push(w);
                fan_edges.push(e2);
            }
            None => break,
        }
    }

    let c = table.least_free(u);
    let d = table.least_free(*fan_vertices.last().unwrap());
    if c != d {
        let path = table.alternating_path(g, u, d, c);
        table.invert_path(g, &path, assignment, d, c);
    }

    // Rotate the shortest fan prefix that stays a fan under the current
    // coloring and ends at a vertex where d is free.
    let j = (0..fan_vertices.len())
        .find(|&j| {
            table.is_free(fan_vertices[j], d)
                && (0..j).all(|i| table.is_free(fan_vertices[i], assignment[fan_edges[i + 1]]))
        })
        .expect("fan rotation target exists");
    let shifted: Vec<usize> = (0..j).map(|i| assignment[fan_edges[i + 1]]).collect();
    for i in 1..=j {
        table.unassign(g, fan_edges[i], assignment[fan_edges[i]]);
    }
    for i in 0..j {
        assignment[fan_edges[i]] = shifted[i];
        table.assign(g, fan_edges[i], shifted[i]);
    }
    assignment[fan_edges[j]] = d;
    table.assign(g, fan_edges[j], d);
}

/// Splits an `n`-regular bipartite multigraph into `n` complete matchings,
/// one per color of its König coloring.
pub fn decompose_matchings(g: &FiniteMultigraph) -> Result<MatchingPartition, ChromaticError> {
    let expected = g.vertices().first().map_or(0, |&v| g.degree(v));
    for &v in g.vertices() {
        let degree = g.degree(v);
        if degree != expected {
            return Err(ChromaticError::NotRegular {
                vertex: v,
                degree,
                expected,
            });
        }
    }
    let coloring = koenig_edge_color(g)?;
    let partition = coloring_to_matchings(g, &coloring)?;
    debug_assert_eq!(partition.blocks.len(), expected);
    Ok(partition)
}

/// Writes a point set with at most `n` points per row and column as at most
/// `n` partial transversals, through the bipartite-graph correspondence.
pub fn decompose_transversals(
    s: &PointSet,
    bound: usize,
) -> Result<TransversalPartition, ChromaticError> {
    for (&row, &count) in &s.row_counts() {
        if count > bound {
            return Err(ChromaticError::LineOverflow {
                axis: "row",
                index: row,
                count,
                bound,
            });
        }
    }
    for (&col, &count) in &s.col_counts() {
        if count > bound {
            return Err(ChromaticError::LineOverflow {
                axis: "column",
                index: col,
                count,
                bound,
            });
        }
    }
    let g = matrix_to_graph(s);
    let coloring = koenig_edge_color(&g)?;
    Ok(coloring_to_transversals(s, &coloring)?)
}

/// Exact chromatic index by lowest-k-first backtracking over all colorings.
/// Desk-scale only: refuses graphs with more than `budget` edges.
pub fn chromatic_index_bruteforce_with_budget(
    g: &FiniteMultigraph,
    budget: usize,
) -> Result<usize, ChromaticError> {
    if g.edge_count() > budget {
        return Err(ChromaticError::BudgetExceeded {
            edges: g.edge_count(),
            budget,
        });
    }
    if g.edge_count() == 0 {
        return Ok(0);
    }
    let delta = g.max_degree();
    // 2Δ−1 always suffices (first-fit argument), so the scan terminates.
    for k in delta..=(2 * delta - 1) {
        if colorable_with(g, k) {
            return Ok(k);
        }
    }
    unreachable!("2Δ−1 colors always suffice")
}

/// [`chromatic_index_bruteforce_with_budget`] at the default budget.
pub fn chromatic_index_bruteforce(g: &FiniteMultigraph) -> Result<usize, ChromaticError> {
    chromatic_index_bruteforce_with_budget(g, DEFAULT_BRUTEFORCE_EDGE_BUDGET)
}

fn colorable_with(g: &FiniteMultigraph, k: usize) -> bool {
    if k >= 64 {
        // colors are tracked in a u64 bitmask per vertex
        return true;
    }
    let vindex: BTreeMap<Vertex, usize> = g
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (vindex[&u], vindex[&v]))
        .collect();
    let mut used = vec![0u64; g.vertex_count()];

    fn rec(edges: &[(usize, usize)], used: &mut [u64], i: usize, max_used: usize, k: usize) -> bool {
        if i == edges.len() {
            return true;
        }
        let (u, v) = edges[i];
        // symmetry break: a fresh color index may only be one above the
        // largest used so far
        let ceiling = k.min(max_used + 1);
        for c in 1..=ceiling {
            let bit = 1u64 << (c - 1);
            if used[u] & bit == 0 && used[v] & bit == 0 {
                used[u] |= bit;
                used[v] |= bit;
                if rec(edges, used, i + 1, max_used.max(c), k) {
                    return true;
                }
                used[u] &= !bit;
                used[v] &= !bit;
            }
        }
        false
    }

    rec(&edges, &mut used, 0, 0, k)
}

/// Asserts properness, for callers that only need a yes/no.
pub fn is_proper(g: &FiniteMultigraph, c: &EdgeColoring) -> bool {
    matches!(check_proper(g, c), Ok(Properness::Proper))
}

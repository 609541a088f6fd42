//! Finite multigraphs, bipartitions, and proper edge colorings.

use std::collections::BTreeMap;
use thiserror::Error;

/// Vertex identifier. Arbitrary natural numbers; they need not be dense.
pub type Vertex = u64;

/// Edge identifier. Always dense: edge `e` is the `e`-th edge of the graph.
pub type EdgeId = usize;

/// Side of a bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(Vertex),
    #[error("edge {edge} references undeclared vertex {vertex}")]
    UnknownEndpoint { edge: EdgeId, vertex: Vertex },
    #[error("edge {edge} is a loop at vertex {vertex}")]
    Loop { edge: EdgeId, vertex: Vertex },
    #[error("vertex {0} has no side in the declared bipartition")]
    MissingSide(Vertex),
    #[error("edge {edge} joins two {side:?} vertices ({u}, {v})")]
    EdgeWithinSide {
        edge: EdgeId,
        side: Side,
        u: Vertex,
        v: Vertex,
    },
}

/// An undirected multigraph on explicitly listed vertices.
///
/// Parallel edges are permitted, loops are not. Edge ids are the positions
/// in the edge list, so they are unique and dense by construction. An
/// optional bipartition labels every vertex `Left` or `Right`; construction
/// rejects edges that do not cross sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMultigraph {
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
    bipartition: Option<BTreeMap<Vertex, Side>>,
    incidence: BTreeMap<Vertex, Vec<EdgeId>>,
}

impl FiniteMultigraph {
    pub fn new(vertices: Vec<Vertex>, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        Self::build(vertices, edges, None)
    }

    pub fn with_bipartition(
        vertices: Vec<Vertex>,
        edges: Vec<(Vertex, Vertex)>,
        sides: BTreeMap<Vertex, Side>,
    ) -> Result<Self, GraphError> {
        Self::build(vertices, edges, Some(sides))
    }

    /// Convenience constructor: vertex set is taken to be the endpoints.
    pub fn from_edges(edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut vertices: Vec<Vertex> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        Self::build(vertices, edges, None)
    }

    fn build(
        mut vertices: Vec<Vertex>,
        edges: Vec<(Vertex, Vertex)>,
        bipartition: Option<BTreeMap<Vertex, Side>>,
    ) -> Result<Self, GraphError> {
        vertices.sort_unstable();
        for pair in vertices.windows(2) {
            if pair[0] == pair[1] {
                return Err(GraphError::DuplicateVertex(pair[0]));
            }
        }
        let mut incidence: BTreeMap<Vertex, Vec<EdgeId>> =
            vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (edge, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(GraphError::Loop { edge, vertex: u });
            }
            for endpoint in [u, v] {
                incidence
                    .get_mut(&endpoint)
                    .ok_or(GraphError::UnknownEndpoint {
                        edge,
                        vertex: endpoint,
                    })?
                    .push(edge);
            }
        }
        if let Some(sides) = &bipartition {
            for &v in &vertices {
                if !sides.contains_key(&v) {
                    return Err(GraphError::MissingSide(v));
                }
            }
            for (edge, &(u, v)) in edges.iter().enumerate() {
                if sides[&u] == sides[&v] {
                    return Err(GraphError::EdgeWithinSide {
                        edge,
                        side: sides[&u],
                        u,
                        v,
                    });
                }
            }
        }
        Ok(Self {
            vertices,
            edges,
            bipartition,
            incidence,
        })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, edge: EdgeId) -> (Vertex, Vertex) {
        self.edges[edge]
    }

    /// The endpoint of `edge` other than `vertex`.
    pub fn other_endpoint(&self, edge: EdgeId, vertex: Vertex) -> Vertex {
        let (u, v) = self.edges[edge];
        if u == vertex {
            v
        } else {
            u
        }
    }

    pub fn bipartition(&self) -> Option<&BTreeMap<Vertex, Side>> {
        self.bipartition.as_ref()
    }

    /// Ids of the edges incident to `vertex`, in ascending order.
    pub fn incident_edges(&self, vertex: Vertex) -> &[EdgeId] {
        self.incidence.get(&vertex).map_or(&[], Vec::as_slice)
    }

    /// Degree counts parallel edges with multiplicity.
    pub fn degree(&self, vertex: Vertex) -> usize {
        self.incident_edges(vertex).len()
    }

    /// Maximum degree Δ; 0 for edgeless graphs.
    pub fn max_degree(&self) -> usize {
        self.incidence.values().map(Vec::len).max().unwrap_or(0)
    }

    /// True when no two edges join the same pair of vertices.
    pub fn is_simple(&self) -> bool {
        let mut seen: Vec<(Vertex, Vertex)> = self
            .edges
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        let before = seen.len();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == before
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("palette size {palette} cannot hold color {color} on edge {edge}")]
    ColorOutOfRange {
        edge: EdgeId,
        color: usize,
        palette: usize,
    },
    #[error("coloring assigns {assigned} edges but the graph has {expected}")]
    WrongEdgeCount { assigned: usize, expected: usize },
}

/// A total assignment of colors `1..=palette_size` to edge ids `0..m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    palette_size: usize,
    assignment: Vec<usize>,
}

impl EdgeColoring {
    pub fn new(palette_size: usize, assignment: Vec<usize>) -> Result<Self, ColoringError> {
        for (edge, &color) in assignment.iter().enumerate() {
            if color == 0 || color > palette_size {
                return Err(ColoringError::ColorOutOfRange {
                    edge,
                    color,
                    palette: palette_size,
                });
            }
        }
        Ok(Self {
            palette_size,
            assignment,
        })
    }

    /// The empty coloring of an edgeless graph.
    pub fn empty() -> Self {
        Self {
            palette_size: 0,
            assignment: Vec::new(),
        }
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn color(&self, edge: EdgeId) -> usize {
        self.assignment[edge]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn edge_count(&self) -> usize {
        self.assignment.len()
    }

    /// Number of distinct colors actually used.
    pub fn colors_used(&self) -> usize {
        let mut seen = vec![false; self.palette_size + 1];
        let mut count = 0;
        for &c in &self.assignment {
            if !seen[c] {
                seen[c] = true;
                count += 1;
            }
        }
        count
    }
}

/// Verdict of [`check_proper`], with a witness for the improper case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness {
    Proper,
    /// Two distinct edges sharing `vertex` both carry `color`.
    Conflict {
        first: EdgeId,
        second: EdgeId,
        vertex: Vertex,
        color: usize,
    },
}

impl Properness {
    pub fn is_proper(&self) -> bool {
        matches!(self, Properness::Proper)
    }
}

/// Checks that no two edges incident to a common vertex share a color.
///
/// Scans edges in id order, so the reported conflict is the first one
/// encountered: the second edge id is minimal, then the first.
pub fn check_proper(
    g: &FiniteMultigraph,
    coloring: &EdgeColoring,
) -> Result<Properness, ColoringError> {
    if coloring.edge_count() != g.edge_count() {
        return Err(ColoringError::WrongEdgeCount {
            assigned: coloring.edge_count(),
            expected: g.edge_count(),
        });
    }
    // (vertex, color) -> earliest edge id seen
    let mut seen: BTreeMap<(Vertex, usize), EdgeId> = BTreeMap::new();
    for edge in 0..g.edge_count() {
        let color = coloring.color(edge);
        let (u, v) = g.endpoints(edge);
        for vertex in [u, v] {
            if let Some(&first) = seen.get(&(vertex, color)) {
                return Ok(Properness::Conflict {
                    first,
                    second: edge,
                    vertex,
                    color,
                });
            }
        }
        seen.insert((u, color), edge);
        seen.insert((v, color), edge);
    }
    Ok(Properness::Proper)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph is not bipartite: odd cycle {0:?}")]
pub struct NotBipartite(pub Vec<Vertex>);

/// Returns the declared bipartition, or 2-colors the graph by breadth-first
/// traversal (lowest vertex id first; each component's root goes `Left`).
///
/// Fails with an odd-cycle witness when no bipartition exists.
pub fn infer_bipartition(g: &FiniteMultigraph) -> Result<BTreeMap<Vertex, Side>, NotBipartite> {
    if let Some(sides) = g.bipartition() {
        return Ok(sides.clone());
    }
    let mut sides: BTreeMap<Vertex, Side> = BTreeMap::new();
    // parent edge used to reach each vertex, for odd-cycle reconstruction
    let mut parent: BTreeMap<Vertex, (Vertex, EdgeId)> = BTreeMap::new();
    for &root in g.vertices() {
        if sides.contains_key(&root) {
            continue;
        }
        sides.insert(root, Side::Left);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let side = sides[&v];
            let flipped = match side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
            for &e in g.incident_edges(v) {
                let w = g.other_endpoint(e, v);
                match sides.get(&w) {
                    None => {
                        sides.insert(w, flipped);
                        parent.insert(w, (v, e));
                        queue.push_back(w);
                    }
                    Some(&s) if s == side => {
                        return Err(NotBipartite(odd_cycle(&parent, v, w)));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(sides)
}

/// Reconstructs the odd cycle closed by an edge between same-side `u`, `v`.
fn odd_cycle(parent: &BTreeMap<Vertex, (Vertex, EdgeId)>, u: Vertex, v: Vertex) -> Vec<Vertex> {
    let ancestors = |mut x: Vertex| {
        let mut path = vec![x];
        while let Some(&(p, _)) = parent.get(&x) {
            path.push(p);
            x = p;
        }
        path
    };
    let up = ancestors(u);
    let vp = ancestors(v);
    // Trim the shared tail above the least common ancestor.
    let mut i = up.len();
    let mut j = vp.len();
    while i > 1 && j > 1 && up[i - 2] == vp[j - 2] {
        i -= 1;
        j -= 1;
    }
    // lca .. u, then v .. child-of-lca; the closing edge is (u, v).
    let mut cycle: Vec<Vertex> = up[..i].iter().rev().copied().collect();
    cycle.extend_from_slice(&vp[..j - 1]);
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> FiniteMultigraph {
        FiniteMultigraph::from_edges(vec![(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn max_degree_counts_multiplicity() {
        let edgeless = FiniteMultigraph::new(vec![0, 1, 2], vec![]).unwrap();
        assert_eq!(edgeless.max_degree(), 0);

        let triangle = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(triangle.max_degree(), 2);

        let parallel = FiniteMultigraph::from_edges(vec![(0, 1), (0, 1)]).unwrap();
        assert_eq!(parallel.max_degree(), 2);
        assert!(!parallel.is_simple());
    }

    #[test]
    fn loops_rejected() {
        assert_eq!(
            FiniteMultigraph::from_edges(vec![(3, 3)]),
            Err(GraphError::Loop { edge: 0, vertex: 3 })
        );
    }

    #[test]
    fn bipartition_validated_at_construction() {
        let sides: BTreeMap<Vertex, Side> =
            [(0, Side::Left), (1, Side::Left)].into_iter().collect();
        let err = FiniteMultigraph::with_bipartition(vec![0, 1], vec![(0, 1)], sides).unwrap_err();
        assert!(matches!(err, GraphError::EdgeWithinSide { .. }));
    }

    #[test]
    fn check_proper_path() {
        let g = path3();
        let ok = EdgeColoring::new(2, vec![1, 2]).unwrap();
        assert!(check_proper(&g, &ok).unwrap().is_proper());

        let bad = EdgeColoring::new(2, vec![1, 1]).unwrap();
        assert_eq!(
            check_proper(&g, &bad).unwrap(),
            Properness::Conflict {
                first: 0,
                second: 1,
                vertex: 1,
                color: 1
            }
        );
    }

    #[test]
    fn check_proper_c6_alternating() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)])
            .unwrap();
        let c = EdgeColoring::new(2, vec![1, 2, 1, 2, 1, 2]).unwrap();
        // independent oracle: direct adjacency scan over all edge pairs
        for a in 0..g.edge_count() {
            for b in (a + 1)..g.edge_count() {
                let (au, av) = g.endpoints(a);
                let (bu, bv) = g.endpoints(b);
                let adjacent = au == bu || au == bv || av == bu || av == bv;
                if adjacent {
                    assert_ne!(c.color(a), c.color(b), "edges {a} and {b} clash");
                }
            }
        }
        assert!(check_proper(&g, &c).unwrap().is_proper());
    }

    #[test]
    fn malformed_coloring_rejected() {
        let g = path3();
        let short = EdgeColoring::new(2, vec![1]).unwrap();
        assert_eq!(
            check_proper(&g, &short),
            Err(ColoringError::WrongEdgeCount {
                assigned: 1,
                expected: 2
            })
        );
        assert!(EdgeColoring::new(1, vec![2]).is_err());
        assert!(EdgeColoring::new(1, vec![0]).is_err());
    }

    #[test]
    fn infer_bipartition_even_cycle() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sides = infer_bipartition(&g).unwrap();
        assert_eq!(sides[&0], Side::Left);
        assert_eq!(sides[&1], Side::Right);
        assert_eq!(sides[&2], Side::Left);
        assert_eq!(sides[&3], Side::Right);
    }

    #[test]
    fn infer_bipartition_rejects_odd_cycle() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let NotBipartite(cycle) = infer_bipartition(&g).unwrap_err();
        assert_eq!(cycle.len() % 2, 1);
        // the witness is an actual cycle in the graph
        for i in 0..cycle.len() {
            let a = cycle[i];
            let b = cycle[(i + 1) % cycle.len()];
            assert!(
                g.edges().iter().any(|&(u, v)| (u, v) == (a, b) || (v, u) == (a, b)),
                "no edge between {a} and {b}"
            );
        }
    }

    #[test]
    fn parallel_edges_fine_in_bipartite() {
        let g = FiniteMultigraph::from_edges(vec![(0, 1), (0, 1)]).unwrap();
        assert!(infer_bipartition(&g).is_ok());
    }
}

//! The tree of proper prefix colorings of a streamed graph.
//!
//! A [`LazyGraph`] presents its edges one stage at a time. A sequence σ over
//! `{1..n}` is a tree node when coloring edge `e(i)` with `σ(i)` is proper on
//! the first `|σ|` edges. The tree is prefix-closed; searching it at a given
//! depth realizes, at desk scale, the compactness step that turns finite
//! colorability into colorings of the whole stream.
//!
//! All searches run leftmost-first (color 1 before color 2, …), so results
//! are reproducible, and they count every node they visit against an
//! explicit budget, refusing rather than truncating silently.

use crate::graph::Vertex;
use std::collections::BTreeMap;
use thiserror::Error;

/// Default cap on the number of tree nodes a single query may visit.
pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;

/// A color sequence; entry `i` colors the stage-`i` edge.
pub type PrefixColoring = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("stage {stage} repeats the edge ({u}, {v})")]
    DuplicateEdge { stage: usize, u: Vertex, v: Vertex },
    #[error("stage {stage} is a loop at vertex {vertex}")]
    Loop { stage: usize, vertex: Vertex },
    #[error("degree bound must be at least 1 when the stream has edges")]
    ZeroPalette,
    #[error("stage {stage} edge ({u}, {v}) exceeds the bound function ({witness} allowed from {v_lo})")]
    BoundViolated {
        stage: usize,
        u: Vertex,
        v: Vertex,
        v_lo: Vertex,
        witness: Vertex,
    },
    #[error("position {position} carries color {color}, palette is 1..={palette}")]
    MalformedNode {
        position: usize,
        color: usize,
        palette: usize,
    },
    #[error("prefix length {len} exceeds the materialized stream length {stream}")]
    PrefixTooLong { len: usize, stream: usize },
    #[error("depth {depth} exceeds the materialized stream length {stream}")]
    DepthTooDeep { depth: usize, stream: usize },
    #[error("search visited {explored} nodes, above the budget {budget}")]
    BudgetExceeded { explored: usize, budget: usize },
}

/// A stage-enumerated edge stream with a declared degree bound and an
/// optional boundedness witness.
///
/// Only a finite truncation is ever materialized; the stage order is the
/// enumeration order of the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyGraph {
    edges: Vec<(Vertex, Vertex)>,
    degree_bound: usize,
    bound_table: Option<BTreeMap<Vertex, Vertex>>,
}

impl LazyGraph {
    pub fn new(edges: Vec<(Vertex, Vertex)>, degree_bound: usize) -> Result<Self, TreeError> {
        Self::build(edges, degree_bound, None)
    }

    /// Attaches a boundedness witness: a table `v → f(v)` with `w ≤ f(v)`
    /// for every streamed edge `{v, w}` with `w > v`. Validated against the
    /// materialized stream.
    pub fn with_bound(
        edges: Vec<(Vertex, Vertex)>,
        degree_bound: usize,
        bound_table: BTreeMap<Vertex, Vertex>,
    ) -> Result<Self, TreeError> {
        Self::build(edges, degree_bound, Some(bound_table))
    }

    /// Streams a finite graph's edges in id order.
    pub fn from_graph(g: &crate::graph::FiniteMultigraph, degree_bound: usize) -> Result<Self, TreeError> {
        Self::build(g.edges().to_vec(), degree_bound, None)
    }

    fn build(
        edges: Vec<(Vertex, Vertex)>,
        degree_bound: usize,
        bound_table: Option<BTreeMap<Vertex, Vertex>>,
    ) -> Result<Self, TreeError> {
        if degree_bound == 0 && !edges.is_empty() {
            return Err(TreeError::ZeroPalette);
        }
        let mut seen = std::collections::BTreeSet::new();
        for (stage, &(u, v)) in edges.iter().enumerate() {
            if u == v {
                return Err(TreeError::Loop { stage, vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::DuplicateEdge { stage, u, v });
            }
            if let Some(table) = &bound_table {
                let (lo, hi) = (u.min(v), u.max(v));
                let allowed = table.get(&lo).copied().unwrap_or(0);
                if hi > allowed {
                    return Err(TreeError::BoundViolated {
                        stage,
                        u,
                        v,
                        v_lo: lo,
                        witness: allowed,
                    });
                }
            }
        }
        Ok(Self {
            edges,
            degree_bound,
            bound_table,
        })
    }

    /// Number of stages materialized.
    pub fn stream_len(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_at(&self, stage: usize) -> (Vertex, Vertex) {
        self.edges[stage]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    /// The palette size n; the tree lives in `[n]^{<ℕ}`.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn bound_table(&self) -> Option<&BTreeMap<Vertex, Vertex>> {
        self.bound_table.as_ref()
    }
}

/// True iff σ properly colors the first `|σ|` streamed edges.
///
/// Tree membership is prefix-closed: every prefix of a node is a node.
pub fn is_tree_node(g: &LazyGraph, sigma: &[usize]) -> Result<bool, TreeError> {
    if sigma.len() > g.stream_len() {
        return Err(TreeError::PrefixTooLong {
            len: sigma.len(),
            stream: g.stream_len(),
        });
    }
    for (position, &color) in sigma.iter().enumerate() {
        if color == 0 || color > g.degree_bound() {
            return Err(TreeError::MalformedNode {
                position,
                color,
                palette: g.degree_bound(),
            });
        }
    }
    for i in 0..sigma.len() {
        let (u, v) = g.edge_at(i);
        for j in 0..i {
            if sigma[j] != sigma[i] {
                continue;
            }
            let (x, y) = g.edge_at(j);
            if x == u || x == v || y == u || y == v {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Depth-first walker over the prefix tree, charging each visited node
/// against the budget. Colors at each vertex are tracked incrementally.
struct TreeSearch<'a> {
    g: &'a LazyGraph,
    used: BTreeMap<(Vertex, usize), usize>, // (vertex, color) -> incidence count
    explored: usize,
    budget: usize,
}

impl<'a> TreeSearch<'a> {
    fn new(g: &'a LazyGraph, budget: usize) -> Self {
        Self {
            g,
            used: BTreeMap::new(),
            explored: 0,
            budget,
        }
    }

    fn charge(&mut self) -> Result<(), TreeError> {
        self.explored += 1;
        if self.explored > self.budget {
            return Err(TreeError::BudgetExceeded {
                explored: self.explored,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn color_allowed(&self, stage: usize, color: usize) -> bool {
        let (u, v) = self.g.edge_at(stage);
        !self.used.contains_key(&(u, color)) && !self.used.contains_key(&(v, color))
    }

    fn push(&mut self, stage: usize, color: usize) {
        let (u, v) = self.g.edge_at(stage);
        *self.used.entry((u, color)).or_insert(0) += 1;
        *self.used.entry((v, color)).or_insert(0) += 1;
    }

    fn pop(&mut self, stage: usize, color: usize) {
        let (u, v) = self.g.edge_at(stage);
        for key in [(u, color), (v, color)] {
            let n = self.used.get_mut(&key).unwrap();
            *n -= 1;
            if *n == 0 {
                self.used.remove(&key);
            }
        }
    }
}

fn check_depth(g: &LazyGraph, depth: usize) -> Result<(), TreeError> {
    if depth > g.stream_len() {
        return Err(TreeError::DepthTooDeep {
            depth,
            stream: g.stream_len(),
        });
    }
    Ok(())
}

/// Number of tree nodes at the given depth, by pruned depth-first
/// enumeration.
pub fn level_count(g: &LazyGraph, depth: usize, budget: usize) -> Result<usize, TreeError> {
    check_depth(g, depth)?;
    let mut search = TreeSearch::new(g, budget);

    fn rec(s: &mut TreeSearch, level: usize, depth: usize) -> Result<usize, TreeError> {
        s.charge()?;
        if level == depth {
            return Ok(1);
        }
        let mut total = 0;
        for color in 1..=s.g.degree_bound() {
            if s.color_allowed(level, color) {
                s.push(level, color);
                let below = rec(s, level + 1, depth);
                s.pop(level, color);
                total += below?;
            }
        }
        Ok(total)
    }

    rec(&mut search, 0, depth)
}

/// The leftmost tree node at the given depth, by backtracking; `None` when
/// the tree dies first.
pub fn find_prefix_path(
    g: &LazyGraph,
    depth: usize,
    budget: usize,
) -> Result<Option<PrefixColoring>, TreeError> {
    check_depth(g, depth)?;
    let mut search = TreeSearch::new(g, budget);
    let mut sigma = Vec::with_capacity(depth);

    fn rec(
        s: &mut TreeSearch,
        sigma: &mut PrefixColoring,
        depth: usize,
    ) -> Result<bool, TreeError> {
        s.charge()?;
        if sigma.len() == depth {
            return Ok(true);
        }
        let level = sigma.len();
        for color in 1..=s.g.degree_bound() {
            if s.color_allowed(level, color) {
                s.push(level, color);
                sigma.push(color);
                if rec(s, sigma, depth)? {
                    return Ok(true);
                }
                sigma.pop();
                s.pop(level, color);
            }
        }
        Ok(false)
    }

    Ok(rec(&mut search, &mut sigma, depth)?.then_some(sigma))
}

/// First tree node, in preorder (prefixes first, then smaller colors), none
/// of whose extensions reach the full stream length. `None` when every node
/// extends.
pub fn find_dead_node(g: &LazyGraph, budget: usize) -> Result<Option<PrefixColoring>, TreeError> {
    let full = g.stream_len();
    let mut search = TreeSearch::new(g, budget);
    let mut sigma: PrefixColoring = Vec::new();

    // Returns (alive, preorder-first dead node strictly within the subtree);
    // a dead node is returned as the subtree root itself when nothing below
    // reaches full depth.
    fn rec(
        s: &mut TreeSearch,
        sigma: &mut PrefixColoring,
        full: usize,
    ) -> Result<(bool, Option<PrefixColoring>), TreeError> {
        s.charge()?;
        if sigma.len() == full {
            return Ok((true, None));
        }
        let level = sigma.len();
        let mut alive = false;
        let mut first_dead: Option<PrefixColoring> = None;
        for color in 1..=s.g.degree_bound() {
            if !s.color_allowed(level, color) {
                continue;
            }
            s.push(level, color);
            sigma.push(color);
            let result = rec(s, sigma, full);
            let snapshot = sigma.clone();
            sigma.pop();
            s.pop(level, color);
            let (child_alive, child_dead) = result?;
            if child_alive {
                alive = true;
                if first_dead.is_none() {
                    first_dead = child_dead;
                }
            } else if first_dead.is_none() {
                // the child itself is the preorder-first dead node below it
                first_dead = Some(snapshot);
            }
        }
        if alive {
            Ok((true, first_dead))
        } else {
            Ok((false, None))
        }
    }

    let (alive, dead) = rec(&mut search, &mut sigma, full)?;
    if alive {
        Ok(dead)
    } else {
        // even the root is dead
        Ok(Some(Vec::new()))
    }
}

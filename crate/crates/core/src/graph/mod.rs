//! Immutable finite graphs, colored graphs, generators and metric queries.
//!
//! Vertices are dense `0..n` indices. Generators that carry a semantic
//! identity for their vertices (cube coordinates, product pairs) return a
//! table alongside the graph; one-based conventions live only in those tables.

mod colored;
mod generators;
mod metrics;

pub use colored::ColoredGraph;
pub use generators::{
    complete, cycle, edgeless, make_cube, make_diag_cube, path, strong_product, Cube, CubeCoord, Product, ProductVertex,
};
pub use metrics::{ball, ball_multi, bfs_distances, graph_metrics, Diameter, GraphMetrics};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0} in a simple graph")]
    SelfLoop(usize),
    #[error("loop at vertex {0} in a graph that is not a pattern graph")]
    LoopNotAllowed(usize),
    #[error("cube side length must be at least 1")]
    ZeroSide,
    #[error("strong product factors must be loop-free")]
    LoopedFactor,
    #[error("duplicate color name {0}")]
    DuplicateColor(String),
}

/// A finite undirected graph.
///
/// Simple graphs have no loops. Pattern graphs (the `H` of a flip
/// structure) may carry loops, which are kept apart from the edge lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    loops: Vec<bool>,
    pattern: bool,
    edge_count: usize,
}

impl Graph {
    /// Builds a simple graph. Duplicate edges are merged; self-loops are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        Self::build(n, edges, std::iter::empty(), false)
    }

    /// Builds a pattern graph, which may have loops.
    pub fn pattern(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        Self::build(n, edges, loops, true)
    }

    fn build(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        loops: impl IntoIterator<Item = usize>,
        pattern: bool,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut loop_flags = vec![false; n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                if pattern {
                    loop_flags[u] = true;
                    continue;
                }
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for v in loops {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if !pattern {
                return Err(GraphError::LoopNotAllowed(v));
            }
            loop_flags[v] = true;
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            loops: loop_flags,
            pattern,
            edge_count: edge_count / 2,
        })
    }

    /// Builds a simple graph from already sorted, deduplicated, symmetric
    /// adjacency lists. Only used by in-crate constructions that uphold this.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        debug_assert!(adj
            .iter()
            .enumerate()
            .all(|(u, l)| { l.windows(2).all(|w| w[0] < w[1]) && l.iter().all(|&v| v != u && v < n) }));
        Graph {
            adj,
            loops: vec![false; n],
            pattern: false,
            edge_count,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_pattern(&self) -> bool {
        self.pattern
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    pub fn loops(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops.iter().enumerate().filter(|(_, &l)| l).map(|(v, _)| v)
    }

    pub fn has_loops(&self) -> bool {
        self.loops.iter().any(|&l| l)
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The subgraph induced on `vertices`, in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<InducedSubgraph, GraphError> {
        let n = self.n();
        let mut index = vec![usize::MAX; n];
        let mut original = Vec::with_capacity(vertices.len());
        for &v in vertices {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            if index[v] == usize::MAX {
                index[v] = original.len();
                original.push(v);
            }
        }
        let adj = original
            .iter()
            .map(|&old| {
                let mut list: Vec<usize> = self.adj[old]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect::<Vec<_>>();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let loops = original.iter().map(|&old| self.loops[old]).collect();
        Ok(InducedSubgraph {
            graph: Graph {
                adj,
                loops,
                pattern: self.pattern,
                edge_count,
            },
            original,
            index,
        })
    }

    /// Complement on the same vertex set (loops are dropped).
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let adj = (0..n)
            .map(|u| (0..n).filter(|&v| v != u && !self.has_edge(u, v)).collect())
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Edge set as a sorted vector, handy for equality assertions.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }
}

/// An induced subgraph together with its vertex correspondence.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// New index to original vertex.
    pub original: Vec<usize>,
    index: Vec<usize>,
}

impl InducedSubgraph {
    /// Original vertex to new index, if the vertex was kept.
    pub fn index_of(&self, old: usize) -> Option<usize> {
        self.index.get(old).copied().filter(|&i| i != usize::MAX)
    }
}

/// Sorted, deduplicated copy of a vertex list.
pub fn vertex_set(vertices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut v: Vec<usize> = vertices.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_out_of_range() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::new(3, [(0, 3)]),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn pattern_graph_keeps_loops_apart() {
        let h = Graph::pattern(2, [(0, 1), (1, 1)], [0]).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert!(h.has_loop(0) && h.has_loop(1));
        assert!(!h.has_edge(1, 1));
    }

    #[test]
    fn duplicate_edges_merge() {
        let g = Graph::new(3, [(0, 1), (1, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_list(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn induced_full_empty_and_face() {
        let q = make_cube(2).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let full = q.graph.induced_subgraph(&all).unwrap();
        assert_eq!(full.graph, q.graph);
        let empty = q.graph.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.graph.n(), 0);
        // face i = 1
        let face: Vec<usize> = (0..8).filter(|&v| q.coords[v].i == 1).collect();
        let sub = q.graph.induced_subgraph(&face).unwrap();
        assert_eq!(sub.graph.n(), 4);
        assert_eq!(sub.graph.edge_count(), 4);
        assert!((0..4).all(|v| sub.graph.degree(v) == 2));
        assert!(q.graph.induced_subgraph(&[9]).is_err());
    }

    #[test]
    fn induced_composes() {
        let g = make_cube(3).unwrap().graph;
        let a: Vec<usize> = (0..27).filter(|v| v % 2 == 0 || v % 5 == 0).collect();
        let b: Vec<usize> = a.iter().copied().filter(|v| v % 3 != 1).collect();
        let ga = g.induced_subgraph(&a).unwrap();
        let image: Vec<usize> = b.iter().map(|&v| ga.index_of(v).unwrap()).collect();
        let nested = ga.graph.induced_subgraph(&image).unwrap();
        let direct = g.induced_subgraph(&b).unwrap();
        assert_eq!(nested.graph, direct.graph);
    }
}

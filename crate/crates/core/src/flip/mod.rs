//! k-flip structures `(G, P, H)` and the flip operator.
//!
//! Parts are `0..k` internally; part `i` of the partition is vertex `i` of
//! the pattern graph `H`. A loop at `i` complements adjacency inside part
//! `i`, an edge `ij` complements adjacency between parts `i` and `j`.

mod cube;
mod generate;
mod lemmas;

pub use cube::{
    eliminate_small_parts, extract_avoiding_subcube, find_cube_in_ball, CubeWitness, Extraction, InducedCube,
};
pub use generate::{flipped_cube, FlippedCube, FlippedCubeOptions, PartLayout};
pub use lemmas::{
    auxiliary_k, check_component_diameter, check_connected, check_diameter_bound, check_small_dist, AuxiliaryK,
    PatternComponents,
};

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::report::Report;

/// Parts of at most this many vertices can be avoided by one of the 27
/// blocks of a cube of side `3N`; the same threshold makes every vertex of
/// a larger part see a vertex outside its cube neighborhood (degree 6).
pub const SMALL_PART_THRESHOLD: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlipError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("part map has {found} entries for a graph on {expected} vertices")]
    PartMapLength { expected: usize, found: usize },
    #[error("vertex {vertex} is in part {part} but there are only {k} parts")]
    PartOutOfRange { vertex: usize, part: usize, k: usize },
    #[error("part {0} is empty but not isolated in the pattern graph")]
    EmptyPartNotIsolated(usize),
    #[error("the flipped graph is not the claimed cube: {0:?}")]
    NotCube(Box<Report>),
    #[error("part {part} has {size} vertices, at most {threshold} required", threshold = SMALL_PART_THRESHOLD)]
    PartTooLarge { part: usize, size: usize },
    #[error("part {part} has {size} vertices, more than {threshold} required", threshold = SMALL_PART_THRESHOLD)]
    PartTooSmall { part: usize, size: usize },
    #[error("parts {0} and {1} are not adjacent in the pattern graph")]
    NotPatternEdge(usize, usize),
    #[error("cube side {0} is not divisible by 3")]
    SideNotDivisible(usize),
    #[error("vertex {vertex} at distance at most {r} from the center is affected by the flip")]
    BallAffected { vertex: usize, r: usize },
    #[error("radius {r} exceeds the cube side {side}")]
    RadiusTooLarge { r: usize, side: usize },
    #[error("lambda is {lambda}, above alpha = {alpha}")]
    LambdaAboveAlpha { lambda: usize, alpha: usize },
    #[error("k = {given} is smaller than the number of parts {parts}")]
    TooFewParts { given: usize, parts: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipStructure {
    graph: Graph,
    part_of: Vec<usize>,
    pattern: Graph,
}

impl FlipStructure {
    pub fn new(graph: Graph, part_of: Vec<usize>, pattern: Graph) -> Result<Self, FlipError> {
        if part_of.len() != graph.n() {
            return Err(FlipError::PartMapLength {
                expected: graph.n(),
                found: part_of.len(),
            });
        }
        let k = pattern.n();
        let mut sizes = vec![0usize; k];
        for (vertex, &part) in part_of.iter().enumerate() {
            if part >= k {
                return Err(FlipError::PartOutOfRange { vertex, part, k });
            }
            sizes[part] += 1;
        }
        for (i, &s) in sizes.iter().enumerate() {
            if s == 0 && !is_isolated(&pattern, i) {
                return Err(FlipError::EmptyPartNotIsolated(i));
            }
        }
        Ok(FlipStructure {
            graph,
            part_of,
            pattern,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn part_of(&self) -> &[usize] {
        &self.part_of
    }

    pub fn part(&self, v: usize) -> usize {
        self.part_of[v]
    }

    pub fn k(&self) -> usize {
        self.pattern.n()
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `V_i`, sorted.
    pub fn part_members(&self, i: usize) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.part_of[v] == i).collect()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k()];
        for &p in &self.part_of {
            sizes[p] += 1;
        }
        sizes
    }

    /// Whether the flip complements the pair of parts `(i, j)`.
    pub fn flips(&self, i: usize, j: usize) -> bool {
        pattern_adjacent(&self.pattern, i, j)
    }

    /// Same partition and pattern, different base graph.
    pub fn with_graph(&self, graph: Graph) -> Result<Self, FlipError> {
        FlipStructure::new(graph, self.part_of.clone(), self.pattern.clone())
    }
}

fn pattern_adjacent(h: &Graph, i: usize, j: usize) -> bool {
    if i == j {
        h.has_loop(i)
    } else {
        h.has_edge(i, j)
    }
}

fn is_isolated(h: &Graph, i: usize) -> bool {
    h.degree(i) == 0 && !h.has_loop(i)
}

/// `F(G, P, H)`: `uv` is an edge iff `uv ∈ E(G)` XOR `ρ(u)ρ(v) ∈ E(H)`.
pub fn apply_flip(fs: &FlipStructure) -> Graph {
    flip_graph(&fs.graph, &fs.part_of, &fs.pattern)
}

pub(crate) fn flip_graph(g: &Graph, part_of: &[usize], h: &Graph) -> Graph {
    let n = g.n();
    let k = h.n();
    let mut table = vec![false; k * k];
    for i in 0..k {
        for j in 0..k {
            table[i * k + j] = pattern_adjacent(h, i, j);
        }
    }
    let adj = (0..n)
        .map(|u| {
            let row = &table[part_of[u] * k..(part_of[u] + 1) * k];
            let mut base = g.neighbors(u).iter().peekable();
            let mut out = Vec::new();
            for v in 0..n {
                let present = base.next_if_eq(&&v).is_some();
                if v != u && present != row[part_of[v]] {
                    out.push(v);
                }
            }
            out
        })
        .collect();
    Graph::from_sorted_adjacency(adj)
}

/// Restricts to `A` and isolates every pattern vertex whose part is now empty.
/// Vertex `t` of the result is the `t`-th smallest element of `A`.
pub fn substructure(fs: &FlipStructure, a: &[usize]) -> Result<FlipStructure, FlipError> {
    let sub = fs.graph.induced_subgraph(a)?;
    let part_of: Vec<usize> = sub.original.iter().map(|&v| fs.part_of[v]).collect();
    let mut present = vec![false; fs.k()];
    for &p in &part_of {
        present[p] = true;
    }
    let h = &fs.pattern;
    let edges = h.edges().filter(|&(i, j)| present[i] && present[j]);
    let loops = h.loops().filter(|&i| present[i]);
    let pattern = Graph::pattern(h.n(), edges, loops)?;
    FlipStructure::new(sub.graph, part_of, pattern)
}

/// `I(H)`: pattern vertices without neighbors and without a loop.
pub fn isolated_parts(fs: &FlipStructure) -> Vec<usize> {
    (0..fs.k()).filter(|&i| is_isolated(&fs.pattern, i)).collect()
}

/// `S`: vertices whose part is isolated in `H`; `G[S] = F(G,P,H)[S]`.
pub fn unaffected_set(fs: &FlipStructure) -> Vec<usize> {
    let iso: Vec<bool> = (0..fs.k()).map(|i| is_isolated(&fs.pattern, i)).collect();
    (0..fs.n()).filter(|&v| iso[fs.part_of[v]]).collect()
}

/// Largest `r` such that `N_r[v] ⊆ S` for some `v`, each `v` capped at its
/// eccentricity; `None` when `S` is empty.
pub fn lambda(fs: &FlipStructure) -> Option<usize> {
    let s = unaffected_set(fs);
    let mut in_s = vec![false; fs.n()];
    for &v in &s {
        in_s[v] = true;
    }
    s.iter().map(|&v| radius_inside(&fs.graph, v, &in_s)).max()
}

/// Largest `r ≤ ecc(v)` with `N_r[v]` inside the marked set (`v` marked).
pub(crate) fn radius_inside(g: &Graph, v: usize, inside: &[bool]) -> usize {
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut ecc = 0;
    while let Some(u) = queue.pop_front() {
        if !inside[u] {
            return dist[u] - 1;
        }
        ecc = dist[u];
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    ecc
}

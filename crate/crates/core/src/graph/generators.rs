use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// One-based coordinates of a cube vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeCoord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

impl CubeCoord {
    pub fn new(i: usize, j: usize, k: usize) -> Self {
        CubeCoord { i, j, k }
    }

    /// Projection onto axis 1, 2 or 3.
    pub fn project(&self, axis: usize) -> usize {
        match axis {
            1 => self.i,
            2 => self.j,
            3 => self.k,
            _ => panic!("cube axis must be 1, 2 or 3, got {axis}"),
        }
    }

    pub fn manhattan(&self, other: &CubeCoord) -> usize {
        self.i.abs_diff(other.i) + self.j.abs_diff(other.j) + self.k.abs_diff(other.k)
    }

    pub fn as_array(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }
}

/// A cube-shaped graph together with its coordinate table.
#[derive(Debug, Clone)]
pub struct Cube {
    pub side: usize,
    pub graph: Graph,
    pub coords: Vec<CubeCoord>,
}

impl Cube {
    pub fn index(&self, c: CubeCoord) -> Option<usize> {
        cube_index(self.side, c)
    }

    pub fn coord(&self, v: usize) -> CubeCoord {
        self.coords[v]
    }
}

pub(crate) fn cube_index(side: usize, c: CubeCoord) -> Option<usize> {
    let ok = |x: usize| (1..=side).contains(&x);
    (ok(c.i) && ok(c.j) && ok(c.k)).then(|| ((c.i - 1) * side + (c.j - 1)) * side + (c.k - 1))
}

pub(crate) fn cube_coords(side: usize) -> Vec<CubeCoord> {
    let mut coords = Vec::with_capacity(side * side * side);
    for i in 1..=side {
        for j in 1..=side {
            for k in 1..=side {
                coords.push(CubeCoord { i, j, k });
            }
        }
    }
    coords
}

const AXIS_STEPS: [[usize; 3]; 3] = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
/// Offsets of the non-decreasing diagonals added by the diagonal cube.
pub(crate) const DIAGONAL_STEPS: [[usize; 3]; 4] = [[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]];

fn cube_with_steps(side: usize, steps: &[[usize; 3]]) -> Result<Cube, GraphError> {
    if side == 0 {
        return Err(GraphError::ZeroSide);
    }
    let coords = cube_coords(side);
    let mut edges = Vec::new();
    for (u, c) in coords.iter().enumerate() {
        for s in steps {
            let target = CubeCoord::new(c.i + s[0], c.j + s[1], c.k + s[2]);
            if let Some(v) = cube_index(side, target) {
                edges.push((u, v));
            }
        }
    }
    let graph = Graph::new(coords.len(), edges)?;
    Ok(Cube { side, graph, coords })
}

/// The three-dimensional grid on `[side]^3` with unit Manhattan adjacency.
pub fn make_cube(side: usize) -> Result<Cube, GraphError> {
    cube_with_steps(side, &AXIS_STEPS)
}

/// The cube plus every non-decreasing diagonal of each unit cell.
pub fn make_diag_cube(side: usize) -> Result<Cube, GraphError> {
    let steps: Vec<[usize; 3]> = AXIS_STEPS.iter().chain(DIAGONAL_STEPS.iter()).copied().collect();
    cube_with_steps(side, &steps)
}

/// A vertex of a strong product: 0-based vertices of the left and right factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductVertex {
    pub h: usize,
    pub p: usize,
}

#[derive(Debug, Clone)]
pub struct Product {
    pub graph: Graph,
    pub table: Vec<ProductVertex>,
    right_n: usize,
}

impl Product {
    pub fn index(&self, h: usize, p: usize) -> usize {
        h * self.right_n + p
    }
}

/// Strong product; the vertex `(h, p)` gets index `h * |right| + p`.
pub fn strong_product(left: &Graph, right: &Graph) -> Result<Product, GraphError> {
    if left.has_loops() || right.has_loops() {
        return Err(GraphError::LoopedFactor);
    }
    let (a, b) = (left.n(), right.n());
    let idx = |h: usize, p: usize| h * b + p;
    let mut edges = Vec::new();
    for h in 0..a {
        for p in 0..b {
            let u = idx(h, p);
            // u = h and p ~ p'
            for &q in right.neighbors(p) {
                edges.push((u, idx(h, q)));
            }
            for &g in left.neighbors(h) {
                // p = p' and h ~ h'
                edges.push((u, idx(g, p)));
                // h ~ h' and p ~ p'
                for &q in right.neighbors(p) {
                    edges.push((u, idx(g, q)));
                }
            }
        }
    }
    let graph = Graph::new(a * b, edges)?;
    let table = (0..a)
        .flat_map(|h| (0..b).map(move |p| ProductVertex { h, p }))
        .collect();
    Ok(Product {
        graph,
        table,
        right_n: b,
    })
}

pub fn path(n: usize) -> Graph {
    Graph::new(n, (1..n).map(|v| (v - 1, v))).expect("path edges are valid")
}

pub fn cycle(n: usize) -> Graph {
    if n < 3 {
        return path(n);
    }
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).expect("cycle edges are valid")
}

pub fn complete(n: usize) -> Graph {
    Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("clique edges are valid")
}

pub fn edgeless(n: usize) -> Graph {
    Graph::new(n, std::iter::empty()).expect("no edges")
}

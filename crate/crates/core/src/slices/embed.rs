use crate::graph::{path, strong_product, Cube, Graph, GraphError};
use crate::report::{Report, Witness};

/// A witness for `G ⊆ H ⊠ P_p`: vertex `v` sits at `map[v] = (h, position)`
/// with `h` a vertex of `H` and `position ∈ [1, p]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductEmbedding {
    pub target: Graph,
    pub p: usize,
    pub map: Vec<(usize, usize)>,
}

impl ProductEmbedding {
    pub fn new(target: Graph, p: usize, map: Vec<(usize, usize)>) -> Self {
        ProductEmbedding { target, p, map }
    }
}

/// Injectivity, coordinate ranges, and a strong-product clause for every edge.
pub fn verify_embedding(g: &Graph, emb: &ProductEmbedding) -> Report {
    let check = "embedding";
    if emb.map.len() != g.n() {
        return Report::fail(
            check,
            Witness::Vertex {
                v: emb.map.len().min(g.n()),
            },
        )
        .with_note("map_len", emb.map.len())
        .with_note("n", g.n());
    }
    let h = &emb.target;
    let mut owner = vec![usize::MAX; h.n() * emb.p];
    for (v, &(x, pos)) in emb.map.iter().enumerate() {
        if x >= h.n() || pos == 0 || pos > emb.p {
            return Report::fail(check, Witness::Vertex { v });
        }
        let slot = x * emb.p + pos - 1;
        if owner[slot] != usize::MAX {
            return Report::fail(check, Witness::Pair { u: owner[slot], v });
        }
        owner[slot] = v;
    }
    for (u, v) in g.edges() {
        let ((hu, pu), (hv, pv)) = (emb.map[u], emb.map[v]);
        let h_ok = hu == hv || h.has_edge(hu, hv);
        if !h_ok || pu.abs_diff(pv) > 1 {
            return Report::fail(check, Witness::Edge { u, v });
        }
    }
    Report::pass(check)
}

/// `G = H ⊠ P_p` with its identity embedding.
pub fn product_embedding(h: &Graph, p: usize) -> Result<(Graph, ProductEmbedding), GraphError> {
    let prod = strong_product(h, &path(p))?;
    let map = prod.table.iter().map(|t| (t.h, t.p + 1)).collect();
    Ok((prod.graph, ProductEmbedding::new(h.clone(), p, map)))
}

/// Fibers of one axis: `v ↦ (the other two coordinates, v's coordinate on `axis`)`.
/// `H` is the cube restricted to a single fiber, so the embedding is valid
/// for every graph whose steps move each coordinate by at most one and
/// whose fiber graphs are the same (such as `Q_N` and `Q̂_N`).
pub fn cube_fiber_embedding(cube: &Cube, axis: usize) -> ProductEmbedding {
    let n = cube.side;
    let rest: Vec<usize> = (1..=3).filter(|&a| a != axis).collect();
    let flat = |c: &crate::graph::CubeCoord| (c.project(rest[0]) - 1) * n + (c.project(rest[1]) - 1);
    let fiber: Vec<usize> = (0..cube.graph.n())
        .filter(|&v| cube.coords[v].project(axis) == 1)
        .collect();
    let sub = cube.graph.induced_subgraph(&fiber).expect("fiber vertices are valid");
    let relabel: Vec<usize> = sub.original.iter().map(|&v| flat(&cube.coords[v])).collect();
    let edges = sub.graph.edges().map(|(a, b)| (relabel[a], relabel[b]));
    let target = Graph::new(n * n, edges).expect("fiber graph is simple");
    let map = cube.coords.iter().map(|c| (flat(c), c.project(axis))).collect();
    ProductEmbedding::new(target, n, map)
}

/// `Q_N ⊆ Grid_N ⊠ P_{3N−2}` by `(i, j, k) ↦ ((i, j), i + j + k − 2)`.
pub fn cube_layering_embedding(cube: &Cube) -> ProductEmbedding {
    let n = cube.side;
    let grid_edges = (0..n).flat_map(|a| {
        (0..n).flat_map(move |b| {
            let v = a * n + b;
            let down = (a + 1 < n).then_some((v, v + n));
            let right = (b + 1 < n).then_some((v, v + 1));
            down.into_iter().chain(right)
        })
    });
    let target = Graph::new(n * n, grid_edges).expect("grid is simple");
    let map = cube
        .coords
        .iter()
        .map(|c| ((c.i - 1) * n + (c.j - 1), c.i + c.j + c.k - 2))
        .collect();
    ProductEmbedding::new(target, 3 * n - 2, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_cube, make_diag_cube};
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_embedding_passes() {
        let (g, emb) = product_embedding(&path(4), 5).unwrap();
        assert!(verify_embedding(&g, &emb).passed());
        let layers = super::super::layers(&g, &emb).unwrap();
        assert!(layers.iter().all(|l| l.len() == 4));
    }

    #[test]
    fn subgraphs_keep_the_witness() {
        let (g, emb) = product_embedding(&path(5), 5).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let kept = g.edges().filter(|_| rng.gen_bool(0.6));
            let sub = Graph::new(g.n(), kept).unwrap();
            assert!(verify_embedding(&sub, &emb).passed());
        }
    }

    #[test]
    fn stretched_edge_fails() {
        let g = path(3);
        let emb = ProductEmbedding::new(path(1), 3, vec![(0, 1), (0, 3), (0, 2)]);
        let r = verify_embedding(&g, &emb);
        assert_eq!(r.witness, Some(Witness::Edge { u: 0, v: 1 }));
        let clash = ProductEmbedding::new(path(1), 3, vec![(0, 1), (0, 1), (0, 2)]);
        assert_eq!(verify_embedding(&g, &clash).witness, Some(Witness::Pair { u: 0, v: 1 }));
    }

    #[test]
    fn cube_embeddings() {
        for n in 1..=4 {
            let q = make_cube(n).unwrap();
            let dq = make_diag_cube(n).unwrap();
            for axis in 1..=3 {
                let fib = cube_fiber_embedding(&q, axis);
                assert!(verify_embedding(&q.graph, &fib).passed());
                let dfib = cube_fiber_embedding(&dq, axis);
                assert!(verify_embedding(&dq.graph, &dfib).passed());
            }
            let lay = cube_layering_embedding(&q);
            assert!(verify_embedding(&q.graph, &lay).passed());
            if n >= 2 {
                assert!(verify_embedding(&dq.graph, &lay).failed());
            }
        }
    }
}

//! Brute-force oracles shared by the integration targets. Each one is
//! written from the definitions, sharing no code with the library beyond
//! graph construction and adjacency queries.
#![allow(dead_code)]

use std::collections::VecDeque;

use gridlab::graph::{CubeCoord, Graph};

/// All-pairs BFS distances; `None` between components.
pub fn distances(g: &Graph) -> Vec<Vec<Option<usize>>> {
    (0..g.n())
        .map(|s| {
            let mut d = vec![None; g.n()];
            d[s] = Some(0);
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for w in 0..g.n() {
                    if d[w].is_none() && g.has_edge(u, w) {
                        d[w] = Some(d[u].unwrap() + 1);
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Largest distance inside `set` measured in `g`; `None` if some pair is disconnected.
pub fn max_distance(dist: &[Vec<Option<usize>>], set: &[usize]) -> Option<usize> {
    let mut worst = 0;
    for &u in set {
        for &v in set {
            worst = worst.max(dist[u][v]?);
        }
    }
    Some(worst)
}

/// `uv ∈ E ⇔ uv ∈ E(G) xor (p(u), p(v)) is an edge of H, or a loop when p(u) = p(v)`.
pub fn flip_oracle(g: &Graph, part_of: &[usize], h: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let (a, b) = (part_of[u], part_of[v]);
            let pattern = if a == b { h.has_loop(a) } else { h.has_edge(a, b) };
            if g.has_edge(u, v) != pattern {
                out.push((u, v));
            }
        }
    }
    out
}

/// Edges of the diagonal cube from the coordinate definition: unit steps
/// plus the positive diagonal steps `[1,1,0], [1,0,1], [0,1,1], [1,1,1]`,
/// in either orientation.
pub fn diag_cube_oracle(coords: &[CubeCoord]) -> Vec<(usize, usize)> {
    let steps: [[i64; 3]; 7] = [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, 0, 1],
        [0, 1, 1],
        [1, 1, 1],
    ];
    let mut out = Vec::new();
    for u in 0..coords.len() {
        for v in u + 1..coords.len() {
            let (a, b) = (coords[u].as_array(), coords[v].as_array());
            let diff: [i64; 3] = std::array::from_fn(|t| b[t] as i64 - a[t] as i64);
            let neg = diff.map(|x| -x);
            if steps.iter().any(|s| *s == diff || *s == neg) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Exact treewidth by the subset recurrence
/// `TW(S) = min_{v∈S} max(TW(S∖v), |Q(S∖v, v)|)`, where `Q(S, v)` is the set
/// of vertices outside `S ∪ {v}` reachable from `v` through `S`. Only for
/// `n ≤ 16`.
pub fn brute_treewidth(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 16, "oracle is exponential");
    if n == 0 {
        return 0;
    }
    let adj: Vec<u32> = (0..n)
        .map(|u| (0..n).filter(|&w| g.has_edge(u, w)).fold(0, |m, w| m | 1 << w))
        .collect();
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(u) = stack.pop() {
            let mut nb = adj[u] & !seen;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << w;
                if s >> w & 1 == 1 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![i32::MAX; 1 << n];
    tw[0] = -1;
    for s in 1..=full {
        let mut best = i32::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            best = best.min(tw[without as usize].max(q(without, v).count_ones() as i32));
        }
        tw[s as usize] = best;
    }
    tw[full as usize].max(0) as usize
}

pub fn random_graph(n: usize, p: f64, rng: &mut impl rand::Rng) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).unwrap()
}

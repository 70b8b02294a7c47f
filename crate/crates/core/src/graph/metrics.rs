use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Graph;

/// Breadth-first distances from `source`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Closed ball `N_r[center]`, sorted.
pub fn ball(g: &Graph, center: usize, r: usize) -> Vec<usize> {
    ball_multi(g, &[center], r)
}

/// Union of closed balls of radius `r` around every center, sorted.
pub fn ball_multi(g: &Graph, centers: &[usize], r: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for &c in centers {
        if dist[c] != 0 {
            dist[c] = 0;
            queue.push_back(c);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == r {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    (0..g.n()).filter(|&v| dist[v] != usize::MAX).collect()
}

/// Graph diameter; disconnected graphs have infinite diameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }

    pub fn at_most(self, bound: usize) -> bool {
        matches!(self, Diameter::Finite(d) if d <= bound)
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub connected: bool,
    pub diameter: Diameter,
    pub max_degree: usize,
}

pub fn graph_metrics(g: &Graph) -> GraphMetrics {
    let mut diameter = Diameter::Finite(0);
    for s in 0..g.n() {
        let dist = bfs_distances(g, s);
        if dist.iter().any(Option::is_none) {
            diameter = Diameter::Infinite;
            break;
        }
        let ecc = dist.iter().flatten().copied().max().unwrap_or(0);
        diameter = diameter.max(Diameter::Finite(ecc));
    }
    GraphMetrics {
        connected: diameter != Diameter::Infinite,
        diameter,
        max_degree: g.max_degree(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{edgeless, make_cube, CubeCoord};

    #[test]
    fn balls_on_cube() {
        let q = make_cube(3).unwrap();
        let c = q.index(CubeCoord::new(2, 2, 2)).unwrap();
        assert_eq!(ball(&q.graph, c, 0), vec![c]);
        assert_eq!(ball(&q.graph, c, 1).len(), 7);
        assert_eq!(ball(&q.graph, c, 3).len(), 27);
    }

    #[test]
    fn balls_grow_and_stabilize_at_component() {
        let g = Graph::new(6, [(0, 1), (1, 2), (3, 4)]).unwrap();
        let mut prev = ball(&g, 0, 0);
        for r in 1..6 {
            let next = ball(&g, 0, r);
            assert!(prev.iter().all(|v| next.contains(v)));
            prev = next;
        }
        assert_eq!(prev, vec![0, 1, 2]);
        assert_eq!(ball_multi(&g, &[0, 3], 1), vec![0, 1, 3, 4]);
    }

    #[test]
    fn metrics() {
        let m = graph_metrics(&make_cube(2).unwrap().graph);
        assert_eq!(
            m,
            GraphMetrics {
                connected: true,
                diameter: Diameter::Finite(3),
                max_degree: 3
            }
        );
        let m = graph_metrics(&edgeless(2));
        assert!(!m.connected);
        assert_eq!(m.diameter, Diameter::Infinite);
        for n in 1..=5 {
            let m = graph_metrics(&make_cube(n).unwrap().graph);
            assert_eq!(m.diameter, Diameter::Finite(3 * (n - 1)));
        }
    }
}

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

use super::{Certificate, WidthKind, WidthResult};

/// Components with more vertices than this are only bounded.
pub const EXACT_COMPONENT_LIMIT: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("the bag graph is not a tree")]
    NotATree,
    #[error("bag {bag} holds vertex {vertex}, which is not in the graph")]
    BadVertex { bag: usize, vertex: usize },
    #[error("vertex {0} is in no bag")]
    VertexMissing(usize),
    #[error("edge ({0}, {1}) is in no bag")]
    EdgeUncovered(usize, usize),
    #[error("the bags holding vertex {0} are not connected")]
    Disconnected(usize),
}

impl TreeDecomposition {
    /// Largest bag size minus one; 0 for no bags.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Checks the three tree-decomposition axioms against `g`.
    pub fn verify(&self, g: &Graph) -> Result<(), DecompositionError> {
        let b = self.bags.len();
        let n = g.n();
        if b == 0 {
            return match n {
                0 => Ok(()),
                _ => Err(DecompositionError::VertexMissing(0)),
            };
        }
        if self.edges.len() != b - 1 {
            return Err(DecompositionError::NotATree);
        }
        let mut uf: Vec<usize> = (0..b).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut tree_adj = vec![Vec::new(); b];
        for &(x, y) in &self.edges {
            if x >= b || y >= b {
                return Err(DecompositionError::NotATree);
            }
            let (rx, ry) = (find(&mut uf, x), find(&mut uf, y));
            if rx == ry {
                return Err(DecompositionError::NotATree);
            }
            uf[rx] = ry;
            tree_adj[x].push(y);
            tree_adj[y].push(x);
        }
        let mut holders = vec![Vec::new(); n];
        let mut member = vec![Vec::new(); b];
        for (i, bag) in self.bags.iter().enumerate() {
            let mut seen = vec![false; n];
            for &v in bag {
                if v >= n {
                    return Err(DecompositionError::BadVertex { bag: i, vertex: v });
                }
                if !seen[v] {
                    seen[v] = true;
                    holders[v].push(i);
                }
            }
            member[i] = seen;
        }
        if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
            return Err(DecompositionError::VertexMissing(v));
        }
        for (u, v) in g.edges() {
            if !holders[u].iter().any(|&i| member[i][v]) {
                return Err(DecompositionError::EdgeUncovered(u, v));
            }
        }
        for v in 0..n {
            let start = holders[v][0];
            let mut reached = vec![false; b];
            reached[start] = true;
            let mut stack = vec![start];
            let mut count = 1;
            while let Some(i) = stack.pop() {
                for &j in &tree_adj[i] {
                    if !reached[j] && member[j][v] {
                        reached[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
            if count != holders[v].len() {
                return Err(DecompositionError::Disconnected(v));
            }
        }
        Ok(())
    }

    /// The decomposition induced by eliminating vertices in `order`: vertex
    /// `v` contributes the bag `{v}` ∪ its later neighbors in the fill graph.
    pub fn from_elimination_order(g: &Graph, order: &[usize]) -> Self {
        let n = g.n();
        assert_eq!(order.len(), n, "elimination order must list every vertex once");
        let mut pos = vec![usize::MAX; n];
        for (t, &v) in order.iter().enumerate() {
            assert!(pos[v] == usize::MAX, "vertex {v} repeated in elimination order");
            pos[v] = t;
        }
        let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
        let mut bags = Vec::with_capacity(n);
        let mut parent = vec![None; n];
        for (t, &v) in order.iter().enumerate() {
            let later: Vec<usize> = adj[v].iter().copied().filter(|&u| pos[u] > t).collect();
            for (a, &x) in later.iter().enumerate() {
                for &y in &later[a + 1..] {
                    adj[x].insert(y);
                    adj[y].insert(x);
                }
            }
            parent[t] = later.iter().map(|&u| pos[u]).min();
            let mut bag = later;
            bag.push(v);
            bag.sort_unstable();
            bags.push(bag);
        }
        let mut edges = Vec::with_capacity(n.saturating_sub(1));
        let mut last_root: Option<usize> = None;
        for t in 0..n {
            match parent[t] {
                Some(p) => edges.push((t, p)),
                None => {
                    if let Some(r) = last_root {
                        edges.push((r, t));
                    }
                    last_root = Some(t);
                }
            }
        }
        TreeDecomposition { bags, edges }
    }
}

/// Width of eliminating in `order` (largest later-neighborhood in the fill graph).
pub fn elimination_width(g: &Graph, order: &[usize]) -> usize {
    TreeDecomposition::from_elimination_order(g, order).width()
}

fn greedy_order(g: &Graph, min_fill: bool) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    let fill = |adj: &[BTreeSet<usize>], v: usize| -> usize {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let mut missing = 0;
        for (a, &x) in nb.iter().enumerate() {
            missing += nb[a + 1..].iter().filter(|&&y| !adj[x].contains(&y)).count();
        }
        missing
    };
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| {
                let f = if min_fill { fill(&adj, v) } else { 0 };
                (f, adj[v].len(), v)
            })
            .unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (a, &x) in nb.iter().enumerate() {
            adj[x].remove(&v);
            for &y in &nb[a + 1..] {
                adj[x].insert(y);
                adj[y].insert(x);
            }
        }
        adj[v].clear();
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Best of the greedy min-fill and min-degree elimination orders, as
/// `(width, order)`. Min-fill is skipped above 300 vertices.
pub fn treewidth_upper(g: &Graph) -> (usize, Vec<usize>) {
    let mut best: Option<(usize, Vec<usize>)> = None;
    let heuristics: &[bool] = if g.n() <= 300 { &[true, false] } else { &[false] };
    for &min_fill in heuristics {
        let order = greedy_order(g, min_fill);
        let w = elimination_width(g, &order);
        if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
            best = Some((w, order));
        }
    }
    best.unwrap_or((0, Vec::new()))
}

/// `max(degeneracy, minor-min-width)`.
pub fn treewidth_lower(g: &Graph) -> usize {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut deg_adj = adj.clone();
    let mut alive = vec![true; n];
    let mut degeneracy = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (deg_adj[v].len(), v))
            .unwrap();
        degeneracy = degeneracy.max(deg_adj[v].len());
        for u in std::mem::take(&mut deg_adj[v]) {
            deg_adj[u].remove(&v);
        }
        alive[v] = false;
    }
    // contract a minimum-degree vertex into its minimum-degree neighbor
    let mut alive = vec![true; n];
    let mut mmw = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (adj[v].len(), v)).unwrap();
        mmw = mmw.max(adj[v].len());
        let nb = std::mem::take(&mut adj[v]);
        alive[v] = false;
        for &u in &nb {
            adj[u].remove(&v);
        }
        if let Some(&u) = nb.iter().min_by_key(|&&u| (adj[u].len(), u)) {
            for &w in &nb {
                if w != u {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
        }
    }
    degeneracy.max(mmw)
}

fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in g.neighbors(comp[i]) {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn bits(mut x: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            i
        })
    })
}

/// Decision search over elimination sets for one connected component.
struct Search {
    adj: Vec<u128>,
    all: u128,
    nodes: u64,
    budget: u64,
    failed: HashSet<u128>,
}

impl Search {
    /// Neighbors of `v` in the graph obtained by eliminating `s`.
    fn q(&self, s: u128, v: usize) -> u128 {
        let mut visited = self.adj[v] | 1 << v;
        let mut out = self.adj[v] & !s;
        let mut inner = self.adj[v] & s;
        while inner != 0 {
            let x = inner.trailing_zeros() as usize;
            inner &= inner - 1;
            let fresh = self.adj[x] & !visited;
            visited |= fresh;
            out |= fresh & !s;
            inner |= fresh & s;
        }
        out
    }

    /// `min-d` contraction lower bound on the current graph.
    fn minor_min_width(rest: u128, q: &[u128]) -> usize {
        let mut adj: Vec<u128> = q.to_vec();
        let mut alive = rest;
        let mut lb = 0;
        while alive != 0 {
            let v = bits(alive).min_by_key(|&v| (adj[v] & alive).count_ones()).unwrap();
            let nb = adj[v] & alive;
            lb = lb.max(nb.count_ones() as usize);
            alive &= !(1 << v);
            if let Some(u) = bits(nb).min_by_key(|&u| (adj[u] & alive).count_ones()) {
                let merged = nb & !(1 << u);
                adj[u] |= merged;
                for w in bits(merged) {
                    adj[w] |= 1 << u;
                }
            }
        }
        lb
    }

    fn almost_simplicial(nb: u128, q: &[u128]) -> bool {
        let clique_without = |skip: u128| bits(nb & !skip).all(|u| (nb & !skip & !(1 << u)) & !q[u] == 0);
        match bits(nb).find(|&u| (nb & !(1 << u)) & !q[u] != 0) {
            None => true,
            Some(u) => {
                let missing = (nb & !(1 << u)) & !q[u];
                std::iter::once(u).chain(bits(missing)).any(|w| clique_without(1 << w))
            }
        }
    }

    /// `Some(true)` with `order` extended when width `k` is achievable from `s`.
    fn decide(&mut self, s: u128, k: usize, order: &mut Vec<usize>) -> Option<bool> {
        let rest = self.all & !s;
        if rest.count_ones() as usize <= k + 1 {
            order.extend(bits(rest));
            return Some(true);
        }
        if self.failed.contains(&s) {
            return Some(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let mut q = vec![0u128; self.adj.len()];
        for v in bits(rest) {
            q[v] = self.q(s, v);
        }
        if Self::minor_min_width(rest, &q) > k {
            self.failed.insert(s);
            return Some(false);
        }
        let forced = bits(rest).find(|&v| q[v].count_ones() as usize <= k && Self::almost_simplicial(q[v], &q));
        let candidates: Vec<usize> = match forced {
            Some(v) => vec![v],
            None => {
                let mut c: Vec<usize> = bits(rest).filter(|&v| q[v].count_ones() as usize <= k).collect();
                c.sort_by_key(|&v| (q[v].count_ones(), v));
                c
            }
        };
        for v in candidates {
            order.push(v);
            match self.decide(s | 1 << v, k, order) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    order.pop();
                }
            }
        }
        self.failed.insert(s);
        Some(false)
    }
}

struct ComponentWidth {
    lower: usize,
    upper: usize,
    order: Vec<usize>,
}

fn component_width(g: &Graph, budget: &mut u64) -> ComponentWidth {
    let (upper, heuristic) = treewidth_upper(g);
    let lower = treewidth_lower(g).min(upper);
    let n = g.n();
    if lower == upper || n > EXACT_COMPONENT_LIMIT {
        return ComponentWidth {
            lower,
            upper,
            order: heuristic,
        };
    }
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let adj = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &u| m | 1 << u))
        .collect();
    let mut search = Search {
        adj,
        all,
        nodes: 0,
        budget: *budget,
        failed: HashSet::new(),
    };
    let mut proven = lower;
    for k in lower..upper {
        search.failed.clear();
        let mut order = Vec::with_capacity(n);
        let outcome = search.decide(0, k, &mut order);
        match outcome {
            Some(true) => {
                *budget = budget.saturating_sub(search.nodes);
                return ComponentWidth {
                    lower: k,
                    upper: k,
                    order,
                };
            }
            Some(false) => proven = k + 1,
            None => break,
        }
    }
    *budget = budget.saturating_sub(search.nodes);
    ComponentWidth {
        lower: proven,
        upper,
        order: heuristic,
    }
}

/// Exact treewidth per connected component, within `budget` search nodes in
/// total; exhausted components fall back to their bounds. The certificate
/// is always a tree decomposition of width `upper`.
pub fn treewidth_exact(g: &Graph, budget: u64) -> WidthResult {
    let mut remaining = budget;
    let mut lower = 0;
    let mut upper = 0;
    let mut order = Vec::with_capacity(g.n());
    for comp in components(g) {
        let sub = g.induced_subgraph(&comp).expect("component vertices are valid");
        let w = component_width(&sub.graph, &mut remaining);
        lower = lower.max(w.lower);
        upper = upper.max(w.upper);
        order.extend(w.order.into_iter().map(|v| sub.original[v]));
    }
    let td = TreeDecomposition::from_elimination_order(g, &order);
    debug_assert_eq!(td.width(), upper);
    WidthResult {
        kind: WidthKind::Treewidth,
        lower,
        upper,
        exact: lower == upper,
        certificate: Some(Certificate::TreeDecomposition(td)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, edgeless, make_cube, make_diag_cube, path, strong_product};

    fn exact(g: &Graph) -> usize {
        let r = treewidth_exact(g, 1_000_000);
        assert!(r.exact, "search did not finish");
        if let Some(Certificate::TreeDecomposition(td)) = &r.certificate {
            td.verify(g).unwrap();
            assert_eq!(td.width(), r.upper);
        } else {
            panic!("missing certificate");
        }
        r.upper
    }

    /// Minimum over all elimination orders, for tiny graphs.
    fn brute_force(g: &Graph) -> usize {
        fn rec(g: &Graph, order: &mut Vec<usize>, used: &mut Vec<bool>, best: &mut usize) {
            if order.len() == g.n() {
                *best = (*best).min(elimination_width(g, order));
                return;
            }
            for v in 0..g.n() {
                if !used[v] {
                    used[v] = true;
                    order.push(v);
                    rec(g, order, used, best);
                    order.pop();
                    used[v] = false;
                }
            }
        }
        let mut best = usize::MAX;
        rec(g, &mut Vec::new(), &mut vec![false; g.n()], &mut best);
        if g.n() == 0 {
            0
        } else {
            best
        }
    }

    #[test]
    fn known_values() {
        for n in 2..8 {
            assert_eq!(exact(&path(n)), 1);
        }
        assert_eq!(exact(&complete(4)), 3);
        assert_eq!(exact(&make_cube(2).unwrap().graph), 3);
        assert_eq!(exact(&cycle(5)), 2);
        assert_eq!(exact(&edgeless(4)), 0);
        assert_eq!(exact(&Graph::new(0, []).unwrap()), 0);
        let grid = strong_product(&path(3), &path(3)).unwrap().graph;
        assert_eq!(exact(&grid), 3);
        assert_eq!(exact(&make_diag_cube(2).unwrap().graph), 4);
    }

    #[test]
    fn bounds_on_c5() {
        let c5 = cycle(5);
        assert!(treewidth_lower(&c5) >= 2);
        assert_eq!(treewidth_upper(&c5).0, 2);
        assert_eq!(treewidth_upper(&edgeless(3)).0, 0);
    }

    #[test]
    fn matches_brute_force_on_random_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=7);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.45))
                .collect();
            let g = Graph::new(n, edges).unwrap();
            let t = exact(&g);
            assert_eq!(t, brute_force(&g), "{:?}", g.edge_list());
            assert!(treewidth_lower(&g) <= t && t <= treewidth_upper(&g).0);
        }
    }

    #[test]
    fn budget_downgrades_to_bounds() {
        let g = make_cube(3).unwrap().graph;
        let r = treewidth_exact(&g, 1);
        assert!(r.lower <= r.upper);
        if let Some(Certificate::TreeDecomposition(td)) = &r.certificate {
            td.verify(&g).unwrap();
        }
    }

    #[test]
    fn verifier_rejects_bad_decompositions() {
        let g = path(3);
        let ok = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![(0, 1)],
        };
        ok.verify(&g).unwrap();
        let missing_edge = TreeDecomposition {
            bags: vec![vec![0], vec![1, 2]],
            edges: vec![(0, 1)],
        };
        assert_eq!(missing_edge.verify(&g), Err(DecompositionError::EdgeUncovered(0, 1)));
        let split = TreeDecomposition {
            bags: vec![vec![0, 1], vec![2], vec![1, 2]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(split.verify(&g), Err(DecompositionError::Disconnected(1)));
        let cyclic = TreeDecomposition {
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![(0, 1), (1, 0)],
        };
        assert_eq!(cyclic.verify(&g), Err(DecompositionError::NotATree));
    }
}

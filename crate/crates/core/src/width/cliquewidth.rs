//! Exact cliquewidth for tiny graphs.
//!
//! A search state is a vertex set `X` with a partition of `X` into label
//! classes such that the expression built so far is exactly `G[X]` and every
//! class is homogeneous towards `V \ X` (its members see the same outside
//! vertices). Every k-expression can be normalized to create all edges
//! between the operands of a union directly after it, so these states are
//! complete: `cw(G) ≤ k` iff a state with `X = V` is reachable.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

use super::{treewidth_upper, Certificate, WidthKind, WidthResult};

/// Above this many vertices only bounds are reported.
pub const EXACT_CLIQUEWIDTH_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Expr {
    Vertex { v: usize, label: usize },
    Union { left: Box<Expr>, right: Box<Expr> },
    Join { a: usize, b: usize, of: Box<Expr> },
    Relabel { from: usize, to: usize, of: Box<Expr> },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("vertex {0} is created more than once")]
    RepeatedVertex(usize),
    #[error("vertex {0} is out of range")]
    BadVertex(usize),
    #[error("vertex {0} is never created")]
    MissingVertex(usize),
    #[error("join of label {0} with itself")]
    SelfJoin(usize),
    #[error("the expression builds edge ({0}, {1}) which the graph lacks")]
    ExtraEdge(usize, usize),
    #[error("the expression misses edge ({0}, {1})")]
    MissingEdge(usize, usize),
}

impl Expr {
    /// Labels per present vertex and the edge set built.
    fn eval(&self, n: usize) -> Result<(Vec<Option<usize>>, BTreeSet<(usize, usize)>), ExprError> {
        match self {
            Expr::Vertex { v, label } => {
                if *v >= n {
                    return Err(ExprError::BadVertex(*v));
                }
                let mut labels = vec![None; n];
                labels[*v] = Some(*label);
                Ok((labels, BTreeSet::new()))
            }
            Expr::Union { left, right } => {
                let (mut la, mut ea) = left.eval(n)?;
                let (lb, eb) = right.eval(n)?;
                for (v, l) in lb.into_iter().enumerate() {
                    if l.is_some() {
                        if la[v].is_some() {
                            return Err(ExprError::RepeatedVertex(v));
                        }
                        la[v] = l;
                    }
                }
                ea.extend(eb);
                Ok((la, ea))
            }
            Expr::Join { a, b, of } => {
                if a == b {
                    return Err(ExprError::SelfJoin(*a));
                }
                let (labels, mut edges) = of.eval(n)?;
                let with = |l: usize| (0..n).filter(|&v| labels[v] == Some(l)).collect::<Vec<_>>();
                let side_b = with(*b);
                for u in with(*a) {
                    for &w in &side_b {
                        edges.insert((u.min(w), u.max(w)));
                    }
                }
                Ok((labels, edges))
            }
            Expr::Relabel { from, to, of } => {
                let (mut labels, edges) = of.eval(n)?;
                for l in labels.iter_mut().flatten() {
                    if *l == *from {
                        *l = *to;
                    }
                }
                Ok((labels, edges))
            }
        }
    }

    fn collect_labels(&self, out: &mut BTreeSet<usize>) {
        match self {
            Expr::Vertex { label, .. } => {
                out.insert(*label);
            }
            Expr::Union { left, right } => {
                left.collect_labels(out);
                right.collect_labels(out);
            }
            Expr::Join { a, b, of } => {
                out.extend([*a, *b]);
                of.collect_labels(out);
            }
            Expr::Relabel { from, to, of } => {
                out.extend([*from, *to]);
                of.collect_labels(out);
            }
        }
    }

    /// Number of distinct labels mentioned anywhere.
    pub fn label_count(&self) -> usize {
        let mut labels = BTreeSet::new();
        self.collect_labels(&mut labels);
        labels.len()
    }

    /// Rebuilds the graph and compares it with `g`; returns the label count.
    pub fn verify(&self, g: &Graph) -> Result<usize, ExprError> {
        let (labels, edges) = self.eval(g.n())?;
        if let Some(v) = labels.iter().position(Option::is_none) {
            return Err(ExprError::MissingVertex(v));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            return Err(ExprError::ExtraEdge(u, v));
        }
        if let Some((u, v)) = g.edges().find(|e| !edges.contains(e)) {
            return Err(ExprError::MissingEdge(u, v));
        }
        Ok(self.label_count())
    }

    /// One label per vertex, one join per edge.
    pub fn trivial(g: &Graph) -> Option<Expr> {
        let mut expr = (0..g.n())
            .map(|v| Expr::Vertex { v, label: v })
            .reduce(|left, right| Expr::Union {
                left: Box::new(left),
                right: Box::new(right),
            })?;
        for (a, b) in g.edges() {
            expr = Expr::Join {
                a,
                b,
                of: Box::new(expr),
            };
        }
        Some(expr)
    }
}

type Partition = Vec<u32>;

#[derive(Debug, Clone)]
enum Derivation {
    Leaf(usize),
    Node {
        left: (u32, Partition),
        right: (u32, Partition),
        union: Partition,
    },
}

struct Search<'g> {
    g: &'g Graph,
    adj: Vec<u32>,
    full: u32,
    k: usize,
    work: u64,
    budget: u64,
    states: HashMap<u32, Vec<Partition>>,
    derivation: HashMap<(u32, Partition), Derivation>,
}

fn members(mut x: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (x != 0).then(|| {
            let i = x.trailing_zeros() as usize;
            x &= x - 1;
            i
        })
    })
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: usize, budget: u64) -> Self {
        let n = g.n();
        let adj = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        Search {
            g,
            adj,
            full: if n == 32 { u32::MAX } else { (1u32 << n) - 1 },
            k,
            work: 0,
            budget,
            states: HashMap::new(),
            derivation: HashMap::new(),
        }
    }

    fn homogeneous(&self, x: u32, class: u32) -> bool {
        members(self.full & !x).all(|w| {
            let seen = self.adj[w] & class;
            seen == 0 || seen == class
        })
    }

    fn has_edge_between(&self, a: u32, b: u32) -> bool {
        members(a).any(|v| self.adj[v] & b != 0)
    }

    fn complete_between(&self, a: u32, b: u32) -> bool {
        members(a).all(|v| self.adj[v] & b == b)
    }

    /// Pairs of union classes that need a join, or `None` if the union is not realizable.
    fn joins(&self, x1: u32, union: &[u32]) -> Option<Vec<(usize, usize)>> {
        for &c in union {
            if self.has_edge_between(c & x1, c & !x1) {
                return None;
            }
        }
        let mut out = Vec::new();
        for a in 0..union.len() {
            for b in a + 1..union.len() {
                let (ua, ub) = (union[a], union[b]);
                let cross = self.has_edge_between(ua & x1, ub & !x1) || self.has_edge_between(ua & !x1, ub & x1);
                if cross {
                    if !self.complete_between(ua, ub) {
                        return None;
                    }
                    out.push((a, b));
                }
            }
        }
        Some(out)
    }

    /// Inserts every homogeneous coarsening of `union`; true once `x` is `V`.
    fn add_coarsenings(&mut self, x: u32, union: &Partition, left: (u32, Partition), right: (u32, Partition)) -> bool {
        let m = union.len();
        let mut groups: Vec<u32> = Vec::with_capacity(m);
        let mut found = Vec::new();
        fn assign(s: &Search, x: u32, union: &[u32], i: usize, groups: &mut Vec<u32>, found: &mut Vec<Partition>) {
            if i == union.len() {
                let mut p = groups.clone();
                p.sort_unstable();
                found.push(p);
                return;
            }
            for g in 0..groups.len() {
                let merged = groups[g] | union[i];
                if s.homogeneous(x, merged) {
                    let old = groups[g];
                    groups[g] = merged;
                    assign(s, x, union, i + 1, groups, found);
                    groups[g] = old;
                }
            }
            groups.push(union[i]);
            assign(s, x, union, i + 1, groups, found);
            groups.pop();
        }
        assign(self, x, union, 0, &mut groups, &mut found);
        for p in found {
            let key = (x, p.clone());
            if let std::collections::hash_map::Entry::Vacant(e) = self.derivation.entry(key) {
                e.insert(Derivation::Node {
                    left: left.clone(),
                    right: right.clone(),
                    union: union.clone(),
                });
                self.states.entry(x).or_default().push(p);
            }
        }
        x == self.full && self.states.contains_key(&self.full)
    }

    fn combine(&mut self, x1: u32, p1: &Partition, x2: u32, p2: &Partition) -> bool {
        let x = x1 | x2;
        // partial matchings of p1 classes onto distinct p2 classes
        let mut matched = vec![None; p1.len()];
        let mut used = vec![false; p2.len()];
        let mut results = Vec::new();
        fn rec(
            i: usize,
            p1: &Partition,
            p2: &Partition,
            matched: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            k: usize,
            out: &mut Vec<Partition>,
        ) {
            let pairs = matched.iter().filter(|m| m.is_some()).count();
            if p1.len() + p2.len() - pairs - (p1.len() - i).min(p2.len() - pairs) > k {
                return;
            }
            if i == p1.len() {
                let mut union: Partition = Vec::with_capacity(k);
                for (a, m) in matched.iter().enumerate() {
                    union.push(p1[a] | m.map_or(0, |b| p2[b]));
                }
                union.extend((0..p2.len()).filter(|&b| !used[b]).map(|b| p2[b]));
                union.sort_unstable();
                out.push(union);
                return;
            }
            rec(i + 1, p1, p2, matched, used, k, out);
            for b in 0..p2.len() {
                if !used[b] {
                    used[b] = true;
                    matched[i] = Some(b);
                    rec(i + 1, p1, p2, matched, used, k, out);
                    matched[i] = None;
                    used[b] = false;
                }
            }
        }
        rec(0, p1, p2, &mut matched, &mut used, self.k, &mut results);
        for union in results {
            self.work += 1;
            if !union.iter().all(|&c| self.homogeneous(x, c)) || self.joins(x1, &union).is_none() {
                continue;
            }
            if self.add_coarsenings(x, &union, (x1, p1.clone()), (x2, p2.clone())) {
                return true;
            }
        }
        false
    }

    /// `Some(true)` when `V` is reachable, `None` on budget exhaustion.
    fn run(&mut self) -> Option<bool> {
        let n = self.g.n();
        for v in 0..n {
            let x = 1u32 << v;
            self.states.insert(x, vec![vec![x]]);
            self.derivation.insert((x, vec![x]), Derivation::Leaf(v));
        }
        if n == 1 {
            return Some(true);
        }
        let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
        for x in 1..=self.full {
            by_size[x.count_ones() as usize].push(x);
        }
        for size in 2..=n {
            for &x in &by_size[size] {
                let low = x & x.wrapping_neg();
                // splits x = x1 ⊎ x2 with the lowest vertex in x1
                let rest = x & !low;
                let mut sub = rest;
                loop {
                    let x1 = low | (rest & !sub);
                    let x2 = x & !x1;
                    if x2 != 0 {
                        let (Some(a), Some(b)) = (self.states.get(&x1).cloned(), self.states.get(&x2).cloned()) else {
                            if sub == 0 {
                                break;
                            }
                            sub = (sub - 1) & rest;
                            continue;
                        };
                        for p1 in &a {
                            for p2 in &b {
                                if self.combine(x1, p1, x2, p2) {
                                    return Some(true);
                                }
                                if self.work > self.budget {
                                    return None;
                                }
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
            }
        }
        Some(false)
    }

    fn build(&self, x: u32, p: &Partition, labels: &[usize]) -> Expr {
        match &self.derivation[&(x, p.clone())] {
            Derivation::Leaf(v) => Expr::Vertex {
                v: *v,
                label: labels[0],
            },
            Derivation::Node { left, right, union } => {
                let mut union_label = vec![usize::MAX; union.len()];
                let mut relabels = Vec::new();
                let mut spare = (0..self.k).filter(|l| !labels.contains(l));
                for (ci, &c) in p.iter().enumerate() {
                    let mut first = true;
                    for (ui, &u) in union.iter().enumerate() {
                        if u & c == u {
                            if first {
                                union_label[ui] = labels[ci];
                                first = false;
                            } else {
                                let l = spare.next().expect("a union has at most k classes");
                                union_label[ui] = l;
                                relabels.push((l, labels[ci]));
                            }
                        }
                    }
                }
                let child_labels = |q: &Partition| -> Vec<usize> {
                    q.iter()
                        .map(|&c| {
                            union_label[union
                                .iter()
                                .position(|&u| u & c == c)
                                .expect("child class lies in a union class")]
                        })
                        .collect()
                };
                let l = self.build(left.0, &left.1, &child_labels(&left.1));
                let r = self.build(right.0, &right.1, &child_labels(&right.1));
                let mut expr = Expr::Union {
                    left: Box::new(l),
                    right: Box::new(r),
                };
                for (a, b) in self.joins(left.0, union).expect("stored unions are realizable") {
                    expr = Expr::Join {
                        a: union_label[a],
                        b: union_label[b],
                        of: Box::new(expr),
                    };
                }
                for (from, to) in relabels {
                    expr = Expr::Relabel {
                        from,
                        to,
                        of: Box::new(expr),
                    };
                }
                expr
            }
        }
    }

    fn expression(&self) -> Expr {
        let p = &self.states[&self.full][0];
        let labels: Vec<usize> = (0..p.len()).collect();
        self.build(self.full, p, &labels)
    }
}

/// Components of `G[vs]`, or of its complement when `complement` is set.
fn split(g: &Graph, vs: &[usize], complement: bool) -> Vec<Vec<usize>> {
    let mut seen = vec![false; vs.len()];
    let mut out = Vec::new();
    for start in 0..vs.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![vs[start]];
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            for b in 0..vs.len() {
                if !seen[b] && g.has_edge(vs[a], vs[b]) != complement {
                    seen[b] = true;
                    comp.push(vs[b]);
                    stack.push(b);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A 2-expression for a cograph (no induced `P_4`) built from its cotree,
/// every vertex ending on label 0; `None` for other graphs. Edgeless graphs
/// use label 0 only.
pub fn cograph_expression(g: &Graph) -> Option<Expr> {
    fn build(g: &Graph, vs: &[usize]) -> Option<Expr> {
        if let [v] = vs {
            return Some(Expr::Vertex { v: *v, label: 0 });
        }
        let parts = split(g, vs, false);
        if parts.len() > 1 {
            let mut exprs = parts.iter().map(|p| build(g, p));
            let first = exprs.next()??;
            return exprs.try_fold(first, |acc, e| {
                Some(Expr::Union {
                    left: Box::new(acc),
                    right: Box::new(e?),
                })
            });
        }
        let parts = split(g, vs, true);
        if parts.len() == 1 {
            return None;
        }
        let mut acc = build(g, &parts[0])?;
        for p in &parts[1..] {
            let next = Expr::Relabel {
                from: 0,
                to: 1,
                of: Box::new(build(g, p)?),
            };
            let joined = Expr::Join {
                a: 0,
                b: 1,
                of: Box::new(Expr::Union {
                    left: Box::new(acc),
                    right: Box::new(next),
                }),
            };
            acc = Expr::Relabel {
                from: 1,
                to: 0,
                of: Box::new(joined),
            };
        }
        Some(acc)
    }
    let all: Vec<usize> = (0..g.n()).collect();
    if all.is_empty() {
        return None;
    }
    build(g, &all)
}

/// An upper bound from the cotree when `G` is a cograph, otherwise from
/// treewidth (`cw ≤ 3·2^(tw−1)`) and vertex count.
pub fn cliquewidth_upper(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    if g.edge_count() == 0 {
        return 1;
    }
    if cograph_expression(g).is_some() {
        return 2;
    }
    let tw = treewidth_upper(g).0;
    let from_tw = if tw >= 20 { usize::MAX } else { 3 << (tw - 1) };
    n.min(from_tw)
}

fn cliquewidth_lower(g: &Graph) -> usize {
    match (g.n(), g.edge_count()) {
        (0, _) => 0,
        (_, 0) => 1,
        _ => 2,
    }
}

/// Minimal number of labels, searching `k = lower..=max_labels` within
/// `budget` union steps per `k`.
pub fn cliquewidth_exact_tiny(g: &Graph, max_labels: usize, budget: u64) -> WidthResult {
    let lower = cliquewidth_lower(g);
    let upper = cliquewidth_upper(g);
    let bounds_only = |lower: usize| {
        let certificate = (upper == g.n())
            .then(|| Expr::trivial(g))
            .flatten()
            .map(Certificate::Expression);
        WidthResult {
            kind: WidthKind::Cliquewidth,
            lower: lower.min(upper),
            upper,
            exact: lower >= upper,
            certificate,
        }
    };
    if g.n() == 0 {
        return bounds_only(0);
    }
    if let Some(expr) = cograph_expression(g) {
        // the cotree expression meets the lower bound: 1 label iff edgeless
        return WidthResult {
            kind: WidthKind::Cliquewidth,
            lower,
            upper: lower,
            exact: true,
            certificate: Some(Certificate::Expression(expr)),
        };
    }
    if g.n() > EXACT_CLIQUEWIDTH_LIMIT {
        return bounds_only(lower);
    }
    let mut proven = lower;
    for k in lower.max(1)..=max_labels.min(upper) {
        let mut search = Search::new(g, k, budget);
        match search.run() {
            Some(true) => {
                let expr = search.expression();
                debug_assert!(expr.verify(g).is_ok_and(|labels| labels <= k));
                return WidthResult {
                    kind: WidthKind::Cliquewidth,
                    lower: k,
                    upper: k,
                    exact: true,
                    certificate: Some(Certificate::Expression(expr)),
                };
            }
            Some(false) => proven = k + 1,
            None => break,
        }
    }
    bounds_only(proven)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, edgeless, make_cube, path};

    fn cw(g: &Graph) -> usize {
        let r = cliquewidth_exact_tiny(g, 6, 5_000_000);
        assert!(r.exact, "{:?}", (r.lower, r.upper));
        match &r.certificate {
            Some(Certificate::Expression(e)) => {
                let labels = e.verify(g).unwrap();
                assert!(labels <= r.upper);
            }
            _ => panic!("missing expression"),
        }
        r.upper
    }

    #[test]
    fn cotree_expressions() {
        for n in 1..=20 {
            for g in [complete(n), edgeless(n)] {
                let e = cograph_expression(&g).unwrap();
                assert_eq!(e.verify(&g).unwrap(), if g.edge_count() == 0 { 1 } else { 2 });
            }
        }
        let k33_plus = Graph::new(
            7,
            [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)],
        )
        .unwrap();
        assert_eq!(cograph_expression(&k33_plus).unwrap().verify(&k33_plus).unwrap(), 2);
        assert!(cograph_expression(&path(4)).is_none());
        assert!(cograph_expression(&cycle(5)).is_none());
        assert_eq!(cliquewidth_upper(&complete(30)), 2);
    }

    #[test]
    fn known_values() {
        for n in 1..=6 {
            assert!(cw(&complete(n)) <= 2);
            assert_eq!(cw(&edgeless(n)), 1);
        }
        assert_eq!(cw(&path(3)), 2);
        assert_eq!(cw(&path(4)), 3);
        assert_eq!(cw(&cycle(4)), 2);
        assert_eq!(cw(&cycle(5)), 3);
        assert_eq!(cw(&cycle(6)), 3);
        assert_eq!(cw(&path(6)), 3);
    }

    /// Some ordered quadruple induces a path `a-b-c-d`.
    fn has_induced_p4(g: &Graph) -> bool {
        let n = g.n();
        let e = |u, v| g.has_edge(u, v);
        (0..n).any(|a| {
            (0..n).any(|b| {
                (0..n).any(|c| {
                    (0..n).any(|d| {
                        let distinct = [a, b, c, d].iter().collect::<BTreeSet<_>>().len() == 4;
                        distinct && e(a, b) && e(b, c) && e(c, d) && !e(a, c) && !e(b, d) && !e(a, d)
                    })
                })
            })
        })
    }

    #[test]
    fn two_labels_exactly_for_cographs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..150 {
            let n = rng.gen_range(1..=7);
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let g = Graph::new(n, edges).unwrap();
            let r = cliquewidth_exact_tiny(&g, 2, 5_000_000);
            let within_two = r.exact && r.upper <= 2;
            let has_edges = g.edge_count() > 0;
            assert_eq!(within_two, !has_induced_p4(&g), "{:?}", g.edge_list());
            if within_two {
                assert_eq!(r.upper, if has_edges { 2 } else { 1 });
                let Some(Certificate::Expression(e)) = &r.certificate else {
                    panic!()
                };
                assert!(e.verify(&g).unwrap() <= r.upper);
            }
        }
    }

    #[test]
    fn cube_q2() {
        let q = make_cube(2).unwrap().graph;
        let w = cw(&q);
        assert!((3..=4).contains(&w));
    }

    #[test]
    fn expression_verifier() {
        let g = path(3);
        let good = Expr::trivial(&g).unwrap();
        assert_eq!(good.verify(&g), Ok(3));
        assert_eq!(
            Expr::trivial(&complete(3)).unwrap().verify(&g),
            Err(ExprError::ExtraEdge(0, 2))
        );
        let missing = Expr::Vertex { v: 0, label: 0 };
        assert_eq!(missing.verify(&g), Err(ExprError::MissingVertex(1)));
        let repeated = Expr::Union {
            left: Box::new(Expr::Vertex { v: 0, label: 0 }),
            right: Box::new(Expr::Vertex { v: 0, label: 1 }),
        };
        assert_eq!(repeated.verify(&edgeless(1)), Err(ExprError::RepeatedVertex(0)));
    }

    #[test]
    fn large_graphs_are_bounded() {
        let g = path(20);
        let r = cliquewidth_exact_tiny(&g, 4, 1000);
        assert!(!r.exact);
        assert_eq!(r.lower, 2);
        assert_eq!(r.upper, 3);
    }
}

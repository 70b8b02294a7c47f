//! Tarskian evaluation of formulas on colored graphs.
//!
//! Formulas are compiled against a graph into a slot-indexed tree: every
//! free variable and every quantifier gets its own slot in a flat
//! environment. Distance atoms are answered from BFS rows that are computed
//! once per source vertex and shared between threads.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::Formula;
use crate::graph::{bfs_distances, ColoredGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("color {0} is not defined on the graph")]
    MissingColor(String),
    #[error("no value assigned to free variable {0}")]
    Unassigned(String),
    #[error("vertex {vertex} assigned to {var} is out of range")]
    BadVertex { var: String, vertex: usize },
    #[error("formula must have free variables among {expected:?}, found {found}")]
    UnexpectedFree { expected: Vec<String>, found: String },
}

/// Mapping from free-variable name to vertex.
pub type Assignment = BTreeMap<String, usize>;

/// Convenience constructor for an assignment.
pub fn assignment<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Assignment {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone)]
enum Node {
    Const(bool),
    Edge(usize, usize),
    Eq(usize, usize),
    Color(usize, usize),
    DistLe(usize, usize, usize),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Exists(usize, Guard, Box<Node>),
    Forall(usize, Guard, Box<Node>),
}

/// Restricts a quantifier's range without changing its meaning.
#[derive(Debug, Clone, Copy)]
enum Guard {
    All,
    Neighbors(usize),
    Ball(usize, usize),
}

/// A formula compiled for one graph, with free variables in a fixed order.
#[derive(Debug, Clone)]
pub struct Prepared {
    node: Node,
    slots: usize,
    arity: usize,
    colors: Vec<String>,
}

impl Prepared {
    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// Evaluates prepared formulas on one colored graph.
pub struct Evaluator<'g> {
    graph: &'g ColoredGraph,
    rows: Vec<OnceLock<Vec<u32>>>,
}

impl<'g> Evaluator<'g> {
    pub fn new(graph: &'g ColoredGraph) -> Self {
        let rows = (0..graph.n()).map(|_| OnceLock::new()).collect();
        Evaluator { graph, rows }
    }

    pub fn graph(&self) -> &'g ColoredGraph {
        self.graph
    }

    /// BFS distance, `None` when unreachable.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        let d = self.row(u)[v];
        (d != u32::MAX).then_some(d as usize)
    }

    fn row(&self, u: usize) -> &[u32] {
        self.rows[u].get_or_init(|| {
            bfs_distances(&self.graph.graph, u)
                .into_iter()
                .map(|d| d.map_or(u32::MAX, |d| d as u32))
                .collect()
        })
    }

    /// Compiles `phi` with the given free-variable order. Every free
    /// variable of `phi` must appear in `free`; extra names are allowed.
    pub fn prepare(&self, phi: &Formula, free: &[&str]) -> Result<Prepared, EvalError> {
        let mut c = Compiler {
            scope: free.iter().enumerate().map(|(i, v)| (v.to_string(), i)).collect(),
            next_slot: free.len(),
            colors: Vec::new(),
            graph: self.graph,
            free: free.iter().map(|s| s.to_string()).collect(),
        };
        let node = c.compile(phi)?;
        Ok(Prepared {
            node,
            slots: c.next_slot,
            arity: free.len(),
            colors: c.colors,
        })
    }

    /// Evaluates with `values[i]` bound to the i-th declared free variable.
    pub fn holds(&self, p: &Prepared, values: &[usize]) -> bool {
        assert_eq!(values.len(), p.arity, "wrong number of values for prepared formula");
        let mut env = vec![0usize; p.slots];
        env[..values.len()].copy_from_slice(values);
        let colors: Vec<&[bool]> = p
            .colors
            .iter()
            .map(|c| self.graph.color(c).expect("color resolved at compile time"))
            .collect();
        self.eval(&p.node, &mut env, &colors)
    }

    fn eval(&self, node: &Node, env: &mut [usize], colors: &[&[bool]]) -> bool {
        match node {
            Node::Const(b) => *b,
            Node::Edge(a, b) => self.graph.graph.has_edge(env[*a], env[*b]),
            Node::Eq(a, b) => env[*a] == env[*b],
            Node::Color(c, a) => colors[*c][env[*a]],
            Node::DistLe(a, b, c) => {
                let d = self.row(env[*a])[env[*b]];
                d != u32::MAX && d as usize <= *c
            }
            Node::Not(f) => !self.eval(f, env, colors),
            Node::And(fs) => fs.iter().all(|f| self.eval(f, env, colors)),
            Node::Or(fs) => fs.iter().any(|f| self.eval(f, env, colors)),
            Node::Implies(a, b) => !self.eval(a, env, colors) || self.eval(b, env, colors),
            Node::Exists(slot, guard, body) => self.quantify(*slot, *guard, body, env, colors, true),
            Node::Forall(slot, guard, body) => !self.quantify(*slot, *guard, body, env, colors, false),
        }
    }

    /// Existential: is there a witness making `body` true. Universal
    /// (`want = false`): is there a witness making `body` false.
    fn quantify(
        &self,
        slot: usize,
        guard: Guard,
        body: &Node,
        env: &mut [usize],
        colors: &[&[bool]],
        want: bool,
    ) -> bool {
        let test = |v: usize, env: &mut [usize]| {
            env[slot] = v;
            self.eval(body, env, colors) == want
        };
        match guard {
            Guard::All => (0..self.graph.n()).any(|v| test(v, env)),
            Guard::Neighbors(a) => {
                let anchor = env[a];
                self.graph.graph.neighbors(anchor).iter().any(|&v| test(v, env))
            }
            Guard::Ball(a, r) => {
                let anchor = env[a];
                let row = self.row(anchor);
                (0..self.graph.n())
                    .filter(|&v| row[v] != u32::MAX && row[v] as usize <= r)
                    .any(|v| test(v, env))
            }
        }
    }
}

struct Compiler<'g> {
    scope: Vec<(String, usize)>,
    next_slot: usize,
    colors: Vec<String>,
    graph: &'g ColoredGraph,
    free: Vec<String>,
}

impl Compiler<'_> {
    fn slot(&self, v: &str) -> Result<usize, EvalError> {
        self.scope
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .map(|(_, s)| *s)
            .ok_or_else(|| EvalError::UnexpectedFree {
                expected: self.free.clone(),
                found: v.to_string(),
            })
    }

    fn color(&mut self, name: &str) -> Result<usize, EvalError> {
        if self.graph.color(name).is_none() {
            return Err(EvalError::MissingColor(name.to_string()));
        }
        Ok(match self.colors.iter().position(|c| c == name) {
            Some(i) => i,
            None => {
                self.colors.push(name.to_string());
                self.colors.len() - 1
            }
        })
    }

    fn compile(&mut self, f: &Formula) -> Result<Node, EvalError> {
        Ok(match f {
            Formula::True => Node::Const(true),
            Formula::False => Node::Const(false),
            Formula::Edge(a, b) => Node::Edge(self.slot(a)?, self.slot(b)?),
            Formula::Eq(a, b) => Node::Eq(self.slot(a)?, self.slot(b)?),
            Formula::Color(c, a) => {
                let a = self.slot(a)?;
                Node::Color(self.color(c)?, a)
            }
            Formula::DistLe(a, b, c) => Node::DistLe(self.slot(a)?, self.slot(b)?, *c),
            Formula::DistGt(a, b, c) => Node::Not(Box::new(Node::DistLe(self.slot(a)?, self.slot(b)?, *c))),
            Formula::Not(g) => Node::Not(Box::new(self.compile(g)?)),
            Formula::And(gs) => Node::And(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Or(gs) => Node::Or(gs.iter().map(|g| self.compile(g)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Node::Implies(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Formula::Exists(v, body) | Formula::Forall(v, body) => {
                let slot = self.next_slot;
                self.next_slot += 1;
                self.scope.push((v.clone(), slot));
                let body = self.compile(body);
                self.scope.pop();
                let body = body?;
                if matches!(f, Formula::Exists(..)) {
                    let guard = find_guard(&body, slot, &mut Vec::new());
                    Node::Exists(slot, guard, Box::new(body))
                } else {
                    let guard = match &body {
                        Node::Implies(lhs, _) => find_guard(lhs, slot, &mut Vec::new()),
                        _ => Guard::All,
                    };
                    Node::Forall(slot, guard, Box::new(body))
                }
            }
        })
    }
}

/// Looks for a conjunct `E(a, z)` or `dist(a, z) <= c` that every witness
/// `z` must satisfy, with `a` bound outside the body. Descends through
/// conjunctions and through inner existentials (skipping atoms that use
/// the inner variable).
fn find_guard(node: &Node, z: usize, inner: &mut Vec<usize>) -> Guard {
    let outer = |a: usize, inner: &Vec<usize>| a != z && !inner.contains(&a);
    match node {
        Node::Edge(a, b) if *b == z && outer(*a, inner) => Guard::Neighbors(*a),
        Node::Edge(a, b) if *a == z && outer(*b, inner) => Guard::Neighbors(*b),
        Node::DistLe(a, b, c) if *b == z && outer(*a, inner) => Guard::Ball(*a, *c),
        Node::DistLe(a, b, c) if *a == z && outer(*b, inner) => Guard::Ball(*b, *c),
        Node::And(parts) => {
            let mut best = Guard::All;
            for p in parts {
                match find_guard(p, z, inner) {
                    g @ Guard::Neighbors(_) => return g,
                    g @ Guard::Ball(..) => best = g,
                    Guard::All => {}
                }
            }
            best
        }
        Node::Exists(w, _, body) => {
            inner.push(*w);
            let g = find_guard(body, z, inner);
            inner.pop();
            g
        }
        _ => Guard::All,
    }
}

/// Evaluates `phi` under a named assignment.
pub fn evaluate(g: &ColoredGraph, phi: &Formula, a: &Assignment) -> Result<bool, EvalError> {
    let free: Vec<String> = phi.free_vars().into_iter().collect();
    let mut values = Vec::with_capacity(free.len());
    for v in &free {
        let vertex = *a.get(v).ok_or_else(|| EvalError::Unassigned(v.clone()))?;
        if vertex >= g.n() {
            return Err(EvalError::BadVertex { var: v.clone(), vertex });
        }
        values.push(vertex);
    }
    let names: Vec<&str> = free.iter().map(String::as_str).collect();
    let ev = Evaluator::new(g);
    let p = ev.prepare(phi, &names)?;
    Ok(ev.holds(&p, &values))
}

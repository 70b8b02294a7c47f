//! Interpretation of formulas as graphs and semantic checks on instances.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::eval::{EvalError, Evaluator, Prepared};
use super::Formula;
use crate::graph::{ball_multi, ColoredGraph, Diameter, Graph};
use crate::report::{Report, Witness};

const PAIR: [&str; 2] = ["x", "y"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpretError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("formula holds on the diagonal pair ({0}, {0})")]
    NotAntireflexive(usize),
    #[error("formula holds on ({u}, {v}) but not on ({v}, {u})")]
    NotSymmetric { u: usize, v: usize },
}

/// The binary relation `{(u, v) : G |= psi(u, v)}` as a row-major matrix.
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn compute(g: &ColoredGraph, psi: &Formula) -> Result<Self, EvalError> {
        let ev = Evaluator::new(g);
        let p = ev.prepare(psi, &PAIR)?;
        Ok(Self::with(&ev, &p))
    }

    pub(crate) fn with(ev: &Evaluator<'_>, p: &Prepared) -> Self {
        let n = ev.graph().n();
        let mut bits = vec![false; n * n];
        for u in 0..n {
            for v in 0..n {
                bits[u * n + v] = ev.holds(p, &[u, v]);
            }
        }
        Relation { n, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn holds(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.n + v]
    }

    /// First diagonal pair or asymmetric pair, if any.
    pub fn interpretation_violation(&self) -> Option<InterpretError> {
        for u in 0..self.n {
            if self.holds(u, u) {
                return Some(InterpretError::NotAntireflexive(u));
            }
            for v in u + 1..self.n {
                match (self.holds(u, v), self.holds(v, u)) {
                    (true, false) => return Some(InterpretError::NotSymmetric { u, v }),
                    (false, true) => return Some(InterpretError::NotSymmetric { u: v, v: u }),
                    _ => {}
                }
            }
        }
        None
    }

    /// Graph on unordered pairs `u < v` where the relation holds (either order).
    pub fn to_graph(&self) -> Graph {
        let n = self.n;
        let adj = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != u && (self.holds(u, v) || self.holds(v, u)))
                    .collect()
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }
}

/// `psi(G)`: the graph on V(G) whose edges are the pairs satisfying `psi`.
/// Fails with a witness when `psi` is not symmetric and antireflexive on `G`.
pub fn interpret(g: &ColoredGraph, psi: &Formula) -> Result<Graph, InterpretError> {
    let rel = Relation::compute(g, psi)?;
    if let Some(e) = rel.interpretation_violation() {
        return Err(e);
    }
    Ok(rel.to_graph())
}

/// Exhaustive per-instance check of symmetry and antireflexivity.
pub fn check_symmetric_antireflexive(psi: &Formula, instances: &[ColoredGraph]) -> Result<Report, EvalError> {
    const CHECK: &str = "symmetric-antireflexive";
    for (idx, g) in instances.iter().enumerate() {
        let rel = Relation::compute(g, psi)?;
        if let Some(e) = rel.interpretation_violation() {
            let witness = match e {
                InterpretError::NotAntireflexive(v) => Witness::Pair { u: v, v },
                InterpretError::NotSymmetric { u, v } => Witness::Pair { u, v },
                InterpretError::Eval(_) => unreachable!(),
            };
            return Ok(Report::fail(CHECK, witness)
                .with_note("instance", idx)
                .with_note("reason", e.to_string()));
        }
    }
    Ok(Report::pass(CHECK).with_note("instances", instances.len()))
}

/// Verifies that every pair satisfying `psi` lies within distance `d` in `G`.
/// The realized bound is the largest such distance (infinite when `psi`
/// joins two components).
pub fn check_range(psi: &Formula, g: &ColoredGraph, d: usize) -> Result<Report, EvalError> {
    const CHECK: &str = "range";
    let ev = Evaluator::new(g);
    let p = ev.prepare(psi, &PAIR)?;
    let mut realized = Diameter::Finite(0);
    let mut violation = None;
    for u in 0..g.n() {
        for v in 0..g.n() {
            if u == v || !ev.holds(&p, &[u, v]) {
                continue;
            }
            let dist = ev.distance(u, v).map_or(Diameter::Infinite, Diameter::Finite);
            if violation.is_none() && !dist.at_most(d) {
                violation = Some(Witness::Pair { u, v });
            }
            realized = realized.max(dist);
        }
    }
    Ok(Report::from_witness(CHECK, violation)
        .with_realized(realized)
        .with_bound(d))
}

/// Compares `G |= rho(u, v)` against `G[B_r(u) ∪ B_r(v)] |= rho(u, v)` on
/// each sampled pair.
pub fn check_local(rho: &Formula, g: &ColoredGraph, r: usize, pairs: &[(usize, usize)]) -> Result<Report, EvalError> {
    const CHECK: &str = "local";
    let ev = Evaluator::new(g);
    let p = ev.prepare(rho, &PAIR)?;
    let mut mismatches = 0usize;
    let mut first = None;
    for &(u, v) in pairs {
        let global = ev.holds(&p, &[u, v]);
        let balls = ball_multi(&g.graph, &[u, v], r);
        let (sub, map) = g.induced(&balls).expect("ball vertices are valid");
        let sub_ev = Evaluator::new(&sub);
        let sp = sub_ev.prepare(rho, &PAIR)?;
        let local = sub_ev.holds(&sp, &[map.index_of(u).unwrap(), map.index_of(v).unwrap()]);
        if global != local {
            mismatches += 1;
            first.get_or_insert(Witness::Pair { u, v });
        }
    }
    Ok(Report::from_witness(CHECK, first)
        .with_bound(r)
        .with_note("pairs", pairs.len())
        .with_note("mismatches", mismatches))
}

/// All ordered pairs of a graph, the default sample for [`check_local`].
pub fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Clique,
    Edgeless,
    EqualsRho,
    EqualsNotRho,
    None,
}

/// Which of clique / edgeless / `rho(G)` / `(not rho)(G)` the graph
/// `psi(G)` equals, checked in that order over ordered pairs `u != v`.
pub fn classify_interpretation(psi: &Formula, g: &ColoredGraph, rho: &Formula) -> Result<Classification, EvalError> {
    let a = Relation::compute(g, psi)?;
    let b = Relation::compute(g, rho)?;
    let n = g.n();
    let off_diagonal = || (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
    Ok(if off_diagonal().all(|(u, v)| a.holds(u, v)) {
        Classification::Clique
    } else if off_diagonal().all(|(u, v)| !a.holds(u, v)) {
        Classification::Edgeless
    } else if off_diagonal().all(|(u, v)| a.holds(u, v) == b.holds(u, v)) {
        Classification::EqualsRho
    } else if off_diagonal().all(|(u, v)| a.holds(u, v) != b.holds(u, v)) {
        Classification::EqualsNotRho
    } else {
        Classification::None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, graph_metrics, make_cube, path, CubeCoord};
    use crate::logic::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn interpret_basic_cases() {
        let g = ColoredGraph::from(cycle(5));
        assert_eq!(interpret(&g, &f("E(x,y)")).unwrap(), cycle(5));
        assert_eq!(interpret(&g, &f("!(x=y)")).unwrap(), complete(5));
        let comp = interpret(&g, &f("!E(x,y) & !(x=y)")).unwrap();
        assert_eq!(comp.edge_count(), 5);
        assert!((0..5).all(|v| comp.degree(v) == 2));
        assert_eq!(comp, cycle(5).complement());
        assert_eq!(interpret(&g, &f("false")).unwrap().edge_count(), 0);
    }

    #[test]
    fn interpret_rejects_reflexive_and_directed() {
        let g = ColoredGraph::from(path(3));
        assert_eq!(
            interpret(&g, &f("E(x,y) | x=y")),
            Err(InterpretError::NotAntireflexive(0))
        );
        let g = ColoredGraph::from(path(2)).with_color("A", [0]).unwrap();
        assert_eq!(
            interpret(&g, &f("E(x,y) & A(x)")),
            Err(InterpretError::NotSymmetric { u: 0, v: 1 })
        );
    }

    #[test]
    fn symmetric_antireflexive_reports() {
        let instances = vec![ColoredGraph::from(path(4)), ColoredGraph::from(cycle(5))];
        assert!(check_symmetric_antireflexive(&f("E(x,y)"), &instances)
            .unwrap()
            .passed());
        let r = check_symmetric_antireflexive(&f("E(x,y) | x=y"), &instances).unwrap();
        assert_eq!(r.witness, Some(Witness::Pair { u: 0, v: 0 }));
    }

    #[test]
    fn successor_is_directional() {
        let q = make_cube(3).unwrap();
        let mut g = ColoredGraph::from(q.graph.clone());
        for a in 0..3 {
            g = g
                .with_color(format!("X{a}"), (0..27).filter(|&v| q.coords[v].i % 3 == a))
                .unwrap();
        }
        let succ = f("E(x,y) & ((X0(x) & X1(y)) | (X1(x) & X2(y)) | (X2(x) & X0(y)))");
        let r = check_symmetric_antireflexive(&succ, &[g]).unwrap();
        assert!(r.failed());
        let u = q.index(CubeCoord::new(1, 1, 1)).unwrap();
        let v = q.index(CubeCoord::new(2, 1, 1)).unwrap();
        assert_eq!(r.witness, Some(Witness::Pair { u, v }));
    }

    #[test]
    fn range_checks() {
        let q = ColoredGraph::from(make_cube(3).unwrap().graph);
        assert!(check_range(&f("E(x,y)"), &q, 1).unwrap().passed());
        let r = check_range(&f("dist(x,y)<=2 & !(x=y)"), &q, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.realized_bound, Some(Diameter::Finite(2)));
        let r = check_range(&f("!E(x,y) & !(x=y)"), &q, 3).unwrap();
        assert!(r.failed());
        assert_eq!(r.realized_bound, Some(Diameter::Finite(6)));
        let two = ColoredGraph::from(crate::graph::edgeless(2));
        let r = check_range(&f("!(x=y)"), &two, 5).unwrap();
        assert_eq!(r.realized_bound, Some(Diameter::Infinite));
    }

    #[test]
    fn range_with_diameter_passes_on_connected_graphs() {
        for g in [cycle(7), path(5), make_cube(2).unwrap().graph] {
            let d = graph_metrics(&g).diameter.finite().unwrap();
            let cg = ColoredGraph::from(g);
            assert!(check_range(&f("!E(x,y) & !(x=y)"), &cg, d).unwrap().passed());
        }
    }

    #[test]
    fn locality_checks() {
        let q = ColoredGraph::from(make_cube(3).unwrap().graph);
        let pairs = all_pairs(27);
        assert!(check_local(&f("E(x,y)"), &q, 1, &pairs).unwrap().passed());
        assert!(check_local(&f("E(x,y)"), &q, 0, &pairs).unwrap().passed());
        assert!(check_local(&f("exists z. E(x,z) & E(z,y)"), &q, 1, &pairs)
            .unwrap()
            .passed());
        let p4 = ColoredGraph::from(path(4));
        let r = check_local(&f("exists z. !(z=x) & !(z=y)"), &p4, 0, &[(0, 1)]).unwrap();
        assert_eq!(r.witness, Some(Witness::Pair { u: 0, v: 1 }));
    }

    #[test]
    fn classification() {
        let g = ColoredGraph::from(cycle(5));
        let rho = f("E(x,y)");
        assert_eq!(
            classify_interpretation(&f("!(x=y)"), &g, &rho).unwrap(),
            Classification::Clique
        );
        assert_eq!(
            classify_interpretation(&f("false"), &g, &rho).unwrap(),
            Classification::Edgeless
        );
        assert_eq!(
            classify_interpretation(&f("E(x,y)"), &g, &rho).unwrap(),
            Classification::EqualsRho
        );
        assert_eq!(
            classify_interpretation(&f("!E(x,y)"), &g, &rho).unwrap(),
            Classification::EqualsNotRho
        );
        assert_eq!(
            classify_interpretation(
                &f("dist(x,y)<=2 & !(x=y) & dist(x,y)>0"),
                &ColoredGraph::from(path(6)),
                &rho
            )
            .unwrap(),
            Classification::None
        );
    }
}

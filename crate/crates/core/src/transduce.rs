//! Transductions: color, interpret, take an induced subgraph.
//!
//! A [`Transduction`] fixes the color names and the interpretation formula;
//! a [`TransductionRun`] fixes the two nondeterministic choices (the coloring
//! and the kept vertex set). Composition is a pipeline of stages.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ColoredGraph, Cube, Diameter, Graph, GraphError};
use crate::logic::{EvalError, Evaluator, Formula, InterpretError, Relation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransductionError {
    #[error("run uses color {0} which the transduction does not declare")]
    UndeclaredColor(String),
    #[error("invalid run: {0}")]
    InvalidRun(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
    #[error("edge ({u}, {v}) spans distance {distance} > declared range {declared}")]
    RangeViolation {
        u: usize,
        v: usize,
        distance: Diameter,
        declared: usize,
    },
    #[error("pipeline has {stages} stages but {runs} runs were given")]
    RunCount { stages: usize, runs: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transduction {
    pub colors: Vec<String>,
    pub psi: Formula,
    pub declared_range: Option<usize>,
}

/// The nondeterministic choices of one application.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransductionRun {
    pub coloring: BTreeMap<String, Vec<usize>>,
    pub keep: Vec<usize>,
}

impl TransductionRun {
    /// No colors, keep everything.
    pub fn keep_all(n: usize) -> Self {
        TransductionRun {
            coloring: BTreeMap::new(),
            keep: (0..n).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TransductionOutput {
    pub graph: Graph,
    /// Input vertex behind each output vertex.
    pub kept: Vec<usize>,
    /// Largest input distance spanned by an edge of `psi(G+)`.
    pub realized_range: Diameter,
}

impl Transduction {
    pub fn new(colors: Vec<String>, psi: Formula, declared_range: Option<usize>) -> Self {
        Transduction {
            colors,
            psi,
            declared_range,
        }
    }

    /// `psi = E(x,y)`, no colors, range 1.
    pub fn identity() -> Self {
        Transduction::new(Vec::new(), Formula::edge("x", "y"), Some(1))
    }

    pub fn color_count(&self) -> usize {
        self.colors.len()
    }

    /// Applies the transduction: color `G`, interpret, then induce on `keep`.
    /// Declared colors missing from the run are empty. A declared range is
    /// verified and a violation is an error.
    pub fn apply(&self, g: &ColoredGraph, run: &TransductionRun) -> Result<TransductionOutput, TransductionError> {
        let mut colored = g.clone();
        for name in run.coloring.keys() {
            if !self.colors.contains(name) {
                return Err(TransductionError::UndeclaredColor(name.clone()));
            }
        }
        for name in &self.colors {
            let members = run.coloring.get(name).cloned().unwrap_or_default();
            colored = colored.with_color(name.clone(), members)?;
        }
        let ev = Evaluator::new(&colored);
        let p = ev.prepare(&self.psi, &["x", "y"])?;
        let rel = Relation::with(&ev, &p);
        if let Some(e) = rel.interpretation_violation() {
            return Err(e.into());
        }
        let interpreted = rel.to_graph();
        let mut realized = Diameter::Finite(0);
        for (u, v) in interpreted.edges() {
            let d = ev.distance(u, v).map_or(Diameter::Infinite, Diameter::Finite);
            if let Some(declared) = self.declared_range {
                if !d.at_most(declared) {
                    return Err(TransductionError::RangeViolation {
                        u,
                        v,
                        distance: d,
                        declared,
                    });
                }
            }
            realized = realized.max(d);
        }
        let sub = interpreted.induced_subgraph(&run.keep)?;
        Ok(TransductionOutput {
            graph: sub.graph,
            kept: sub.original,
            realized_range: realized,
        })
    }
}

/// Whether the kept vertex set is part of the enumerated choices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeepChoice {
    AllVertices,
    AnySubset,
}

/// Deterministic stream of runs: exhaustive when the whole choice space
/// fits in `budget`, otherwise `budget` independent uniform samples.
#[derive(Debug, Clone)]
pub struct RunStream {
    colors: Vec<String>,
    n: usize,
    keep: KeepChoice,
    mode: StreamMode,
    emitted: u64,
    total: u64,
}

#[derive(Debug, Clone)]
enum StreamMode {
    Exhaustive,
    Sampled(ChaCha8Rng),
}

impl RunStream {
    pub fn is_exhaustive(&self) -> bool {
        matches!(self.mode, StreamMode::Exhaustive)
    }

    fn decode(&self, bit: impl Fn(usize) -> bool) -> TransductionRun {
        let n = self.n;
        let coloring = self
            .colors
            .iter()
            .enumerate()
            .map(|(c, name)| (name.clone(), (0..n).filter(|&v| bit(c * n + v)).collect()))
            .collect();
        let keep = match self.keep {
            KeepChoice::AllVertices => (0..n).collect(),
            KeepChoice::AnySubset => {
                let base = self.colors.len() * n;
                (0..n).filter(|&v| bit(base + v)).collect()
            }
        };
        TransductionRun { coloring, keep }
    }
}

impl Iterator for RunStream {
    type Item = TransductionRun;

    fn next(&mut self) -> Option<TransductionRun> {
        if self.emitted >= self.total {
            return None;
        }
        let idx = self.emitted;
        self.emitted += 1;
        let bits = self.colors.len() * self.n + if self.keep == KeepChoice::AnySubset { self.n } else { 0 };
        Some(match &mut self.mode {
            StreamMode::Exhaustive => self.decode(|b| idx >> b & 1 == 1),
            StreamMode::Sampled(rng) => {
                let flags: Vec<bool> = (0..bits).map(|_| rng.gen()).collect();
                self.decode(|b| flags[b])
            }
        })
    }
}

pub fn enumerate_runs(t: &Transduction, g: &ColoredGraph, budget: u64, seed: u64, keep: KeepChoice) -> RunStream {
    assert!(budget >= 1, "run budget must be positive");
    let n = g.n();
    let bits = t.colors.len() * n + if keep == KeepChoice::AnySubset { n } else { 0 };
    let space = (bits < 64).then(|| 1u64 << bits);
    let (mode, total) = match space {
        Some(s) if s <= budget => (StreamMode::Exhaustive, s),
        _ => (StreamMode::Sampled(ChaCha8Rng::seed_from_u64(seed)), budget),
    };
    RunStream {
        colors: t.colors.clone(),
        n,
        keep,
        mode,
        emitted: 0,
        total,
    }
}

/// A semantic composition: stages applied left to right.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub stages: Vec<Transduction>,
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub graph: Graph,
    /// Original input vertex behind each output vertex.
    pub kept: Vec<usize>,
    pub stage_ranges: Vec<Diameter>,
    /// Largest original-input distance spanned by an output edge.
    pub realized_range: Diameter,
}

/// `compose(s, t)` applies `s` first, then `t`.
pub fn compose(s: Transduction, t: Transduction) -> Pipeline {
    Pipeline { stages: vec![s, t] }
}

impl Pipeline {
    pub fn then(mut self, t: Transduction) -> Self {
        self.stages.push(t);
        self
    }

    /// Product of the stage ranges, when every stage declares one.
    pub fn declared_range(&self) -> Option<usize> {
        self.stages.iter().map(|s| s.declared_range).product()
    }

    pub fn apply(&self, g: &ColoredGraph, runs: &[TransductionRun]) -> Result<PipelineOutput, TransductionError> {
        if runs.len() != self.stages.len() {
            return Err(TransductionError::RunCount {
                stages: self.stages.len(),
                runs: runs.len(),
            });
        }
        let mut current = g.clone();
        let mut kept: Vec<usize> = (0..g.n()).collect();
        let mut stage_ranges = Vec::new();
        for (stage, run) in self.stages.iter().zip(runs) {
            let out = stage.apply(&current, run)?;
            kept = out.kept.iter().map(|&v| kept[v]).collect();
            stage_ranges.push(out.realized_range);
            current = ColoredGraph::from(out.graph);
        }
        let ev = Evaluator::new(g);
        let mut realized = Diameter::Finite(0);
        for (u, v) in current.graph.edges() {
            let (a, b) = (kept[u], kept[v]);
            let d = ev.distance(a, b).map_or(Diameter::Infinite, Diameter::Finite);
            if let Some(declared) = self.declared_range() {
                if !d.at_most(declared) {
                    return Err(TransductionError::RangeViolation {
                        u: a,
                        v: b,
                        distance: d,
                        declared,
                    });
                }
            }
            realized = realized.max(d);
        }
        Ok(PipelineOutput {
            graph: current.graph,
            kept,
            stage_ranges,
            realized_range: realized,
        })
    }
}

/// Names of the nine residue colors, `X0..X2, Y0..Y2, Z0..Z2`.
pub fn mod3_color_names() -> Vec<String> {
    ["X", "Y", "Z"]
        .iter()
        .flat_map(|axis| (0..3).map(move |a| format!("{axis}{a}")))
        .collect()
}

/// Colors each cube vertex `(i, j, k)` with `X_{i mod 3}`, `Y_{j mod 3}`, `Z_{k mod 3}`.
pub fn color_cube_mod3(cube: &Cube) -> ColoredGraph {
    let mut g = ColoredGraph::from(cube.graph.clone());
    for (axis_idx, axis) in ["X", "Y", "Z"].iter().enumerate() {
        for a in 0..3 {
            let members = (0..cube.graph.n()).filter(|&v| cube.coords[v].project(axis_idx + 1) % 3 == a);
            g = g
                .with_color(format!("{axis}{a}"), members)
                .expect("cube vertices are valid");
        }
    }
    g
}

/// `succ(x, y)`: `y` is the successor of `x` along `axis` ("X", "Y" or "Z").
pub fn successor(axis: &str, x: &str, y: &str) -> Formula {
    let residues = (0..3).map(|a| {
        Formula::and(vec![
            Formula::color(&format!("{axis}{a}"), x),
            Formula::color(&format!("{axis}{}", (a + 1) % 3), y),
        ])
    });
    Formula::and(vec![Formula::edge(x, y), Formula::or(residues.collect())])
}

/// Chains successor steps from `x` to `y` through fresh existential witnesses.
fn successor_chain(axes: &[&str], x: &str, y: &str) -> Formula {
    let witnesses: Vec<String> = (1..axes.len()).map(|i| format!("z{i}")).collect();
    let mut stops: Vec<&str> = vec![x];
    stops.extend(witnesses.iter().map(String::as_str));
    stops.push(y);
    let steps = axes
        .iter()
        .enumerate()
        .map(|(i, axis)| successor(axis, stops[i], stops[i + 1]))
        .collect();
    witnesses
        .iter()
        .rev()
        .fold(Formula::and(steps), |body, w| Formula::exists(w, body))
}

/// `y` is reached from `x` by one of the four non-decreasing diagonals.
fn forward_diagonal(x: &str, y: &str) -> Formula {
    Formula::or(vec![
        successor_chain(&["X", "Y"], x, y),
        successor_chain(&["X", "Z"], x, y),
        successor_chain(&["Y", "Z"], x, y),
        successor_chain(&["X", "Y", "Z"], x, y),
    ])
}

/// The diagonal formula in both orientations.
pub fn diagonal_formula() -> Formula {
    Formula::or(vec![forward_diagonal("x", "y"), forward_diagonal("y", "x")])
}

/// The range-3 transduction taking a mod-3 colored cube to its diagonal cube.
pub fn diag_transduction() -> Transduction {
    Transduction::new(
        mod3_color_names(),
        Formula::or(vec![Formula::edge("x", "y"), diagonal_formula()]),
        Some(3),
    )
}

/// The coloring run that [`diag_transduction`] expects on `cube`.
pub fn diag_run(cube: &Cube) -> TransductionRun {
    let colored = color_cube_mod3(cube);
    TransductionRun {
        coloring: colored.color_members(),
        keep: (0..cube.graph.n()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, make_cube, make_diag_cube, path, CubeCoord};
    use crate::logic::parse_formula;

    #[test]
    fn identity_and_induced() {
        let g = ColoredGraph::from(cycle(6));
        let t = Transduction::identity();
        let out = t.apply(&g, &TransductionRun::keep_all(6)).unwrap();
        assert_eq!(out.graph, cycle(6));
        let run = TransductionRun {
            coloring: BTreeMap::new(),
            keep: vec![0, 1, 2, 4],
        };
        let out = t.apply(&g, &run).unwrap();
        assert_eq!(out.graph, cycle(6).induced_subgraph(&[0, 1, 2, 4]).unwrap().graph);
        assert_eq!(out.kept, vec![0, 1, 2, 4]);
    }

    #[test]
    fn run_validation_and_range_violation() {
        let g = ColoredGraph::from(path(4));
        let t = Transduction::identity();
        let mut run = TransductionRun::keep_all(4);
        run.coloring.insert("Q".into(), vec![0]);
        assert_eq!(
            t.apply(&g, &run).err(),
            Some(TransductionError::UndeclaredColor("Q".into()))
        );
        let far = Transduction::new(vec![], parse_formula("!(x=y)").unwrap(), Some(2));
        assert!(matches!(
            far.apply(&g, &TransductionRun::keep_all(4)),
            Err(TransductionError::RangeViolation { declared: 2, .. })
        ));
        let bad_keep = TransductionRun {
            coloring: BTreeMap::new(),
            keep: vec![9],
        };
        assert!(matches!(t.apply(&g, &bad_keep), Err(TransductionError::InvalidRun(_))));
    }

    #[test]
    fn cube_coloring() {
        let q = make_cube(9).unwrap();
        let g = color_cube_mod3(&q);
        let v = q.index(CubeCoord::new(1, 1, 1)).unwrap();
        assert!(g.has_color("X1", v) && g.has_color("Y1", v) && g.has_color("Z1", v));
        let w = q.index(CubeCoord::new(3, 6, 9)).unwrap();
        assert!(g.has_color("X0", w) && g.has_color("Y0", w) && g.has_color("Z0", w));
        for v in 0..q.graph.n() {
            for axis in ["X", "Y", "Z"] {
                let count = (0..3).filter(|a| g.has_color(&format!("{axis}{a}"), v)).count();
                assert_eq!(count, 1);
            }
        }
    }

    #[test]
    fn diag_transduction_produces_diag_cube() {
        let t = diag_transduction();
        assert_eq!(t.declared_range, Some(3));
        for n in 1..=4 {
            let q = make_cube(n).unwrap();
            let out = t.apply(&color_cube_mod3(&q), &diag_run(&q)).unwrap();
            assert_eq!(out.graph, make_diag_cube(n).unwrap().graph, "N = {n}");
            if n >= 2 {
                assert_eq!(out.realized_range, Diameter::Finite(3));
            }
            // the non-diagonal part is the cube itself
            let unit: Vec<_> = out
                .graph
                .edges()
                .filter(|&(u, v)| q.coords[u].manhattan(&q.coords[v]) == 1)
                .collect();
            assert_eq!(unit, q.graph.edge_list());
        }
    }

    #[test]
    fn diag_formula_reparses() {
        let psi = diag_transduction().psi;
        assert_eq!(parse_formula(&psi.to_string()).unwrap(), psi);
    }

    #[test]
    fn enumeration_counts_and_replay() {
        let g = ColoredGraph::from(path(2));
        let none = Transduction::identity();
        assert_eq!(enumerate_runs(&none, &g, 1, 0, KeepChoice::AllVertices).count(), 1);
        let one = Transduction::new(vec!["A".into()], Formula::edge("x", "y"), None);
        let runs: Vec<_> = enumerate_runs(&one, &g, 4, 0, KeepChoice::AllVertices).collect();
        assert_eq!(runs.len(), 4);
        let mut sets: Vec<_> = runs.iter().map(|r| r.coloring["A"].clone()).collect();
        sets.sort();
        assert_eq!(sets, vec![vec![], vec![0], vec![0, 1], vec![1]]);
        assert_eq!(enumerate_runs(&one, &g, 100, 0, KeepChoice::AnySubset).count(), 16);

        let big = ColoredGraph::from(cycle(12));
        let s = enumerate_runs(&one, &big, 10, 7, KeepChoice::AnySubset);
        assert!(!s.is_exhaustive());
        let a: Vec<_> = s.collect();
        let b: Vec<_> = enumerate_runs(&one, &big, 10, 7, KeepChoice::AnySubset).collect();
        assert_eq!(a.len(), 10);
        assert_eq!(a, b);
        let c: Vec<_> = enumerate_runs(&one, &big, 10, 8, KeepChoice::AnySubset).collect();
        assert_ne!(a, c);
    }

    #[test]
    fn composition() {
        let id = compose(Transduction::identity(), Transduction::identity());
        let g = ColoredGraph::from(cycle(5));
        let runs = vec![TransductionRun::keep_all(5), TransductionRun::keep_all(5)];
        assert_eq!(id.apply(&g, &runs).unwrap().graph, cycle(5));

        let two = Transduction::new(vec![], parse_formula("dist(x,y)<=2 & !(x=y)").unwrap(), Some(2));
        let three = Transduction::new(vec![], parse_formula("dist(x,y)<=3 & !(x=y)").unwrap(), Some(3));
        let p = compose(two.clone(), three);
        assert_eq!(p.declared_range(), Some(6));
        let long = ColoredGraph::from(path(20));
        let out = p
            .apply(&long, &[TransductionRun::keep_all(20), TransductionRun::keep_all(20)])
            .unwrap();
        assert_eq!(out.realized_range, Diameter::Finite(6));
        assert_eq!(out.stage_ranges, vec![Diameter::Finite(2), Diameter::Finite(3)]);
        assert!(p.apply(&long, &[TransductionRun::keep_all(20)]).is_err());
        let undeclared = compose(two, Transduction::new(vec![], Formula::edge("x", "y"), None));
        assert_eq!(undeclared.declared_range(), None);

        for n in 1..=4 {
            let q = make_cube(n).unwrap();
            let pipeline = compose(Transduction::identity(), diag_transduction());
            let colored = color_cube_mod3(&q);
            let first = TransductionRun {
                coloring: BTreeMap::new(),
                keep: (0..q.graph.n()).collect(),
            };
            // the second stage sees the uncolored output of the first
            let out = pipeline.apply(&colored, &[first, diag_run(&q)]).unwrap();
            assert_eq!(out.graph, make_diag_cube(n).unwrap().graph);
        }
    }
}

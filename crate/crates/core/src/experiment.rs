//! End-to-end pipelines on the diagonal cube.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph::{make_cube, make_diag_cube, Diameter, Graph, GraphError};
use crate::report::{Report, Witness};
use crate::slices::{build_slice_decomposition, check_even_odd_split, cube_fiber_embedding, SliceError};
use crate::transduce::{color_cube_mod3, diag_run, diag_transduction, TransductionError};
use crate::width::{treewidth_exact, WidthResult};

pub const BIPARTITION_CAVEAT: &str = "evidence only: the obstruction claim quantifies over every bipartition of \
every cube size, and a finite sample can falsify it but never prove it";

/// `ψ(colored Q_N)` against `Q̂_N` edge for edge, with the realized range.
pub fn diag_pipeline(n: usize) -> Result<Report, TransductionError> {
    let q = make_cube(n).map_err(TransductionError::InvalidRun)?;
    let expected = make_diag_cube(n).map_err(TransductionError::InvalidRun)?.graph;
    let out = diag_transduction().apply(&color_cube_mod3(&q), &diag_run(&q))?;
    let mismatch = first_difference(&out.graph, &expected);
    let report = match (mismatch, out.realized_range.at_most(3)) {
        (Some((u, v)), _) => Report::fail("diag-pipeline", Witness::Edge { u, v }),
        (None, false) => Report::fail("diag-pipeline", Witness::Vertex { v: 0 }),
        (None, true) => Report::pass("diag-pipeline"),
    };
    Ok(report
        .with_realized(out.realized_range)
        .with_bound(3)
        .with_note("N", n)
        .with_note("edges", out.graph.edge_count())
        .with_note("expected_edges", expected.edge_count()))
}

/// First pair adjacent in exactly one of two graphs on the same vertex set.
pub fn first_difference(a: &Graph, b: &Graph) -> Option<(usize, usize)> {
    if a.n() != b.n() {
        return Some((a.n().min(b.n()), a.n().max(b.n())));
    }
    let ea: Vec<_> = a.edges().collect();
    let eb: Vec<_> = b.edges().collect();
    let (mut i, mut j) = (0, 0);
    while i < ea.len() || j < eb.len() {
        match (ea.get(i), eb.get(j)) {
            (Some(x), Some(y)) if x == y => (i, j) = (i + 1, j + 1),
            (Some(x), Some(y)) => return Some(*x.min(y)),
            (Some(x), None) | (None, Some(x)) => return Some(*x),
            (None, None) => unreachable!(),
        }
    }
    None
}

/// The even/odd split of the fiber decomposition of `Q̂_N` along `axis`
/// with `d` layers per slice: one record per slice with its side and
/// treewidth, then the summary check.
pub fn slice_split(n: usize, axis: usize, d: usize, budget: u64) -> Result<Vec<Report>, SliceError> {
    let dq = make_diag_cube(n)?;
    let sc = build_slice_decomposition(&dq.graph, &cube_fiber_embedding(&dq, axis), d, 0)?;
    let sd = &sc.decomposition;
    let mut out: Vec<Report> = sd
        .parts
        .par_iter()
        .enumerate()
        .map(|(idx, part)| {
            let tw = treewidth_exact(&dq.graph.induced_subgraph(part)?.graph, budget);
            let side = if (idx + 1) % 2 == 0 { "A1" } else { "A2" };
            Ok(width_record("slice-tw", &tw)
                .with_note("slice", idx + 1)
                .with_note("side", side)
                .with_note("vertices", part.len()))
        })
        .collect::<Result<_, GraphError>>()?;
    let summary = check_even_odd_split(&dq.graph, sd, budget)?;
    out.push(
        summary
            .with_note("N", n)
            .with_note("d", d)
            .with_note("slices", sd.len()),
    );
    Ok(out)
}

fn width_record(check: &str, w: &WidthResult) -> Report {
    let r = if w.exact {
        Report::pass(check)
    } else {
        Report::inconclusive(check)
    };
    r.with_realized(Diameter::Finite(w.upper))
        .with_note("tw", [w.lower, w.upper])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionSample {
    pub index: u64,
    pub a1: Vec<usize>,
    pub tw_a1: [usize; 2],
    pub tw_a2: [usize; 2],
    pub exact: bool,
}

impl BipartitionSample {
    /// `[lower, upper]` of `max(tw(G[A₁]), tw(G[A₂]))`.
    pub fn max_side(&self) -> [usize; 2] {
        [self.tw_a1[0].max(self.tw_a2[0]), self.tw_a1[1].max(self.tw_a2[1])]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionSummary {
    pub n: usize,
    pub seed: u64,
    pub exhaustive: bool,
    pub samples: u64,
    /// `[lower, upper]` of the minimum over samples of the larger side's treewidth.
    pub min_max_side: [usize; 2],
    pub argmin: u64,
    /// Count of samples by the larger side's treewidth upper bound.
    pub histogram: BTreeMap<usize, u64>,
    pub all_exact: bool,
    pub caveat: String,
}

/// Seeded bipartitions of `V(Q̂_N)`. When `2^{N³} ≤ samples` every bipartition
/// is visited once (sample `i` puts vertex `v` in `A₁` iff bit `v` of `i` is
/// set); otherwise sample `i` is drawn from ChaCha8 stream `i` of `seed`, so
/// records do not depend on scheduling.
pub fn bipartition_sample(
    n: usize,
    samples: u64,
    seed: u64,
    budget: u64,
) -> Result<(BipartitionSummary, Vec<BipartitionSample>), GraphError> {
    let g = make_diag_cube(n)?.graph;
    let v = g.n();
    let exhaustive = v < 64 && (1u64 << v) <= samples;
    let count = if exhaustive { 1u64 << v } else { samples };
    let records: Vec<BipartitionSample> = (0..count)
        .into_par_iter()
        .map(|index| {
            let side: Vec<bool> = if exhaustive {
                (0..v).map(|b| index >> b & 1 == 1).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(index);
                (0..v).map(|_| rng.gen()).collect()
            };
            let a1: Vec<usize> = (0..v).filter(|&u| side[u]).collect();
            let a2: Vec<usize> = (0..v).filter(|&u| !side[u]).collect();
            let t1 = treewidth_exact(&g.induced_subgraph(&a1)?.graph, budget);
            let t2 = treewidth_exact(&g.induced_subgraph(&a2)?.graph, budget);
            Ok(BipartitionSample {
                index,
                a1,
                tw_a1: [t1.lower, t1.upper],
                tw_a2: [t2.lower, t2.upper],
                exact: t1.exact && t2.exact,
            })
        })
        .collect::<Result<_, GraphError>>()?;
    let mut histogram = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.max_side()[1]).or_insert(0) += 1;
    }
    let best = records.iter().min_by_key(|r| (r.max_side()[1], r.index));
    let summary = BipartitionSummary {
        n,
        seed,
        exhaustive,
        samples: count,
        min_max_side: best.map_or([0, 0], BipartitionSample::max_side),
        argmin: best.map_or(0, |r| r.index),
        histogram,
        all_exact: records.iter().all(|r| r.exact),
        caveat: BIPARTITION_CAVEAT.to_string(),
    };
    Ok((summary, records))
}

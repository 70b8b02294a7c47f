use std::collections::VecDeque;

use crate::graph::{bfs_distances, graph_metrics, Diameter, Graph};
use crate::report::{Report, Witness};

use super::{isolated_parts, lambda, CubeWitness, FlipError, FlipStructure, SMALL_PART_THRESHOLD};

fn require_large_parts(fs: &FlipStructure, parts: impl IntoIterator<Item = usize>) -> Result<(), FlipError> {
    let sizes = fs.part_sizes();
    for part in parts {
        let size = sizes[part];
        if size <= SMALL_PART_THRESHOLD {
            return Err(FlipError::PartTooSmall { part, size });
        }
    }
    Ok(())
}

fn nonempty_parts(fs: &FlipStructure) -> Vec<usize> {
    let sizes = fs.part_sizes();
    (0..fs.k()).filter(|&i| sizes[i] > 0).collect()
}

/// Largest pairwise distance inside `set` (distances taken in `g`), with a
/// pair realizing it; the first pair exceeding `bound` stops the scan.
fn max_distance_within(g: &Graph, set: &[usize], bound: usize) -> (Diameter, Option<(usize, usize)>) {
    let mut worst = Diameter::Finite(0);
    let mut pair = None;
    for &u in set {
        let dist = bfs_distances(g, u);
        for &v in set {
            let d = dist[v].map_or(Diameter::Infinite, Diameter::Finite);
            if d > worst {
                worst = d;
                pair = Some((u, v));
                if !d.at_most(bound) {
                    return (worst, pair);
                }
            }
        }
    }
    (worst, pair)
}

/// All pairs in `V_i ∪ V_j` are at `G`-distance at most 3, for a pattern
/// edge (or loop) `ij` between parts larger than the threshold.
pub fn check_small_dist(fs: &FlipStructure, witness: &CubeWitness, i: usize, j: usize) -> Result<Report, FlipError> {
    witness.require(fs)?;
    if i >= fs.k() || j >= fs.k() || !fs.flips(i, j) {
        return Err(FlipError::NotPatternEdge(i, j));
    }
    require_large_parts(fs, [i, j])?;
    let set: Vec<usize> = (0..fs.n()).filter(|&v| fs.part(v) == i || fs.part(v) == j).collect();
    let (worst, pair) = max_distance_within(fs.graph(), &set, 3);
    let report = match pair {
        Some((u, v)) if !worst.at_most(3) => Report::fail("small-dist", Witness::Pair { u, v }),
        _ => Report::pass("small-dist"),
    };
    Ok(report.with_realized(worst).with_bound(3).with_note("parts", [i, j]))
}

/// `G` itself is connected.
pub fn check_connected(fs: &FlipStructure, witness: &CubeWitness) -> Result<Report, FlipError> {
    witness.require(fs)?;
    require_large_parts(fs, nonempty_parts(fs))?;
    let components = components(fs.graph());
    let count = components.iter().copied().max().map_or(0, |m| m + 1);
    Ok(if count <= 1 {
        Report::pass("connected")
    } else {
        Report::fail("connected", Witness::Components { count })
    })
}

fn components(g: &Graph) -> Vec<usize> {
    let mut comp = vec![usize::MAX; g.n()];
    let mut next = 0;
    for s in 0..g.n() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if comp[w] == usize::MAX {
                    comp[w] = next;
                    queue.push_back(w);
                }
            }
        }
        next += 1;
    }
    comp
}

/// Connected components of `H − I(H)`, each a sorted list of parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternComponents {
    pub components: Vec<Vec<usize>>,
}

impl PatternComponents {
    pub fn of(fs: &FlipStructure) -> Self {
        let iso = isolated_parts(fs);
        let h = fs.pattern();
        let comp = components(h);
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; comp.len().max(1)];
        for i in 0..h.n() {
            if iso.binary_search(&i).is_ok() {
                continue;
            }
            if slot[comp[i]] == usize::MAX {
                slot[comp[i]] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[comp[i]]].push(i);
        }
        PatternComponents { components: groups }
    }

    /// `U(C)`: the vertices of `G` in the parts of component `c`.
    pub fn block(&self, fs: &FlipStructure, c: usize) -> Vec<usize> {
        let parts = &self.components[c];
        (0..fs.n()).filter(|&v| parts.contains(&fs.part(v))).collect()
    }
}

/// For every component `C` of `H − I(H)`, `diam(G[U(C)]) ≤ 3|C|`.
pub fn check_component_diameter(fs: &FlipStructure, witness: &CubeWitness) -> Result<Report, FlipError> {
    witness.require(fs)?;
    require_large_parts(fs, nonempty_parts(fs))?;
    let pc = PatternComponents::of(fs);
    let mut realized = Diameter::Finite(0);
    let mut per_component = Vec::new();
    for c in 0..pc.components.len() {
        let block = pc.block(fs, c);
        let bound = 3 * pc.components[c].len();
        let sub = fs.graph().induced_subgraph(&block)?;
        let (worst, pair) = max_distance_within(&sub.graph, &(0..block.len()).collect::<Vec<_>>(), bound);
        per_component.push(serde_json::json!({
            "parts": pc.components[c],
            "diameter": worst,
            "bound": bound,
        }));
        realized = realized.max(worst);
        if let Some((u, v)) = pair.filter(|_| !worst.at_most(bound)) {
            let witness = Witness::Pair {
                u: sub.original[u],
                v: sub.original[v],
            };
            return Ok(Report::fail("component-diameter", witness)
                .with_realized(realized)
                .with_bound(bound)
                .with_note("components", per_component));
        }
    }
    Ok(Report::pass("component-diameter")
        .with_realized(realized)
        .with_note("components", per_component))
}

/// The auxiliary graph on the components of `H − I(H)`.
#[derive(Debug, Clone)]
pub struct AuxiliaryK {
    pub graph: Graph,
    pub components: PatternComponents,
}

/// Components are adjacent when some `G`-path of length at most `2α + 1`
/// joins their blocks.
pub fn auxiliary_k(fs: &FlipStructure, alpha: usize) -> AuxiliaryK {
    let pc = PatternComponents::of(fs);
    let m = pc.components.len();
    let reach = 2 * alpha + 1;
    let mut owner = vec![usize::MAX; fs.n()];
    for c in 0..m {
        for v in pc.block(fs, c) {
            owner[v] = c;
        }
    }
    let mut edges = Vec::new();
    for c in 0..m {
        let sources = pc.block(fs, c);
        for v in crate::graph::ball_multi(fs.graph(), &sources, reach) {
            let d = owner[v];
            if d != usize::MAX && d > c {
                edges.push((c, d));
            }
        }
    }
    AuxiliaryK {
        graph: Graph::new(m, edges).expect("component indices are in range"),
        components: pc,
    }
}

/// With `λ ≤ α`: `K` is connected and `diam(G) ≤ 2kα + 4k`.
pub fn check_diameter_bound(
    fs: &FlipStructure,
    witness: &CubeWitness,
    alpha: usize,
    k: usize,
) -> Result<Report, FlipError> {
    witness.require(fs)?;
    if k < fs.k() {
        return Err(FlipError::TooFewParts {
            given: k,
            parts: fs.k(),
        });
    }
    if let Some(l) = lambda(fs) {
        if l > alpha {
            return Err(FlipError::LambdaAboveAlpha { lambda: l, alpha });
        }
    }
    let aux = auxiliary_k(fs, alpha);
    let bound = 2 * k * alpha + 4 * k;
    let k_metrics = graph_metrics(&aux.graph);
    if !k_metrics.connected {
        let count = components(&aux.graph).into_iter().max().map_or(0, |m| m + 1);
        return Ok(Report::fail("diameter-bound", Witness::Components { count })
            .with_bound(bound)
            .with_note("k_connected", false));
    }
    let g = fs.graph();
    let all: Vec<usize> = (0..g.n()).collect();
    let (diam, pair) = max_distance_within(g, &all, bound);
    let report = match pair {
        Some((u, v)) if !diam.at_most(bound) => Report::fail("diameter-bound", Witness::Pair { u, v }),
        _ => Report::pass("diameter-bound"),
    };
    Ok(report
        .with_realized(diam)
        .with_bound(bound)
        .with_note("k_connected", true)
        .with_note("k_vertices", aux.graph.n())
        .with_note("lambda", lambda(fs)))
}

use crate::graph::{ball, ColoredGraph, Diameter, Graph};
use crate::logic::{Formula, Relation};
use crate::report::{Report, Witness};
use crate::width::{cliquewidth_exact_tiny, treewidth_exact, EXACT_CLIQUEWIDTH_LIMIT};

use super::{SliceConstruction, SliceDecomposition, SliceError};

/// First `(v, w)` with `v ∈ S`, `w ∈ N_r[v]` and `w ∉ S′`.
pub fn check_ball_containment(g: &Graph, s: &[usize], s_prime: &[usize], r: usize) -> Option<(usize, usize)> {
    let mut inside = vec![false; g.n()];
    for &w in s_prime {
        inside[w] = true;
    }
    s.iter()
        .find_map(|&v| ball(g, v, r).into_iter().find(|&w| !inside[w]).map(|w| (v, w)))
}

/// Every edge joins slices whose indices differ by at most one.
pub fn verify_condition_i(g: &Graph, sd: &SliceDecomposition) -> Result<Report, SliceError> {
    let slice = sd.slice_of(g.n())?;
    let mut spread = 0;
    for (u, v) in g.edges() {
        let gap = slice[u].abs_diff(slice[v]);
        if gap > 1 {
            return Ok(Report::fail("condition-i", Witness::Edge { u, v })
                .with_realized(Diameter::Finite(gap))
                .with_bound(1)
                .with_note("slices", [slice[u], slice[v]]));
        }
        spread = spread.max(gap);
    }
    Ok(Report::pass("condition-i")
        .with_realized(Diameter::Finite(spread))
        .with_bound(1))
}

/// `ρ(G)[S] = ρ(G[S′])[S]`, comparing both sides pair by pair.
pub fn check_locality_window(
    g: &ColoredGraph,
    rho: &Formula,
    s: &[usize],
    s_prime: &[usize],
) -> Result<Report, SliceError> {
    let whole = Relation::compute(g, rho)?;
    check_locality_window_with(&whole, g, rho, s, s_prime)
}

/// As [`check_locality_window`] with `ρ(G)` already computed.
pub fn check_locality_window_with(
    whole: &Relation,
    g: &ColoredGraph,
    rho: &Formula,
    s: &[usize],
    s_prime: &[usize],
) -> Result<Report, SliceError> {
    let (sub, map) = g.induced(s_prime)?;
    let local = Relation::compute(&sub, rho)?;
    let mut edges = 0usize;
    for &u in s {
        let Some(iu) = map.index_of(u) else {
            return Err(SliceError::BallEscapes { v: u, w: u, r: 0 });
        };
        for &v in s {
            let iv = map.index_of(v).expect("checked above");
            let (global, restricted) = (whole.holds(u, v), local.holds(iu, iv));
            if global != restricted {
                return Ok(Report::fail("locality-window", Witness::Pair { u, v })
                    .with_note("in_whole_graph", global)
                    .with_note("in_extended_window", restricted));
            }
            edges += usize::from(global && u < v);
        }
    }
    Ok(Report::pass("locality-window")
        .with_note("window", s.len())
        .with_note("extended_window", s_prime.len())
        .with_note("edges", edges))
}

/// One report per window of `k` consecutive slices with its treewidth and
/// cliquewidth (exact on tiny windows, otherwise bounded). When the
/// decomposition claims a guard for `k`, each window is compared against it.
pub fn verify_condition_ii(
    g: &Graph,
    sd: &SliceDecomposition,
    k: usize,
    budget: u64,
) -> Result<Vec<Report>, SliceError> {
    sd.slice_of(g.n())?;
    let claimed = sd.guard.get(&k).copied();
    let windows = if k == 0 { 1 } else { (sd.len() + 1).saturating_sub(k) };
    let mut out = Vec::with_capacity(windows);
    for i in 1..=windows {
        let w = sd.window(i, k)?;
        let sub = g.induced_subgraph(&w)?.graph;
        let tw = treewidth_exact(&sub, budget);
        let cw = cliquewidth_exact_tiny(&sub, claimed.unwrap_or(EXACT_CLIQUEWIDTH_LIMIT), budget);
        let mode = if cw.exact && tw.exact { "exact" } else { "bound-only" };
        let witness = Witness::Window { start: i, len: k };
        let report = match claimed {
            Some(b) if cw.lower > b => Report::fail("condition-ii", witness),
            Some(b) if cw.upper > b => Report::inconclusive("condition-ii"),
            _ => Report::pass("condition-ii"),
        };
        let report = match claimed {
            Some(b) => report.with_bound(b),
            None => report,
        };
        out.push(
            report
                .with_realized(Diameter::Finite(cw.upper))
                .with_note("window", [i, k])
                .with_note("vertices", w.len())
                .with_note("tw", [tw.lower, tw.upper])
                .with_note("cw", [cw.lower, cw.upper])
                .with_note("mode", mode),
        );
    }
    Ok(out)
}

/// `tw(G[S]) ≤ tw(G[S′]) ≤ (kd + 2r)(tw_H + 1) − 1` for the window `(i, k)`.
pub fn check_window_tw_bound(
    g: &Graph,
    sc: &SliceConstruction,
    i: usize,
    k: usize,
    tw_h: usize,
    budget: u64,
) -> Result<Report, SliceError> {
    let (s, s_prime) = sc.window_pair(g, i, k)?;
    let bound = ((k * sc.d + 2 * sc.r) * (tw_h + 1)).saturating_sub(1);
    let tw_s = treewidth_exact(&g.induced_subgraph(&s)?.graph, budget);
    let tw_sp = treewidth_exact(&g.induced_subgraph(&s_prime)?.graph, budget);
    let worst = tw_s.upper.max(tw_sp.upper);
    let witness = Witness::Window { start: i, len: k };
    let report = if worst <= bound {
        Report::pass("window-tw")
    } else if tw_s.lower.max(tw_sp.lower) > bound {
        Report::fail("window-tw", witness)
    } else {
        Report::inconclusive("window-tw")
    };
    Ok(report
        .with_realized(Diameter::Finite(worst))
        .with_bound(bound)
        .with_note("window", [i, k])
        .with_note("tw_window", [tw_s.lower, tw_s.upper])
        .with_note("tw_extended", [tw_sp.lower, tw_sp.upper]))
}

/// `A₁` = union of the even-indexed slices (one-based), `A₂` = the rest.
pub fn even_odd_split(sd: &SliceDecomposition) -> (Vec<usize>, Vec<usize>) {
    let mut a1 = Vec::new();
    let mut a2 = Vec::new();
    for (idx, part) in sd.parts.iter().enumerate() {
        if (idx + 1) % 2 == 0 {
            a1.extend(part);
        } else {
            a2.extend(part);
        }
    }
    a1.sort_unstable();
    a2.sort_unstable();
    (a1, a2)
}

/// `G[A₁]` has no edge between distinct even slices, and its treewidth is
/// the largest treewidth of a single even slice.
pub fn check_even_odd_split(g: &Graph, sd: &SliceDecomposition, budget: u64) -> Result<Report, SliceError> {
    let slice = sd.slice_of(g.n())?;
    let (a1, a2) = even_odd_split(sd);
    for (u, v) in g.edges() {
        if slice[u] % 2 == 0 && slice[v] % 2 == 0 && slice[u] != slice[v] {
            return Ok(Report::fail("even-odd-split", Witness::Edge { u, v }));
        }
    }
    let whole = treewidth_exact(&g.induced_subgraph(&a1)?.graph, budget);
    let mut per_slice = Vec::new();
    let (mut lo, mut hi) = (0, 0);
    for part in sd.parts.iter().skip(1).step_by(2) {
        let t = treewidth_exact(&g.induced_subgraph(part)?.graph, budget);
        lo = lo.max(t.lower);
        hi = hi.max(t.upper);
        per_slice.push([t.lower, t.upper]);
    }
    let other = treewidth_exact(&g.induced_subgraph(&a2)?.graph, budget);
    let agree = whole.exact && lo == hi && whole.upper == hi;
    let report = if agree {
        Report::pass("even-odd-split")
    } else if whole.lower > hi || whole.upper < lo {
        Report::fail(
            "even-odd-split",
            Witness::Width {
                lower: whole.lower,
                bound: hi,
            },
        )
    } else {
        Report::inconclusive("even-odd-split")
    };
    Ok(report
        .with_realized(Diameter::Finite(whole.upper))
        .with_note("a1", a1.len())
        .with_note("a2", a2.len())
        .with_note("tw_a1", [whole.lower, whole.upper])
        .with_note("tw_a2", [other.lower, other.upper])
        .with_note("tw_even_slices", per_slice))
}

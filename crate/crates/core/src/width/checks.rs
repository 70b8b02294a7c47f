use crate::graph::{path, strong_product, Diameter, Graph};
use crate::report::{Report, Witness};

use super::{cliquewidth_exact_tiny, treewidth_exact};

/// `tw(G ⊠ P_k) ≤ k(tw(G) + 1) − 1`, decided from exact values or bounds.
pub fn check_product_tw_bound(g: &Graph, k: usize, budget: u64) -> Report {
    assert!(k >= 1, "the path factor needs at least one vertex");
    let check = "tw-product";
    let base = treewidth_exact(g, budget);
    let product = strong_product(g, &path(k)).expect("simple graphs have no loops").graph;
    let prod = treewidth_exact(&product, budget);
    let strict = k * (base.lower + 1) - 1;
    let loose = k * (base.upper + 1) - 1;
    let report = if prod.upper <= strict {
        Report::pass(check).with_bound(strict)
    } else if prod.lower > loose {
        Report::fail(
            check,
            Witness::Width {
                lower: prod.lower,
                bound: loose,
            },
        )
        .with_bound(loose)
    } else {
        Report::inconclusive(check).with_bound(strict)
    };
    report
        .with_realized(Diameter::Finite(prod.upper))
        .with_note("k", k)
        .with_note("tw_base", [base.lower, base.upper])
        .with_note("tw_product", [prod.lower, prod.upper])
}

/// Two disjoint `s`-sets `(A, B)` with every `A`–`B` pair adjacent, if any.
pub fn find_biclique(g: &Graph, s: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if s == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    let candidates: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) >= s).collect();
    fn extend(
        g: &Graph,
        s: usize,
        candidates: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        common: Vec<usize>,
    ) -> Option<Vec<usize>> {
        if chosen.len() == s {
            return Some(common[..s].to_vec());
        }
        for (t, &v) in candidates.iter().enumerate().skip(from) {
            if candidates.len() - t < s - chosen.len() {
                break;
            }
            let next: Vec<usize> = if chosen.is_empty() {
                g.neighbors(v).iter().copied().filter(|&u| g.degree(u) >= s).collect()
            } else {
                common.iter().copied().filter(|&u| g.has_edge(u, v)).collect()
            };
            if next.len() < s {
                continue;
            }
            chosen.push(v);
            if let Some(b) = extend(g, s, candidates, t + 1, chosen, next) {
                return Some(b);
            }
            chosen.pop();
        }
        None
    }
    let mut chosen = Vec::with_capacity(s);
    let b = extend(g, s, &candidates, 0, &mut chosen, Vec::new())?;
    Some((chosen, b))
}

pub fn is_biclique_free(g: &Graph, s: usize) -> bool {
    find_biclique(g, s).is_none()
}

/// Evidence record for sparse graphs of bounded cliquewidth: whether `G` is
/// `K_{s,s}`-free, its cliquewidth (exact up to `c` labels, else bounded)
/// and its treewidth. No bound relating them is asserted.
pub fn check_sparse_cw_tw(g: &Graph, c: usize, s: usize, budget: u64) -> Report {
    let check = "sparse-cw-tw";
    let biclique = find_biclique(g, s);
    let cw = cliquewidth_exact_tiny(g, c, budget);
    let tw = treewidth_exact(g, budget);
    let hypothesis = biclique.is_none() && cw.upper <= c;
    let report = if hypothesis {
        Report::pass(check)
    } else {
        Report::inconclusive(check)
    };
    let mut report = report
        .with_realized(Diameter::Finite(tw.upper))
        .with_note("s", s)
        .with_note("c", c)
        .with_note("biclique_free", biclique.is_none())
        .with_note("cw", [cw.lower, cw.upper])
        .with_note("cw_exact", cw.exact)
        .with_note("tw", [tw.lower, tw.upper])
        .with_note("tw_exact", tw.exact);
    if let Some((a, b)) = biclique {
        report = report.with_note("biclique", [a, b]);
    }
    report
}

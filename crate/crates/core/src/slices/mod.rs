//! Slice decompositions built from embeddings `G ⊆ H ⊠ P`.
//!
//! Path positions, layers `U_i` and slices `V_i` are one-based in the API
//! (`layers[0]` is `U_1`), matching the embedding's position field.

mod checks;
mod embed;

pub use checks::{
    check_ball_containment, check_even_odd_split, check_locality_window, check_locality_window_with,
    check_window_tw_bound, even_odd_split, verify_condition_i, verify_condition_ii,
};
pub use embed::{cube_fiber_embedding, cube_layering_embedding, product_embedding, verify_embedding, ProductEmbedding};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::logic::EvalError;
use crate::report::Report;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SliceError {
    #[error("invalid embedding: {0:?}")]
    Embedding(Box<Report>),
    #[error("slices do not partition the vertices: vertex {0} is missing or repeated")]
    NotPartition(usize),
    #[error("window ({i}, {k}) is out of range for {len} slices")]
    WindowOutOfRange { i: usize, k: usize, len: usize },
    #[error("slice width d must be at least 1")]
    ZeroWidth,
    #[error("vertex {w} at distance at most {r} from {v} leaves the extended window")]
    BallEscapes { v: usize, w: usize, r: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// An ordered partition `V_1, …, V_ℓ`, optionally with claimed width bounds
/// `f(k)` for windows of `k` consecutive slices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceDecomposition {
    pub parts: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub guard: BTreeMap<usize, usize>,
}

impl SliceDecomposition {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        SliceDecomposition {
            parts,
            guard: BTreeMap::new(),
        }
    }

    pub fn with_guard(mut self, k: usize, bound: usize) -> Self {
        self.guard.insert(k, bound);
        self
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// One-based slice index of every vertex of an `n`-vertex graph.
    pub fn slice_of(&self, n: usize) -> Result<Vec<usize>, SliceError> {
        let mut index = vec![0usize; n];
        for (i, part) in self.parts.iter().enumerate() {
            for &v in part {
                if v >= n || index[v] != 0 {
                    return Err(SliceError::NotPartition(v));
                }
                index[v] = i + 1;
            }
        }
        match index.iter().position(|&i| i == 0) {
            Some(v) => Err(SliceError::NotPartition(v)),
            None => Ok(index),
        }
    }

    /// `S = V_i ∪ … ∪ V_{i+k−1}`, sorted; `k = 0` is the empty window.
    pub fn window(&self, i: usize, k: usize) -> Result<Vec<usize>, SliceError> {
        check_window(i, k, self.len())?;
        let mut out: Vec<usize> = self.parts[i - 1..i - 1 + k].iter().flatten().copied().collect();
        out.sort_unstable();
        Ok(out)
    }
}

fn check_window(i: usize, k: usize, len: usize) -> Result<(), SliceError> {
    if i == 0 || i + k > len + 1 {
        return Err(SliceError::WindowOutOfRange { i, k, len });
    }
    Ok(())
}

/// Layers `U_1, …, U_p` of an embedding: vertices at each path position.
pub fn layers(g: &Graph, emb: &ProductEmbedding) -> Result<Vec<Vec<usize>>, SliceError> {
    let report = verify_embedding(g, emb);
    if !report.passed() {
        return Err(SliceError::Embedding(Box::new(report)));
    }
    Ok(position_layers(emb))
}

/// Groups vertices by path position without checking the embedding; any
/// map into `[1, p]` yields a partition. Out-of-range positions are dropped.
pub fn position_layers(emb: &ProductEmbedding) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); emb.p];
    for (v, &(_, pos)) in emb.map.iter().enumerate() {
        if let Some(layer) = pos.checked_sub(1).and_then(|i| out.get_mut(i)) {
            layer.push(v);
        }
    }
    out
}

/// A slice decomposition grouping `d` consecutive layers per slice, with
/// the parameters that define its extended windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceConstruction {
    pub decomposition: SliceDecomposition,
    pub layers: Vec<Vec<usize>>,
    pub d: usize,
    pub r: usize,
}

/// `V_i = U_{d(i−1)+1} ∪ … ∪ U_{di}` for `i = 1..⌈p/d⌉`; the last slice may
/// hold fewer layers.
pub fn build_slice_decomposition(
    g: &Graph,
    emb: &ProductEmbedding,
    d: usize,
    r: usize,
) -> Result<SliceConstruction, SliceError> {
    let layers = layers(g, emb)?;
    from_layers(layers, d, r)
}

/// Groups already computed layers; see [`build_slice_decomposition`].
pub fn from_layers(layers: Vec<Vec<usize>>, d: usize, r: usize) -> Result<SliceConstruction, SliceError> {
    if d == 0 {
        return Err(SliceError::ZeroWidth);
    }
    let parts = layers
        .chunks(d)
        .map(|group| {
            let mut part: Vec<usize> = group.iter().flatten().copied().collect();
            part.sort_unstable();
            part
        })
        .collect();
    Ok(SliceConstruction {
        decomposition: SliceDecomposition::new(parts),
        layers,
        d,
        r,
    })
}

impl SliceConstruction {
    pub fn p(&self) -> usize {
        self.layers.len()
    }

    /// Layer range `[first, last]` (one-based, inclusive) covered by the
    /// window `(i, k)` after extending `r` layers each side, clamped to `[1, p]`.
    pub fn extended_span(&self, i: usize, k: usize) -> Result<(usize, usize), SliceError> {
        check_window(i, k, self.decomposition.len())?;
        let first = self.d * (i - 1) + 1;
        let last = (self.d * (i + k - 1)).min(self.p());
        Ok((first.saturating_sub(self.r).max(1), (last + self.r).min(self.p())))
    }

    pub fn window(&self, i: usize, k: usize) -> Result<Vec<usize>, SliceError> {
        self.decomposition.window(i, k)
    }

    /// `S′`: the window extended by `r` layers on each side.
    pub fn extended_window(&self, i: usize, k: usize) -> Result<Vec<usize>, SliceError> {
        if k == 0 {
            check_window(i, k, self.decomposition.len())?;
            return Ok(Vec::new());
        }
        let (first, last) = self.extended_span(i, k)?;
        let mut out: Vec<usize> = self.layers[first - 1..last].iter().flatten().copied().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `(S, S′)` after asserting `N_r[v] ⊆ S′` for every `v ∈ S`.
    pub fn window_pair(&self, g: &Graph, i: usize, k: usize) -> Result<(Vec<usize>, Vec<usize>), SliceError> {
        let s = self.window(i, k)?;
        let s_prime = self.extended_window(i, k)?;
        if let Some((v, w)) = check_ball_containment(g, &s, &s_prime, self.r) {
            return Err(SliceError::BallEscapes { v, w, r: self.r });
        }
        Ok((s, s_prime))
    }
}

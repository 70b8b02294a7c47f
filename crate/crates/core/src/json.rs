//! Wire formats shared by the library and the command-line harness.
//!
//! Vertex indices are zero-based everywhere except `part_of` (one-based
//! part numbers), embedding positions and cube coordinates.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flip::{FlipError, FlipStructure};
use crate::graph::{ColoredGraph, Cube, CubeCoord, Graph, GraphError};
use crate::logic::{parse_formula, ParseError};
use crate::slices::ProductEmbedding;
use crate::transduce::Transduction;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("invalid flip structure: {0}")]
    Flip(#[from] FlipError),
    #[error("invalid formula: {0}")]
    Formula(#[from] ParseError),
    #[error("{0}")]
    Invalid(String),
}

pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub loops: Vec<usize>,
    #[serde(default)]
    pub colors: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[usize; 3]>>,
}

impl GraphJson {
    pub fn from_graph(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
            loops: g.loops().collect(),
            ..Default::default()
        }
    }

    pub fn from_colored(g: &ColoredGraph) -> Self {
        GraphJson {
            colors: g.color_members(),
            ..Self::from_graph(&g.graph)
        }
    }

    pub fn from_cube(cube: &Cube) -> Self {
        GraphJson {
            coords: Some(cube.coords.iter().map(CubeCoord::as_array).collect()),
            ..Self::from_graph(&cube.graph)
        }
    }

    fn checked_edges(&self) -> Result<Vec<(usize, usize)>, JsonError> {
        let mut edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        if let Some(&(u, v)) = edges.iter().find(|(u, v)| u >= v) {
            return Err(JsonError::Invalid(format!("edge [{u},{v}] must satisfy u < v")));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            return Err(JsonError::Invalid(format!("duplicate edge [{},{}]", w[0].0, w[0].1)));
        }
        Ok(edges)
    }

    /// A simple graph; colors are ignored and loops rejected.
    pub fn to_graph(&self) -> Result<Graph, JsonError> {
        if let Some(&v) = self.loops.first() {
            return Err(GraphError::LoopNotAllowed(v).into());
        }
        Ok(Graph::new(self.n, self.checked_edges()?)?)
    }

    /// A pattern graph, loops allowed.
    pub fn to_pattern(&self) -> Result<Graph, JsonError> {
        Ok(Graph::pattern(
            self.n,
            self.checked_edges()?,
            self.loops.iter().copied(),
        )?)
    }

    pub fn to_colored(&self) -> Result<ColoredGraph, JsonError> {
        Ok(ColoredGraph::new(self.to_graph()?, self.colors.clone())?)
    }

    /// The cube table when coordinates are present and consistent with `n`.
    pub fn to_cube(&self) -> Result<Cube, JsonError> {
        let coords = self
            .coords
            .as_ref()
            .ok_or_else(|| JsonError::Invalid("graph has no \"coords\"".into()))?;
        let side = (1..=self.n).find(|s| s * s * s >= self.n).unwrap_or(0);
        if coords.len() != self.n || side * side * side != self.n || side == 0 {
            return Err(JsonError::Invalid("\"coords\" do not describe a cube".into()));
        }
        let coords: Vec<CubeCoord> = coords.iter().map(|&[i, j, k]| CubeCoord::new(i, j, k)).collect();
        if coords.iter().any(|c| c.as_array().iter().any(|&x| x == 0 || x > side)) {
            return Err(JsonError::Invalid("cube coordinate out of range".into()));
        }
        Ok(Cube {
            side,
            graph: self.to_graph()?,
            coords,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlipJson {
    pub graph: GraphJson,
    pub k: usize,
    pub part_of: Vec<usize>,
    #[serde(rename = "H")]
    pub pattern: GraphJson,
}

impl FlipJson {
    pub fn from_structure(fs: &FlipStructure) -> Self {
        FlipJson {
            graph: GraphJson::from_graph(fs.graph()),
            k: fs.k(),
            part_of: fs.part_of().iter().map(|p| p + 1).collect(),
            pattern: GraphJson::from_graph(fs.pattern()),
        }
    }

    /// Attaches the cube witness of the flipped graph as `graph.coords`.
    pub fn with_coords(mut self, coords: &[CubeCoord]) -> Self {
        self.graph.coords = Some(coords.iter().map(CubeCoord::as_array).collect());
        self
    }

    pub fn to_structure(&self) -> Result<FlipStructure, JsonError> {
        let pattern = self.pattern.to_pattern()?;
        if pattern.n() != self.k {
            return Err(JsonError::Invalid(format!(
                "\"k\" is {} but H has {} vertices",
                self.k,
                pattern.n()
            )));
        }
        let mut part_of = Vec::with_capacity(self.part_of.len());
        for &p in &self.part_of {
            if p == 0 || p > self.k {
                return Err(JsonError::Invalid(format!("part number {p} outside 1..={}", self.k)));
            }
            part_of.push(p - 1);
        }
        Ok(FlipStructure::new(self.graph.to_graph()?, part_of, pattern)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransductionJson {
    pub colors: Vec<String>,
    pub psi: String,
    #[serde(default)]
    pub range: Option<usize>,
}

impl TransductionJson {
    pub fn from_transduction(t: &Transduction) -> Self {
        TransductionJson {
            colors: t.colors.clone(),
            psi: t.psi.to_string(),
            range: t.declared_range,
        }
    }

    pub fn to_transduction(&self) -> Result<Transduction, JsonError> {
        let psi = parse_formula(&self.psi)?;
        Ok(Transduction::new(self.colors.clone(), psi, self.range))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingJson {
    #[serde(rename = "H")]
    pub target: GraphJson,
    pub p: usize,
    pub map: Vec<[usize; 2]>,
}

impl EmbeddingJson {
    pub fn from_embedding(emb: &ProductEmbedding) -> Self {
        EmbeddingJson {
            target: GraphJson::from_graph(&emb.target),
            p: emb.p,
            map: emb.map.iter().map(|&(h, pos)| [h, pos]).collect(),
        }
    }

    pub fn to_embedding(&self) -> Result<ProductEmbedding, JsonError> {
        let map = self.map.iter().map(|&[h, pos]| (h, pos)).collect();
        Ok(ProductEmbedding::new(self.target.to_graph()?, self.p, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flip::{flipped_cube, FlippedCubeOptions};
    use crate::graph::{make_diag_cube, path};
    use crate::slices::{cube_fiber_embedding, SliceDecomposition};
    use crate::transduce::diag_transduction;
    use crate::width::treewidth_exact;
    use crate::width::WidthResult;

    #[test]
    fn graph_round_trip() {
        let g = ColoredGraph::from(path(4)).with_color("R", [0, 2]).unwrap();
        let text = serde_json::to_string(&GraphJson::from_colored(&g)).unwrap();
        assert_eq!(
            text,
            r#"{"n":4,"edges":[[0,1],[1,2],[2,3]],"loops":[],"colors":{"R":[0,2]}}"#
        );
        let back: GraphJson = from_str(&text).unwrap();
        assert_eq!(back.to_colored().unwrap(), g);
    }

    #[test]
    fn malformed_graphs() {
        let bad = [
            r#"{"n":2,"edges":[[1,0]]}"#,
            r#"{"n":2,"edges":[[0,1],[0,1]]}"#,
            r#"{"n":2,"edges":[[0,5]]}"#,
            r#"{"n":2,"edges":[],"loops":[0]}"#,
            r#"{"n":2,"edges":[],"colors":{"R":[2]}}"#,
        ];
        for text in bad {
            let g: GraphJson = from_str(text).unwrap();
            assert!(g.to_colored().is_err(), "{text}");
        }
        assert!(from_str::<GraphJson>(r#"{"n":2,"edges":[],"extra":1}"#).is_err());
        assert!(from_str::<GraphJson>("{").is_err());
    }

    #[test]
    fn cube_and_flip_round_trip() {
        let dq = make_diag_cube(2).unwrap();
        let j = GraphJson::from_cube(&dq);
        assert_eq!(j.edges.len(), 19);
        let back = j.to_cube().unwrap();
        assert_eq!(back.graph, dq.graph);
        assert_eq!(back.coords, dq.coords);

        let inst = flipped_cube(&FlippedCubeOptions::new(4, 2), 7).unwrap();
        let fj = FlipJson::from_structure(&inst.structure);
        assert!(fj.part_of.iter().all(|&p| (1..=2).contains(&p)));
        let text = serde_json::to_string(&fj).unwrap();
        assert!(text.contains("\"H\""));
        assert_eq!(
            from_str::<FlipJson>(&text).unwrap().to_structure().unwrap(),
            inst.structure
        );
    }

    #[test]
    fn other_formats() {
        let t = diag_transduction();
        let tj = TransductionJson::from_transduction(&t);
        assert_eq!(tj.range, Some(3));
        let back = from_str::<TransductionJson>(&serde_json::to_string(&tj).unwrap()).unwrap();
        assert_eq!(back.to_transduction().unwrap(), t);

        let sd = SliceDecomposition::new(vec![vec![0, 1], vec![2]]).with_guard(2, 3);
        let text = serde_json::to_string(&sd).unwrap();
        assert_eq!(text, r#"{"parts":[[0,1],[2]],"guard":{"2":3}}"#);
        assert_eq!(from_str::<SliceDecomposition>(&text).unwrap(), sd);

        let emb = cube_fiber_embedding(&make_diag_cube(2).unwrap(), 2);
        let ej = EmbeddingJson::from_embedding(&emb);
        assert_eq!(ej.to_embedding().unwrap(), emb);

        let w = treewidth_exact(&path(5), 1000);
        let text = serde_json::to_string(&w).unwrap();
        let back: WidthResult = from_str(&text).unwrap();
        assert_eq!(back, w);
        back.verify_certificate(&path(5)).unwrap();
    }
}

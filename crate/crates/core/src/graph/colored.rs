use std::collections::BTreeMap;

use super::{Graph, GraphError};

/// A graph with named unary predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    pub graph: Graph,
    colors: BTreeMap<String, Vec<bool>>,
}

impl ColoredGraph {
    pub fn uncolored(graph: Graph) -> Self {
        ColoredGraph {
            graph,
            colors: BTreeMap::new(),
        }
    }

    pub fn new(graph: Graph, colors: impl IntoIterator<Item = (String, Vec<usize>)>) -> Result<Self, GraphError> {
        let mut cg = Self::uncolored(graph);
        for (name, members) in colors {
            if cg.colors.contains_key(&name) {
                return Err(GraphError::DuplicateColor(name));
            }
            cg = cg.with_color(name, members)?;
        }
        Ok(cg)
    }

    /// Adds or replaces a color.
    pub fn with_color(
        mut self,
        name: impl Into<String>,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<Self, GraphError> {
        let n = self.graph.n();
        let mut flags = vec![false; n];
        for v in members {
            if v >= n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
            flags[v] = true;
        }
        self.colors.insert(name.into(), flags);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn color(&self, name: &str) -> Option<&[bool]> {
        self.colors.get(name).map(Vec::as_slice)
    }

    pub fn has_color(&self, name: &str, v: usize) -> bool {
        self.colors.get(name).is_some_and(|c| c[v])
    }

    pub fn color_names(&self) -> impl Iterator<Item = &str> {
        self.colors.keys().map(String::as_str)
    }

    /// Members of each color, sorted.
    pub fn color_members(&self) -> BTreeMap<String, Vec<usize>> {
        self.colors
            .iter()
            .map(|(name, flags)| {
                let members = flags.iter().enumerate().filter(|(_, &f)| f).map(|(v, _)| v).collect();
                (name.clone(), members)
            })
            .collect()
    }

    /// Induced colored subgraph; colors are restricted to the kept vertices.
    pub fn induced(&self, vertices: &[usize]) -> Result<(ColoredGraph, super::InducedSubgraph), GraphError> {
        let sub = self.graph.induced_subgraph(vertices)?;
        let colors = self
            .colors
            .iter()
            .map(|(name, flags)| (name.clone(), sub.original.iter().map(|&v| flags[v]).collect()))
            .collect();
        Ok((
            ColoredGraph {
                graph: sub.graph.clone(),
                colors,
            },
            sub,
        ))
    }
}

impl From<Graph> for ColoredGraph {
    fn from(graph: Graph) -> Self {
        ColoredGraph::uncolored(graph)
    }
}

//! Treewidth and cliquewidth: exact search on small graphs, sound bounds
//! elsewhere, and certificates that re-verify independently.

mod checks;
mod cliquewidth;
mod treewidth;

pub use checks::{check_product_tw_bound, check_sparse_cw_tw, find_biclique, is_biclique_free};
pub use cliquewidth::{
    cliquewidth_exact_tiny, cliquewidth_upper, cograph_expression, Expr, ExprError, EXACT_CLIQUEWIDTH_LIMIT,
};
pub use treewidth::{
    elimination_width, treewidth_exact, treewidth_lower, treewidth_upper, DecompositionError, TreeDecomposition,
    EXACT_COMPONENT_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::graph::Graph;

/// Search nodes granted to one exact computation unless stated otherwise.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthKind {
    Treewidth,
    Cliquewidth,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "data", rename_all = "snake_case")]
pub enum Certificate {
    TreeDecomposition(TreeDecomposition),
    Expression(Expr),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthResult {
    pub kind: WidthKind,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
}

impl WidthResult {
    /// Re-checks the certificate against `g`: a tree decomposition of width
    /// `upper`, or an expression using at most `upper` labels.
    pub fn verify_certificate(&self, g: &Graph) -> Result<(), String> {
        match &self.certificate {
            None => Ok(()),
            Some(Certificate::TreeDecomposition(td)) => {
                td.verify(g).map_err(|e| e.to_string())?;
                if td.width() > self.upper {
                    return Err(format!(
                        "decomposition width {} exceeds upper bound {}",
                        td.width(),
                        self.upper
                    ));
                }
                Ok(())
            }
            Some(Certificate::Expression(e)) => {
                let labels = e.verify(g).map_err(|e| e.to_string())?;
                if labels > self.upper {
                    return Err(format!(
                        "expression uses {labels} labels, above upper bound {}",
                        self.upper
                    ));
                }
                Ok(())
            }
        }
    }
}

//! Pass/fail reports shared by every checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::graph::Diameter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The check could only be bounded within its budget.
    Inconclusive,
}

/// Concrete evidence attached to a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Vertex {
        v: usize,
    },
    Pair {
        u: usize,
        v: usize,
    },
    Edge {
        u: usize,
        v: usize,
    },
    Part {
        index: usize,
    },
    Path {
        vertices: Vec<usize>,
    },
    Window {
        start: usize,
        len: usize,
    },
    WindowPair {
        start: usize,
        len: usize,
        u: usize,
        v: usize,
    },
    Components {
        count: usize,
    },
    /// A width lower bound that exceeds the claimed bound.
    Width {
        lower: usize,
        bound: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub check: String,
    pub status: Status,
    #[serde(default)]
    pub witness: Option<Witness>,
    /// The largest value actually observed (distance, diameter, width, ...).
    #[serde(default)]
    pub realized_bound: Option<Diameter>,
    /// The bound the check compares against, when there is one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<usize>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub notes: BTreeMap<String, Value>,
}

impl Report {
    pub fn pass(check: impl Into<String>) -> Self {
        Report {
            check: check.into(),
            status: Status::Pass,
            witness: None,
            realized_bound: None,
            bound: None,
            notes: BTreeMap::new(),
        }
    }

    pub fn fail(check: impl Into<String>, witness: Witness) -> Self {
        Report {
            status: Status::Fail,
            witness: Some(witness),
            ..Report::pass(check)
        }
    }

    pub fn inconclusive(check: impl Into<String>) -> Self {
        Report {
            status: Status::Inconclusive,
            ..Report::pass(check)
        }
    }

    /// Pass when `witness` is `None`, otherwise fail with it.
    pub fn from_witness(check: impl Into<String>, witness: Option<Witness>) -> Self {
        match witness {
            None => Report::pass(check),
            Some(w) => Report::fail(check, w),
        }
    }

    pub fn with_realized(mut self, realized: Diameter) -> Self {
        self.realized_bound = Some(realized);
        self
    }

    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound = Some(bound);
        self
    }

    pub fn with_note(mut self, key: &str, value: impl Serialize) -> Self {
        self.notes
            .insert(key.to_string(), serde_json::to_value(value).expect("note serializes"));
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Combines reports: fail dominates inconclusive, which dominates pass.
/// The first failing witness is kept and realized bounds take the maximum.
pub fn merge(check: impl Into<String>, reports: impl IntoIterator<Item = Report>) -> Report {
    let mut out = Report::pass(check);
    let mut count = 0usize;
    for r in reports {
        count += 1;
        match (out.status, r.status) {
            (Status::Fail, _) => {}
            (_, Status::Fail) => {
                out.status = Status::Fail;
                out.witness = r.witness.clone();
                out.notes.insert("failed_check".into(), Value::String(r.check.clone()));
            }
            (Status::Pass, Status::Inconclusive) => out.status = Status::Inconclusive,
            _ => {}
        }
        if let Some(x) = r.realized_bound {
            out.realized_bound = Some(out.realized_bound.map_or(x, |y| y.max(x)));
        }
        if out.bound.is_none() {
            out.bound = r.bound;
        }
    }
    out.notes.insert("merged".into(), Value::from(count));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_keeps_first_failure() {
        let a = Report::pass("a").with_realized(Diameter::Finite(2));
        let b = Report::fail("b", Witness::Vertex { v: 3 }).with_realized(Diameter::Finite(5));
        let c = Report::fail("c", Witness::Vertex { v: 4 });
        let m = merge("all", [a, b, c]);
        assert!(m.failed());
        assert_eq!(m.witness, Some(Witness::Vertex { v: 3 }));
        assert_eq!(m.realized_bound, Some(Diameter::Finite(5)));
        assert!(merge("none", []).passed());
    }

    #[test]
    fn serializes_with_status_and_witness() {
        let r = Report::fail("x", Witness::Pair { u: 1, v: 2 }).with_bound(3);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["witness"]["kind"], "pair");
        assert_eq!(v["bound"], 3);
    }
}

//! A laboratory for first-order transductions of colored graphs, k-flip
//! structures, slice decompositions and cube obstructions.
//!
//! Every construction is executable on desk-scale instances, and every
//! structural claim about it comes with a checker that either passes or
//! returns a concrete witness.

pub mod experiment;
pub mod flip;
pub mod graph;
pub mod json;
pub mod logic;
pub mod report;
pub mod slices;
pub mod transduce;
pub mod width;

pub use graph::{ColoredGraph, Graph};
pub use logic::Formula;
pub use report::{Report, Status, Witness};

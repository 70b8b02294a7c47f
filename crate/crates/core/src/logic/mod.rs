//! First-order formulas over colored graphs: syntax, parsing, evaluation and
//! semantic checks (symmetry, range, locality).

mod ast;
mod checks;
mod eval;
mod parser;

pub use ast::Formula;
pub use checks::{
    all_pairs, check_local, check_range, check_symmetric_antireflexive, classify_interpretation, interpret,
    Classification, InterpretError, Relation,
};
pub use eval::{assignment, evaluate, Assignment, EvalError, Evaluator, Prepared};
pub use parser::{parse_formula, parse_formula_with_free, ParseError};

//! Exact polynomial side: graph polynomials, Dodgson minors and the
//! denominator-reduction cascade.

mod matrix;
mod poly;
mod reduce;

pub use matrix::{
    dodgson, graph_polynomial, spanning_tree_count, spanning_tree_polynomial, GraphMatrix, PolyMatrix,
};
pub use poly::{Monomial, PolyError, SparsePoly, MAX_EXP, MAX_VARS};
pub use reduce::{
    denominator_reduce, denominator_reduce_with, five_invariant, initial_edges, split_bilinear,
    FactorQuadruple, ReduceOptions, ReductionState, ReductionStepLog, Split, DEFAULT_NODE_BUDGET,
};

use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SympolyError {
    Disconnected,
    TooManyEdges(usize),
    IndexOutOfRange(usize),
    RepeatedEdge(usize),
    UnequalIndexSets,
    Precondition(&'static str),
    InvariantViolation { step: usize, what: &'static str },
}

impl fmt::Display for SympolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SympolyError::Disconnected => f.write_str("graph is disconnected"),
            SympolyError::TooManyEdges(n) => {
                write!(f, "{n} edges exceed the {MAX_VARS}-variable limit")
            }
            SympolyError::IndexOutOfRange(i) => write!(f, "edge index {i} out of range"),
            SympolyError::RepeatedEdge(e) => write!(f, "edge {e} repeated"),
            SympolyError::UnequalIndexSets => f.write_str("row and column sets differ in size"),
            SympolyError::Precondition(s) => write!(f, "precondition violated: {s}"),
            SympolyError::InvariantViolation { step, what } => {
                write!(f, "reduction invariant broken at step {step}: {what}")
            }
        }
    }
}

impl core::error::Error for SympolyError {}

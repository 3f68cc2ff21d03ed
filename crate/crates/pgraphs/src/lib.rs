//! Exact-arithmetic toolkit for ordered groups and P-graphs.
//!
//! The crate verifies, at bounded depth, the order-theoretic machinery behind
//! P-graph algebras: positive cones and their intervals/joins, reductions and
//! strong reductions between ordered groups, finite P-graphs with unique
//! factorization, their filters and ultrafilters, the ultrafilter and
//! left-regular matrix representations over the rationals, and the
//! tightness/faithfulness/grading properties of those representations —
//! including the semilattice (E-tight) formulation of tightness as an
//! executable cross-check.
//!
//! All arithmetic is exact: group elements are canonical integer/dyadic/word
//! forms, matrices are sparse with rational entries, and every checked
//! identity is an equality, never a tolerance.
//!
//! ```
//! use pgraphs::filters::ultrafilters;
//! use pgraphs::parse::builtin_graph;
//! use pgraphs::rep::{build_rep, span_dim, RepKind, SpanMode};
//!
//! let g = builtin_graph("m5");
//! assert_eq!(ultrafilters(&g).len(), 5);
//! let rep = build_rep(&g, RepKind::Ultrafilter);
//! assert_eq!(span_dim(&rep, SpanMode::Full), 25);
//! ```

pub mod cli;
pub mod cones;
pub mod filters;
pub mod matrix;
pub mod parse;
pub mod pgraph;
pub mod reductions;
pub mod rep;
pub mod report;
pub mod semilattice;

/// Exact scalar used by every built-in representation.
pub type Q = num_rational::BigRational;

/// Sparse matrix over the exact rationals.
pub type QMatrix = matrix::SparseMatrix<Q>;

/// Floating-point variant of the matrix type, for callers that do not need
/// exactness. None of the built-in checks use it.
pub type F64Matrix = matrix::SparseMatrix<f64>;

pub use cones::{Cone, Element};
pub use report::{Report, Status};

use thiserror::Error;

/// Crate-wide error type; each operation lists which variants it can raise.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("family mismatch: {0}")]
    FamilyMismatch(String),
    #[error("element is not in the positive cone: {0}")]
    NotPositive(String),
    #[error("operation infeasible for this family: {0}")]
    Infeasible(String),
    #[error("not an order homomorphism: {0}")]
    NotOrderHom(String),
    #[error("paths are not composable: {0}")]
    NotComposable(String),
    #[error("degree is not below the path degree: {0}")]
    DegreeNotBelow(String),
    #[error("set is not contained in the corner: {0}")]
    NotInCorner(String),
    #[error("graph validation failed: {0}")]
    ValidationFailed(String),
    #[error("matrix dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("projections do not commute: {0}")]
    NotCommuting(String),
    #[error("values belong to different graphs: {0}")]
    GraphMismatch(String),
    #[error("not a subset: {0}")]
    NotSubset(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown path: {0}")]
    UnknownPath(String),
}

pub type Result<T> = std::result::Result<T, Error>;

//! Exact scalars over prime fields and the rationals, sparse vectors and
//! matrices, and the column reductions everything else is built on.

mod reduce;
mod scalar;
mod sparse;

pub use reduce::{
    column_reduce, inverse, kernel_basis, rank, solve_in_span, solve_sparse, Echelon, Reduction,
};
pub use scalar::{format_rational, parse_rational, Field, Rational, Scalar};
pub use sparse::{SparseMatrix, SparseVec};

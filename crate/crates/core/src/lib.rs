//! Vandermonde determinants, unisolvent node sets and iterated function
//! systems, with diagnostics for fullness and flatness along nodal sequences
//! that shrink towards a point of a self-similar set.
//!
//! Every routine is generic over [`Scalar`], implemented for exact
//! [`Rational`] arithmetic and for `f64`.

pub mod analysis;
pub mod error;
pub mod expr;
pub mod format;
pub mod ifs;
pub mod matrix;
pub mod multiindex;
pub mod nodesets;
pub mod scalar;
pub mod vandermonde;

pub use error::{Error, Result};
pub use ifs::{AffineMap, Catalog, IfsSystem, NodalEntry, NodalSequence, Word};
pub use matrix::Matrix;
pub use multiindex::{dimension, enumerate_indices, IndexSet, MultiIndex};
pub use nodesets::{Hdeg, HdegResult, Polynomial, Selection};
pub use scalar::{Mode, Rational, Scalar};
pub use vandermonde::{NodeSet, VMatrix};

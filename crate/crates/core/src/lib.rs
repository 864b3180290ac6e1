//! Analysis of algebras generated by degree-2 monomials.
//!
//! A set of distinct degree-2 monomials `f = {f_1, ..., f_m}` in variables
//! `x_1, ..., x_n` is the edge set of a graph with loops: `x_i*x_j` is a
//! proper edge, `x_i^2` a loop. This crate builds that graph and decides
//! structural properties of the subalgebra `k[f]` combinatorially (even
//! closed walks, bow ties, skeletons) while an independent exact-rational
//! linear-algebra oracle verifies every decision on fine-graded slices.
//!
//! All arithmetic that matters is exact: ranks and kernels are computed
//! over the rationals with big integers, never floating point.

pub mod bowtie;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod report;
pub mod syzygy;
pub mod walk;

pub use error::{Error, Result};
pub use monomial::{FineDegree, Monomial2, MonomialSet};

/// Exact rational scalar used throughout the crate.
pub type Rat = num::BigRational;
/// Arbitrary-precision integer.
pub type Int = num::BigInt;
/// Matrix over the exact rational scalar.
pub type RatMatrix = linalg::Matrix<Rat>;

//! Spectral node centrality from a sampled subset of adjacency columns and rows.
//!
//! The crate approximates subgraph centrality, total communicability, the Katz
//! index and eigenvector centrality of a network when only `ℓ ≪ n` columns
//! (or rows) of the adjacency matrix are used:
//!
//! * [`graph`] holds the immutable sparse adjacency matrix and its parsers.
//! * [`sampling`] selects columns by the connectivity-guided scheme, with a
//!   uniform baseline.
//! * [`matfun`] evaluates diagonals and row sums of `f(A_ℓ)` for the column
//!   masked matrix through an Arnoldi or Lanczos decomposition.
//! * [`perron`] runs the power method on the implicit product
//!   `A(:,J) A(I,:)`.
//! * [`oracle`] provides dense and full-Krylov reference values.
//! * [`ranking`] turns scores into top-k lists and compares them.
//! * [`generate`] builds seeded synthetic graphs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dense;
pub mod error;
pub mod generate;
pub mod graph;
pub mod matfun;
pub mod oracle;
pub mod perron;
pub mod ranking;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use graph::{EdgeFormat, SparseGraph, SparseVector};
pub use matfun::{FunctionKind, MatfunResult, Method, ScalarFunction, Tolerances};
pub use perron::{PerronConfig, PerronResult};
pub use ranking::{Ranking, RankingReport};
pub use sampling::{SampleKind, SampleSet, Strategy};

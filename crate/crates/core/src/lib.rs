//! Exact combinatorial and metric geometry over finite data.
//!
//! The crate has three layers:
//!
//! * **Interlacing graphs.** Finite subsets of the positive integers form a
//!   graph under interlacing adjacency; its path metric coincides with an
//!   interval-counting distance computable in linear time
//!   ([`interlacing::d_sum`]), with an independent BFS oracle and explicit
//!   geodesics.
//! * **Certified embeddings.** Any finite rational metric space embeds into
//!   the interlacing graph on `k`-element sets with distortion at most
//!   `1/(1-eps)`; [`embedding::embed`] runs the full pipeline (rounding,
//!   doubling, block construction) in exact rational arithmetic and returns a
//!   certificate that [`embedding::verify_embedding`] re-checks from scratch.
//! * **Transfinite combinatorics.** Schreier families indexed by ordinals
//!   below `w^w` ([`schreier`]), their trees and ranks ([`tree`]), vines of
//!   bunches ([`vine`]), index functions ([`indexfn`]), and a four-chart
//!   gluing scheme that extends embeddings of balls to the whole space
//!   ([`gluing`]).
//!
//! All arithmetic is exact (`num-rational`); nothing here samples randomness
//! or keeps global state, so every function is deterministic and safe to call
//! concurrently.

#![forbid(unsafe_code)]

pub mod embedding;
pub mod gluing;
pub mod indexfn;
pub mod interlacing;
pub mod metric;
pub mod modulus;
pub mod ordinal;
pub mod rational;
pub mod schreier;
pub mod seq;
pub mod set;
pub mod tree;
pub mod vine;

pub use metric::FiniteMetric;
pub use ordinal::OrdinalCNF;
pub use rational::Rational;
pub use seq::FinSuppSeq;
pub use set::FinSet;

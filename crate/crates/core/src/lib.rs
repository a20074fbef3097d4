//! Sparse regularity machinery on random graphs.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`] and [`multipartite`]: host graphs, multipartite blow-ups and
//!   density primitives over bit-vector adjacency.
//! - [`pattern`]: the fixed template graph `H` (2-density, balance, chromatic
//!   number).
//! - [`regularity`]: `(ε,p)`-regularity, lower-regularity and upper-uniformity
//!   checkers that either certify (small pairs) or refute with a witness.
//! - [`partition`]: energy-increment regular partitions, cleaning, reduced
//!   graphs and cluster-graph trimming.
//! - [`counting`] and [`gk`]: exact canonical-copy counting and a small-`n`
//!   clique-density oracle.
//! - [`random`]: seeded generators, substreams and multi-round exposure.
//! - [`packing`]: exact `K_k`-factor search on small cluster graphs.
//! - [`experiments`]: Monte Carlo harnesses producing reproducible reports.

// Recursive search helpers carry their state explicitly.
#![allow(clippy::too_many_arguments)]

pub mod bitset;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod gk;
pub mod graph;
pub mod multipartite;
pub mod packing;
pub mod partition;
pub mod pattern;
pub mod random;
pub mod rational;
pub mod regularity;

pub use error::{Error, Result};
pub use graph::{SimpleGraph, VertexSetPair};
pub use multipartite::MultipartiteGraph;
pub use pattern::PatternGraph;
pub use random::RngStream;
pub use rational::Rational;

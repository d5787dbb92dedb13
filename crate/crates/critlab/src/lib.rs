//! critlab: a verification laboratory for clique-count bounds in k-critical
//! graphs.
//!
//! The library turns the small-graph end of critical-graph theory into
//! executable checks: exhaustive isomorph-free censuses over all graphs of a
//! given order, exact chromatic and criticality certification, clique
//! statistics, GF(2) rank arguments over clique incidence vectors, and
//! machine-checkable trace certificates for the bound t_{k-1}(G) <= n - k + 3
//! on k-critical graphs with more than k vertices.

pub mod canon;
pub mod census;
pub mod cliques;
pub mod coloring;
pub mod criticality;
pub mod gf2;
pub mod graph;
pub mod graph6;
pub mod trace;

pub use canon::{canonical_form, is_isomorphic};
pub use graph::{Graph, GraphError, VertexSet, WParams, MAX_VERTICES};

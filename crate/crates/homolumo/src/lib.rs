//! Spectral gaps of bridged graphs.
//!
//! This crate computes the HOMO-LUMO spectral gap of an undirected graph —
//! the distance between the smallest positive and the largest negative
//! adjacency eigenvalue — and searches for the bipartite bridge between two
//! graphs that maximizes the gap of the combined graph.
//!
//! The pieces, bottom to top:
//!
//! - [`linalg`]: dense symmetric eigensolver (cyclic Jacobi) and exact
//!   rational matrix arithmetic (fraction-free elimination) for
//!   invertibility certificates.
//! - [`graph`]: simple undirected graphs, builtin families, JSON and DOT
//!   serialization, and 0/1 bipartite bridge patterns.
//! - [`spectral`]: the gap itself, an inverse-based semidefinite
//!   characterization of it, and exact block inverses of bridged adjacency
//!   matrices via Schur complements.
//! - [`bridging`]: bridged-graph construction, the *arbitrarily bridgeable*
//!   test (a zero principal submatrix of the exact inverse), and validated
//!   search instances with side constraints.
//! - [`sdp`]: a self-contained primal-dual interior-point solver for linear
//!   matrix inequalities, plus the assembly of the gap, coupling, and
//!   operator-norm problems the optimizer needs.
//! - [`optimizer`]: branch-and-bound and exhaustive search for the
//!   gap-maximizing bridge, semidefinite upper bounds, and closed-form
//!   lower bounds.
//! - [`report`] and [`tables`]: machine-readable run reports and the
//!   built-in benchmark instances.

pub mod bridging;
pub mod graph;
pub mod linalg;
pub mod optimizer;
pub mod report;
pub mod sdp;
pub mod spectral;
pub mod tables;

//! Graphs of groups and the word problems around them.
//!
//! The crate is organised bottom-up:
//!
//! - [`multigraph`]: finite multigraphs with oriented edges, spanning trees, chains.
//! - [`freewords`]: free reduction, presentations, abelianization via Smith normal form.
//! - [`permgroup`]: permutations, closure enumeration, p-group predicates.
//! - [`elemabelian`]: the index bijections `lambda`/`mu` over `Z/n` and `Z`, sparse
//!   exponent vectors over `Z/p`, and the automorphisms they induce.
//! - [`normalform`]: free products, amalgams and Britton reduction over finite factors.
//! - [`gog`]: the graph-of-groups model and the presentation of its fundamental group.
//! - [`paperlab`]: the semidirect models of the amalgams `P_n`, `P_inf`, the finite
//!   quotients, separation certificates and the kernel-witness construction.
//! - [`cover`]: the unfolding of a tree over the free group on its edges.
//!
//! Batch workloads (random trials, closure frontiers, unfolding) run on rayon when
//! the `parallel` feature is enabled and fall back to plain iterators otherwise; see
//! [`exec`].

pub mod cover;
pub mod elemabelian;
mod error;
pub mod exec;
pub mod freewords;
pub mod gog;
pub mod multigraph;
pub mod normalform;
pub mod paperlab;
pub mod permgroup;

pub use error::{Error, Result};

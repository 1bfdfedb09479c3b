//! Balanced load allocations on finite hypergraphs.
//!
//! Every edge of a hypergraph carries one unit of load that it splits among
//! its own vertices. An allocation is *balanced* when no edge sends load to a
//! vertex that is strictly more loaded than another vertex of the same edge.
//! This crate computes such allocations (exactly and in their entropy-smoothed
//! ε form), checks the finite identities they satisfy, solves for the maximum
//! load through densest-subhypergraph duality, and studies the behaviour of
//! sparse random hypergraphs through their Galton-Watson local limit:
//!
//! - [`hypercore`]: hypergraph model, neighborhoods, hypertree test, canonical codes.
//! - [`balancer`]: exact and ε-balanced allocations, verification, response functions.
//! - [`treesolver`]: exact loads on finite hypertrees through the response recursion.
//! - [`maxload`]: maximum load and densest subhypergraph (brute force and min-cut).
//! - [`genmodel`]: type distributions, Galton-Watson hypertrees, configuration model.
//! - [`lwc`]: neighborhood census and local-weak-convergence statistics.
//! - [`rde`]: population dynamics for the limiting distributional fixed point.
//!
//! Data-parallel loops go through [`exec::Exec`]; with the `parallel` feature
//! (default) they run on rayon, otherwise sequentially. Results never depend
//! on which path ran.

// `!(x > 0.0)` is how parameter checks reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod balancer;
pub mod error;
pub mod exec;
pub mod genmodel;
pub mod hypercore;
pub mod lwc;
pub mod maxload;
pub mod rde;
pub mod seed;
pub mod treesolver;

pub use error::{Error, Result};
pub use hypercore::{Baseload, Hypergraph, MultiHypergraph, RootedHypertree};

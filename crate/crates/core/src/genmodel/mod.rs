//! Random hypergraph models.
//!
//! A vertex *type* counts incident edges per edge size. A type distribution
//! `P` drives the unimodular Galton-Watson hypertree (root type `~ P`, a
//! vertex entered through a size-`s` edge draws its remaining type from the
//! size-biased law `P̂_s`) and, through i.i.d. type sequences, the
//! configuration model whose erased version converges locally to it.

mod config;
mod gwt;
mod types;

pub use config::{draw_type_sequence, sample_config, sample_erased, TypeSequence};
pub use gwt::{sample_gwt_k, sample_ugwt, TypeSampler};
pub use types::{size_biased, TypeDistribution, TypeVector};

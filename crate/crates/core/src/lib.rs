//! Minimal cutsets, Bernoulli percolation, killed random walks and Gaussian
//! free fields on finite graphs with a horizon standing in for infinity.

pub mod error;
pub mod graph_core;

pub use error::{Error, Result};
pub mod corpus;
pub mod cover_lemma;
pub mod cutsets;
pub mod fkg_chain;
pub mod gff;
pub mod linalg;
pub mod markov;
pub mod percolation;
pub mod rw_cutsets;
pub mod stats;

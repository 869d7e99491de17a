//! Algorithms and checkers for graphs that sit inside strong products.
//!
//! Everything here is pure and allocation-only; file formats, generators and
//! the command-line front end live in the `hcw` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod embedding;
pub mod expr;
pub mod graph;
pub mod hereditary;
pub mod induced;
pub mod planar;
pub mod treedecomp;
pub mod twinwidth;

pub use embedding::{check_induced_embedding, EmbeddingVerdict, ProductEmbedding};

pub use graph::{BfsTree, GraphError, LoopGraph, ProductVertex};

#[cfg(test)]
pub(crate) mod testutil;

//! Finite 2-structures: modules, primality, criticality, the outside graph of
//! a prime substructure, half graphs and partially critical structures.

pub mod corpus;
pub mod error;
pub mod format;
pub mod graph;
pub mod halfgraph;
pub mod iso;
pub mod modular;
pub mod outside;
pub mod par;
pub mod structure;
pub mod synth;
pub mod theorems;
pub mod vset;

pub use error::{Error, Result};
pub use graph::Graph;
pub use structure::{Label, PairClass, TwoStructure};
pub use vset::VertexSet;

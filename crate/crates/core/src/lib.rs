//! Hom complexes of graphs, their GF(2) and integral homology, and
//! Stiefel-Whitney height bounds on chromatic numbers.

pub mod algebra;
pub mod bounds;
pub mod complex;
pub mod error;
pub mod graph;
pub mod homology;
pub mod spectral;
pub mod sw;
pub mod vset;

pub use error::{Error, Result};
pub use graph::Graph;
pub use vset::VertexSet;

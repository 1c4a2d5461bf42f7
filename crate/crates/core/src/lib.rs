//! Linear clique-width expressions, exact linear clique-width for small
//! graphs, one-stage modular decomposition, universal quasi-threshold graphs
//! and a decomposition-driven expression builder.

pub mod canon;
pub mod compose;
pub mod corpus;
pub mod decomp;
pub mod embed;
pub mod error;
pub mod exact;
pub mod expr;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod qt;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};

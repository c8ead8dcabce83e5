//! Densest-subgraph estimation from uniform edge samples, with a
//! strict-turnstile streaming sampler built on linear sketches.

pub mod cli;
pub mod densest;
pub mod error;
pub mod graph;
pub mod hashing;
pub mod heavy;
pub mod seed;
pub mod sketch;
pub mod stream;

pub use error::{Error, Result};
pub use graph::{Density, Edge, EdgeId, Graph, VertexId};

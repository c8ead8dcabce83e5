//! Linear sketches over dynamic edge streams.

pub mod codec;
mod sampler;
mod sparse;

pub use sampler::{LeveledSampler, SampledGraph, SamplerConfig, SamplerLayout};
pub use sparse::{Cell, DecodeFailure, SparseParams, SparseRecovery};

//! Path allocation on networks with per-node allocation matrices.
//!
//! A node splits the capacity of each of its interfaces among interface pairs.
//! The allocators in [`allocators`] turn the pair allocations along a path into
//! an end-to-end bandwidth value using only on-path information.

pub mod allocators;
pub mod error;
pub mod fixture;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod relay;
pub mod resource;
pub mod topology;

pub use allocators::{
    alloc_a1, alloc_a2, gma_direct, gma_prefix, gma_recursive, AllocationTrace, Allocator,
    GmaAccumulator, HopRecord, PathView,
};
pub use error::{Error, Result};
pub use graph::{AllocationGraph, GraphBuilder, Hop, InterfaceId, NodeId, Path};
pub use resource::{Rational, Resource};
